#include "redline/substitution.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <nlohmann/json.hpp>

#include "redline/errors.hpp"
#include "redline/rng.hpp"

namespace redline {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) out.push_back(static_cast<char>(std::tolower(c)));
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

bool token_occurs(const TokenSequence& seq, const std::string& word) {
  return std::find(seq.tokens.begin(), seq.tokens.end(), word) != seq.tokens.end();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

// "a)" / "b)" at the start of a trimmed line.
bool is_marker_line(const std::string& line, std::size_t* body_offset) {
  std::size_t i = 0;
  while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
  if (i + 1 >= line.size()) return false;
  if (!std::islower(static_cast<unsigned char>(line[i]))) return false;
  if (line[i + 1] != ')') return false;
  if (body_offset != nullptr) *body_offset = i + 2;
  return true;
}

// First quoted string in body, else the first whitespace-delimited chunk with
// trailing punctuation stripped.
std::string completion_item(std::string_view body) {
  std::size_t open = body.find('"');
  if (open != std::string_view::npos) {
    std::size_t close = body.find('"', open + 1);
    if (close != std::string_view::npos) {
      return trim(body.substr(open + 1, close - open - 1));
    }
  }
  std::size_t i = 0;
  while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
  std::size_t j = i;
  while (j < body.size() && !std::isspace(static_cast<unsigned char>(body[j]))) ++j;
  std::string word(body.substr(i, j - i));
  while (!word.empty() && std::ispunct(static_cast<unsigned char>(word.back()))) word.pop_back();
  while (!word.empty() && (word.front() == '"' || word.front() == '\'')) word.erase(word.begin());
  return word;
}

}  // namespace

std::string build_instruction_prompt(const std::string& text, const std::vector<std::string>& words,
                                     int n) {
  if (words.empty()) throw ValidationError("build_instruction_prompt: empty word list");
  const TokenSequence seq = tokenize(text);
  std::string joined;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!token_occurs(seq, words[i])) {
      throw ValidationError("build_instruction_prompt: word not present in text: " + words[i]);
    }
    if (i > 0) joined += ", ";
    joined += words[i];
  }
  std::string prompt = "Given this sentence: \"";
  prompt += text;
  prompt += "\", for each word in \"";
  prompt += joined;
  prompt += "\", give ";
  prompt += std::to_string(n);
  prompt +=
      " substitution words that do not change the meaning of the sentence. "
      "Return each word and its substitutions in one line, in the format of "
      "\"word:substitutions\"";
  return prompt;
}

std::string build_completion_prompt(const std::string& text, const std::string& word) {
  if (word.empty()) throw ValidationError("build_completion_prompt: empty word");
  if (!token_occurs(tokenize(text), word)) {
    throw ValidationError("build_completion_prompt: word not present in text: " + word);
  }
  std::string escaped;
  escaped.reserve(word.size());
  for (char c : word) {
    escaped.push_back(c);
    if (c == '"') escaped.push_back('"');
  }
  std::string prompt = "\"";
  prompt += text;
  prompt += "\"\nThe word \"";
  prompt += escaped;
  prompt += "\" in the above sentence is equivalent to:\na)";
  return prompt;
}

ParseResult parse_substitutions(const std::string& llm_output,
                                const std::vector<std::string>& requested_words) {
  ParseResult result;
  const std::vector<std::string> lines = split_lines(llm_output);

  bool completion_style = false;
  for (const auto& line : lines) {
    if (is_marker_line(line, nullptr)) {
      completion_style = true;
      break;
    }
  }

  if (completion_style) {
    if (requested_words.empty()) {
      result.skipped_lines = lines.size();
      return result;
    }
    const std::string& word = requested_words.front();
    auto& out = result.by_word[word];
    for (const auto& line : lines) {
      std::size_t offset = 0;
      if (!is_marker_line(line, &offset)) {
        if (!trim(line).empty()) ++result.skipped_lines;
        continue;
      }
      std::string item = completion_item(std::string_view(line).substr(offset));
      if (item.empty()) {
        ++result.skipped_lines;
        continue;
      }
      ++result.parsed_items;
      if (iequals(item, word)) {
        ++result.self_copies_dropped;
        continue;
      }
      out.push_back(std::move(item));
    }
    return result;
  }

  for (const auto& line : lines) {
    if (trim(line).empty()) continue;
    const std::size_t colon = line.find(':');
    if (colon == std::string::npos) {
      ++result.skipped_lines;
      continue;
    }
    const std::string key = trim(line.substr(0, colon));
    const std::string* matched = nullptr;
    for (const auto& w : requested_words) {
      if (iequals(key, w)) {
        matched = &w;
        break;
      }
    }
    if (matched == nullptr) {
      ++result.skipped_lines;
      continue;
    }
    auto& out = result.by_word[*matched];
    std::string rest = line.substr(colon + 1);
    std::size_t start = 0;
    while (start <= rest.size()) {
      std::size_t comma = rest.find(',', start);
      std::string item = trim(comma == std::string::npos ? rest.substr(start)
                                                         : rest.substr(start, comma - start));
      if (!item.empty()) {
        ++result.parsed_items;
        if (iequals(item, *matched)) {
          ++result.self_copies_dropped;
        } else {
          out.push_back(std::move(item));
        }
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return result;
}

std::optional<std::vector<std::string>> CandidateCache::lookup(std::uint64_t text_hash,
                                                               std::size_t position) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = entries_.find({text_hash, position});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void CandidateCache::store(std::uint64_t text_hash, std::size_t position,
                           std::vector<std::string> candidates) {
  std::lock_guard<std::mutex> lock(mutex_);
  entries_[{text_hash, position}] = std::move(candidates);
}

void CandidateCache::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("text_hash") || !j.contains("position") ||
        !j.contains("candidates")) {
      continue;
    }
    std::uint64_t hash = std::stoull(j.at("text_hash").get<std::string>(), nullptr, 16);
    store(hash, j.at("position").get<std::size_t>(),
          j.at("candidates").get<std::vector<std::string>>());
  }
}

void CandidateCache::save_file(const std::string& path) const {
  std::lock_guard<std::mutex> lock(mutex_);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ValidationError("candidate cache not writable: " + path);
  char hex[17];
  for (const auto& [key, candidates] : entries_) {
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(key.first));
    nlohmann::json j{{"text_hash", hex}, {"position", key.second}, {"candidates", candidates}};
    out << j.dump() << '\n';
  }
}

std::size_t CandidateCache::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return entries_.size();
}

namespace {

std::vector<std::string> filter_candidates(const std::vector<std::string>& raw,
                                           const std::string& original,
                                           const GatherOptions& options) {
  std::vector<std::string> kept;
  std::vector<std::string> seen_lower;
  for (const auto& item : raw) {
    const std::string candidate = trim(item);
    if (candidate.empty()) continue;
    if (iequals(candidate, original)) continue;
    const std::size_t token_count = tokenize(candidate).size();
    if (token_count == 0 || token_count > static_cast<std::size_t>(options.max_candidate_tokens)) {
      continue;
    }
    std::string lowered = lower(candidate);
    if (std::find(seen_lower.begin(), seen_lower.end(), lowered) != seen_lower.end()) continue;
    seen_lower.push_back(std::move(lowered));
    kept.push_back(candidate);
    if (kept.size() >= static_cast<std::size_t>(options.n_max)) break;
  }
  return kept;
}

}  // namespace

SubstitutionCandidateSet gather_candidates(const TokenSequence& sequence,
                                           const std::vector<std::size_t>& positions,
                                           const LanguageModel& model, const GatherOptions& options,
                                           CandidateCache* cache) {
  SubstitutionCandidateSet set;
  set.model_id = model.id();
  set.n_max = options.n_max;
  const std::uint64_t text_hash = fnv1a64(sequence.source);
  const std::string text = detokenize(sequence);

  std::vector<std::size_t> wanted(positions.begin(), positions.end());
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());

  std::vector<std::size_t> misses;
  for (std::size_t pos : wanted) {
    if (pos >= sequence.size()) {
      throw ValidationError("gather_candidates: position out of range: " + std::to_string(pos));
    }
    if (cache != nullptr) {
      if (auto hit = cache->lookup(text_hash, pos)) {
        set.by_position[pos] = std::move(*hit);
        continue;
      }
    }
    misses.push_back(pos);
  }

  auto record_prompt = [&set](const std::string& prompt) {
    set.prompt_hash = mix64(set.prompt_hash ^ fnv1a64(prompt));
  };

  if (model.supports_instructions()) {
    const std::size_t batch = std::max<std::size_t>(1, static_cast<std::size_t>(options.batch_words));
    for (std::size_t begin = 0; begin < misses.size(); begin += batch) {
      const std::size_t end = std::min(begin + batch, misses.size());
      std::vector<std::string> words;
      for (std::size_t i = begin; i < end; ++i) {
        const std::string& w = sequence.tokens[misses[i]];
        if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(w);
      }
      std::string prompt;
      try {
        prompt = build_instruction_prompt(text, words, options.n_max);
        record_prompt(prompt);
        GenerationParams params = options.generation;
        params.seed = derive_seed(options.seed ^ text_hash, "gather-batch", begin);
        const std::string output = model.instruct(prompt, params);
        ++set.queries;
        const ParseResult parsed = parse_substitutions(output, words);
        for (std::size_t i = begin; i < end; ++i) {
          const std::size_t pos = misses[i];
          const std::string& original = sequence.tokens[pos];
          std::vector<std::string> raw;
          auto it = parsed.by_word.find(original);
          if (it != parsed.by_word.end()) raw = it->second;
          auto kept = filter_candidates(raw, original, options);
          if (cache != nullptr) cache->store(text_hash, pos, kept);
          set.by_position[pos] = std::move(kept);
        }
      } catch (const BackendError& e) {
        ++set.queries;
        for (std::size_t i = begin; i < end; ++i) set.errors[misses[i]] = e.what();
      }
    }
  } else {
    for (std::size_t pos : misses) {
      const std::string& original = sequence.tokens[pos];
      try {
        const std::string prompt = build_completion_prompt(text, original);
        record_prompt(prompt);
        GenerationParams params = options.generation;
        params.seed = derive_seed(options.seed ^ text_hash, "gather-pos", pos);
        const TokenSequence completion = model.complete(tokenize(prompt), params);
        ++set.queries;
        const std::string output = "a) " + detokenize(completion);
        const ParseResult parsed = parse_substitutions(output, {original});
        std::vector<std::string> raw;
        auto it = parsed.by_word.find(original);
        if (it != parsed.by_word.end()) raw = it->second;
        auto kept = filter_candidates(raw, original, options);
        if (cache != nullptr) cache->store(text_hash, pos, kept);
        set.by_position[pos] = std::move(kept);
      } catch (const BackendError& e) {
        ++set.queries;
        set.errors[pos] = e.what();
      }
    }
  }
  return set;
}

std::string match_capitalization(const std::string& original, const std::string& candidate) {
  auto first_alpha = std::find_if(original.begin(), original.end(), [](unsigned char c) {
    return std::isalpha(c) != 0;
  });
  if (first_alpha == original.end()) return candidate;

  std::size_t alpha_count = 0;
  std::size_t upper_count = 0;
  for (unsigned char c : original) {
    if (std::isalpha(c)) {
      ++alpha_count;
      if (std::isupper(c)) ++upper_count;
    }
  }

  std::string out = candidate;
  if (alpha_count > 1 && upper_count == alpha_count) {
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  } else if (std::isupper(static_cast<unsigned char>(*first_alpha))) {
    for (char& c : out) {
      if (std::isalpha(static_cast<unsigned char>(c))) {
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        break;
      }
    }
  } else {
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

}  // namespace redline
