#include "redline/tokenize.hpp"

#include <cctype>

#include "redline/errors.hpp"

namespace redline {

namespace {

bool is_space_byte(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) || c == '_' || c >= 0x80;
}

}  // namespace

TokenSequence tokenize(std::string_view text) {
  TokenSequence seq;
  seq.source.assign(text);
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (is_space_byte(c)) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (is_word_byte(c)) {
      ++i;
      while (i < n) {
        unsigned char b = static_cast<unsigned char>(text[i]);
        if (is_word_byte(b)) {
          ++i;
        } else if (b == '\'' && i + 1 < n && is_word_byte(static_cast<unsigned char>(text[i + 1]))) {
          i += 2;  // word-internal apostrophe
        } else {
          break;
        }
      }
    } else {
      ++i;  // single punctuation byte
    }
    seq.tokens.emplace_back(text.substr(start, i - start));
    seq.spans.emplace_back(start, i);
  }
  return seq;
}

std::string detokenize(const TokenSequence& seq) {
  std::string out;
  out.reserve(seq.source.size());
  std::size_t prev_end = 0;
  for (std::size_t k = 0; k < seq.tokens.size(); ++k) {
    const auto [start, end] = seq.spans[k];
    out.append(seq.source, prev_end, start - prev_end);
    out.append(seq.tokens[k]);
    prev_end = end;
  }
  out.append(seq.source, prev_end, seq.source.size() - prev_end);
  return out;
}

TokenSequence sequence_from_tokens(std::vector<std::string> tokens) {
  TokenSequence seq;
  seq.tokens = std::move(tokens);
  seq.spans.reserve(seq.tokens.size());
  for (std::size_t k = 0; k < seq.tokens.size(); ++k) {
    if (k > 0) seq.source.push_back(' ');
    std::size_t start = seq.source.size();
    seq.source.append(seq.tokens[k]);
    seq.spans.emplace_back(start, seq.source.size());
  }
  return seq;
}

TokenSequence TokenSequence::with_token(std::size_t k, std::string replacement) const {
  TokenSequence copy = *this;
  copy.tokens[k] = std::move(replacement);
  return copy;
}

TokenSequence TokenSequence::prefix(std::size_t n) const {
  if (n >= tokens.size()) return *this;
  TokenSequence out;
  out.tokens.assign(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(n));
  out.spans.assign(spans.begin(), spans.begin() + static_cast<std::ptrdiff_t>(n));
  std::size_t cut = n == 0 ? 0 : spans[n - 1].second;
  out.source = source.substr(0, cut);
  return out;
}

bool is_punctuation_token(std::string_view token) {
  for (unsigned char c : token) {
    if (is_word_byte(c)) return false;
  }
  return !token.empty();
}

std::size_t hamming_substitutions(const TokenSequence& a, const TokenSequence& b) {
  if (a.size() != b.size()) {
    throw ValidationError("hamming_substitutions: length mismatch (" + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + ")");
  }
  std::size_t count = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a.tokens[k] != b.tokens[k]) ++count;
  }
  return count;
}

}  // namespace redline
