#include "redline/toy_lm.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "redline/errors.hpp"
#include "redline/rng.hpp"

namespace redline {

namespace {
constexpr double kMinSmoothing = 1e-12;
}

NgramToyLM::NgramToyLM(std::string corpus_text, int order, double smoothing_k, std::string model_id)
    : id_(std::move(model_id)), order_(order), k_(std::max(smoothing_k, kMinSmoothing)) {
  if (order_ < 2) throw ValidationError("NgramToyLM: order must be >= 2");
  const TokenSequence corpus = tokenize(corpus_text);
  if (corpus.empty()) throw ValidationError("NgramToyLM: corpus produced no tokens");
  vocab_ = Vocabulary(corpus.tokens);

  std::vector<int> ids = vocab_.ids_of(corpus);
  // Count every context length from 0 (unigram) to order-1 so short prefixes
  // at sequence starts still have a distribution.
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (int len = 0; len < order_; ++len) {
      if (static_cast<std::size_t>(len) > i) break;
      std::span<const int> ctx(ids.data() + i - len, static_cast<std::size_t>(len));
      auto& table = tables_[pack_context(ctx)];
      table.total += 1;
      table.counts[ids[i]] += 1;
    }
  }

  unigram_probs_.assign(vocab_.size(), 0.0);
  const auto& root = tables_.at(pack_context({}));
  const double denom = static_cast<double>(root.total) + k_ * static_cast<double>(vocab_.size());
  for (std::size_t t = 0; t < vocab_.size(); ++t) {
    auto it = root.counts.find(static_cast<int>(t));
    const double c = it == root.counts.end() ? 0.0 : static_cast<double>(it->second);
    unigram_probs_[t] = (c + k_) / denom;
  }
}

NgramToyLM NgramToyLM::from_file(const std::string& path, int order, double smoothing_k) {
  std::ifstream in(path);
  if (!in) throw ValidationError("corpus file not readable: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return NgramToyLM(buf.str(), order, smoothing_k, "toy-ngram:" + path);
}

std::string NgramToyLM::pack_context(std::span<const int> ids) {
  std::string key;
  key.resize(ids.size() * sizeof(int));
  if (!ids.empty()) std::memcpy(key.data(), ids.data(), key.size());
  return key;
}

const NgramToyLM::ContextCounts* NgramToyLM::find_context(std::span<const int> ids) const {
  auto it = tables_.find(pack_context(ids));
  return it == tables_.end() ? nullptr : &it->second;
}

std::span<const int> NgramToyLM::clip_context(std::span<const int> ids) const {
  const std::size_t max_len = static_cast<std::size_t>(order_ - 1);
  if (ids.size() <= max_len) return ids;
  return ids.subspan(ids.size() - max_len);
}

double NgramToyLM::log_prob(std::span<const int> context_ids, int token_id) const {
  const ContextCounts* table = find_context(clip_context(context_ids));
  const double v = static_cast<double>(vocab_.size());
  if (table == nullptr) return std::log(1.0 / v);  // unseen context: smoothing-forced uniform
  double count = 0.0;
  auto it = table->counts.find(token_id);
  if (it != table->counts.end()) count = static_cast<double>(it->second);
  return std::log((count + k_) / (static_cast<double>(table->total) + k_ * v));
}

std::vector<double> NgramToyLM::logits_for_ids(std::span<const int> context_ids) const {
  const std::size_t v = vocab_.size();
  std::vector<double> logits(v);
  const ContextCounts* table = find_context(clip_context(context_ids));
  if (table == nullptr) {
    const double uniform = std::log(1.0 / static_cast<double>(v));
    std::fill(logits.begin(), logits.end(), uniform);
    return logits;
  }
  const double denom = static_cast<double>(table->total) + k_ * static_cast<double>(v);
  const double log_floor = std::log(k_ / denom);
  std::fill(logits.begin(), logits.end(), log_floor);
  for (const auto& [token_id, count] : table->counts) {
    logits[static_cast<std::size_t>(token_id)] =
        std::log((static_cast<double>(count) + k_) / denom);
  }
  return logits;
}

std::vector<double> NgramToyLM::next_token_logits(const TokenSequence& context) const {
  const std::vector<int> ids = vocab_.ids_of(context);
  return logits_for_ids(ids);
}

double NgramToyLM::score_sequence(const TokenSequence& seq) const {
  if (seq.empty()) throw ValidationError("score_sequence: empty sequence");
  const std::vector<int> ids = vocab_.ids_of(seq);
  double total = 0.0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    total += log_prob(std::span<const int>(ids.data(), i), ids[i]);
  }
  return total;
}

TokenSequence NgramToyLM::complete(const TokenSequence& prompt, const GenerationParams& params) const {
  if (params.max_tokens < 1) throw ValidationError("complete: max_tokens must be >= 1");
  if (params.temperature < 0.0) throw ValidationError("complete: temperature must be >= 0");

  std::vector<int> context = vocab_.ids_of(prompt);
  std::vector<std::string> generated;
  generated.reserve(static_cast<std::size_t>(params.max_tokens));
  Rng rng(params.seed);

  for (int step = 0; step < params.max_tokens; ++step) {
    std::vector<double> logits = logits_for_ids(context);
    if (params.logit_transform) {
      params.logit_transform(std::span<const int>(context), std::span<double>(logits));
    }

    int choice;
    if (params.temperature == 0.0) {
      choice = static_cast<int>(
          std::max_element(logits.begin(), logits.end()) - logits.begin());
    } else {
      std::vector<double> scaled(logits.size());
      for (std::size_t t = 0; t < logits.size(); ++t) scaled[t] = logits[t] / params.temperature;
      const std::vector<double> probs = softmax(scaled);
      double u = rng.next_double();
      double cum = 0.0;
      choice = static_cast<int>(probs.size()) - 1;
      for (std::size_t t = 0; t < probs.size(); ++t) {
        cum += probs[t];
        if (u < cum) {
          choice = static_cast<int>(t);
          break;
        }
      }
    }
    context.push_back(choice);
    generated.push_back(vocab_.token(choice));
  }
  return sequence_from_tokens(std::move(generated));
}

}  // namespace redline
