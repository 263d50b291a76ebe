#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "redline/lm.hpp"

namespace redline {

// Word-level n-gram model with add-k smoothing: the desk-scale stand-in for
// a real LLM. Pure function of (corpus, order, smoothing); every context's
// conditional distribution sums to 1.
class NgramToyLM : public LanguageModel {
 public:
  // order >= 2; smoothing_k is clamped to >= 1e-12 so logits stay finite.
  NgramToyLM(std::string corpus_text, int order = 3, double smoothing_k = 0.01,
             std::string model_id = "toy-ngram");

  static NgramToyLM from_file(const std::string& path, int order = 3, double smoothing_k = 0.01);

  const std::string& id() const override { return id_; }
  const Vocabulary& vocab() const override { return vocab_; }
  bool exposes_logits() const override { return true; }

  std::vector<double> next_token_logits(const TokenSequence& context) const override;
  double score_sequence(const TokenSequence& seq) const override;
  TokenSequence complete(const TokenSequence& prompt, const GenerationParams& params) const override;

  // log p(token_id | context_ids), context already clipped to order-1.
  double log_prob(std::span<const int> context_ids, int token_id) const;

  // Unigram distribution over the vocabulary (used by the fallback perturber).
  const std::vector<double>& unigram_probs() const { return unigram_probs_; }

  int order() const { return order_; }

 private:
  struct ContextCounts {
    std::uint64_t total = 0;
    std::unordered_map<int, std::uint64_t> counts;
  };

  std::string id_;
  int order_;
  double k_;
  Vocabulary vocab_;
  std::unordered_map<std::string, ContextCounts> tables_;  // packed context ids -> counts
  std::vector<double> unigram_probs_;

  static std::string pack_context(std::span<const int> ids);
  const ContextCounts* find_context(std::span<const int> ids) const;
  std::span<const int> clip_context(std::span<const int> ids) const;
  std::vector<double> logits_for_ids(std::span<const int> context_ids) const;
};

}  // namespace redline
