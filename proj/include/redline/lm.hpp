#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "redline/tokenize.hpp"

namespace redline {

// Ordered token inventory. Id 0 is reserved for <unk>; unknown lookups map
// there.
class Vocabulary {
 public:
  static constexpr int kUnkId = 0;

  Vocabulary();
  explicit Vocabulary(std::vector<std::string> tokens);  // sorted, deduplicated

  int id_of(std::string_view token) const;
  const std::string& token(int id) const { return tokens_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return tokens_.size(); }

  std::vector<int> ids_of(const TokenSequence& seq) const;

 private:
  std::vector<std::string> tokens_;
  std::vector<std::pair<std::string_view, int>> index_;  // sorted for lookup
  void build_index();
};

// Hook applied to next-token logits before sampling. The watermark is one of
// these; composing with the identity leaves generation unchanged.
using LogitTransform = std::function<void(std::span<const int> context_ids, std::span<double> logits)>;

struct GenerationParams {
  int max_tokens = 100;
  double temperature = 1.0;  // 0 = greedy
  std::uint64_t seed = 0;
  LogitTransform logit_transform;  // optional
};

// Uniform contract over the generator G, the attacker's model G' and the
// entropy model M. Implementations must be deterministic functions of
// (construction inputs, call arguments).
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;

  virtual const std::string& id() const = 0;
  virtual const Vocabulary& vocab() const = 0;

  // True when next_token_logits is available (required for watermarking).
  virtual bool exposes_logits() const = 0;

  // One finite logit per vocabulary entry; softmax sums to 1 within 1e-9.
  virtual std::vector<double> next_token_logits(const TokenSequence& context) const = 0;

  // Total log-likelihood in nats, sum over log p(y_i | y_<i). Always <= 0.
  // Throws ValidationError on an empty sequence.
  virtual double score_sequence(const TokenSequence& seq) const = 0;

  // Autoregressive continuation of the prompt; returns the generated tokens
  // only. Deterministic given params.seed.
  virtual TokenSequence complete(const TokenSequence& prompt, const GenerationParams& params) const = 0;

  virtual bool supports_instructions() const { return false; }

  // Free-form instruction following. Throws CapabilityError unless
  // supports_instructions().
  virtual std::string instruct(const std::string& instruction, const GenerationParams& params) const;
};

// Numerically stable softmax (in place over a copy).
std::vector<double> softmax(std::span<const double> logits);

// Prediction entropy H = -sum p ln p of the model's next-token distribution
// after `context`, in nats. Bounded by ln |V|.
double token_entropy(const LanguageModel& model, const TokenSequence& context);

}  // namespace redline
