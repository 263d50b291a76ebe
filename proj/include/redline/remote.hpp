#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "redline/detectors.hpp"
#include "redline/lm.hpp"

namespace redline {

struct HttpPolicy {
  int timeout_ms = 10000;
  int max_retries = 2;   // additional attempts after the first
  int backoff_ms = 50;
  int max_in_flight = 4;
};

struct RemoteLMOptions {
  std::string base_url;  // e.g. http://127.0.0.1:8089
  std::string auth_token;
  HttpPolicy policy;
  bool supports_instructions = true;
  std::string model_id = "remote-lm";
};

// Client for the completion wire protocol:
//   POST /complete {"prompt","max_tokens","temperature","logprobs","seed"?}
//   -> {"text","tokens",["token_logprobs"]}
// Scoring reuses the endpoint with max_tokens=0 and logprobs=true, which
// returns the prompt's own tokens and their log-probabilities. Logits are
// not exposed over the wire, so this backend cannot be watermark-wrapped.
class RemoteLMClient : public LanguageModel {
 public:
  explicit RemoteLMClient(RemoteLMOptions options);
  ~RemoteLMClient() override;

  const std::string& id() const override;
  const Vocabulary& vocab() const override;
  bool exposes_logits() const override { return false; }

  std::vector<double> next_token_logits(const TokenSequence& context) const override;
  double score_sequence(const TokenSequence& seq) const override;
  TokenSequence complete(const TokenSequence& prompt, const GenerationParams& params) const override;
  bool supports_instructions() const override;
  std::string instruct(const std::string& instruction, const GenerationParams& params) const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct RemoteDetectorOptions {
  std::string base_url;
  std::string auth_token;
  HttpPolicy policy;
  std::size_t min_chars = 1000;
  double threshold = 0.9;
};

// Client for POST /detect {"text"} -> {"score"}. Texts below min_chars are
// rejected before any request is made.
class RemoteDetector : public Detector {
 public:
  explicit RemoteDetector(RemoteDetectorOptions options);
  ~RemoteDetector() override;

  const std::string& id() const override;
  DetectionVerdict detect(std::string_view text) const override;
  double threshold() const override;
  void set_threshold(double tau) override;

  std::size_t min_chars() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace redline
