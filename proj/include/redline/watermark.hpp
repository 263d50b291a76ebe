#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "redline/lm.hpp"

namespace redline {

struct WatermarkConfig {
  double delta = 1.0;   // logit offset added to greenlist tokens, >= 0
  double gamma = 0.5;   // greenlist fraction, in (0, 1) for detection
  std::uint64_t key = 1234567890123ULL;
  int context_width = 1;  // preceding tokens hashed; <= 0 means full prefix

  void validate() const;
};

struct WatermarkScore {
  std::size_t green_count = 0;
  std::size_t scored_tokens = 0;
  double z = 0.0;
  double score = 0.0;  // Phi(z), shared [0,1] detector contract
};

// Detection hashes token strings directly (no vocabulary needed), so the
// generator side must feed the same keys; see make_watermark_transform.
std::uint64_t token_key(std::string_view token);

// Context key used when fewer than context_width tokens precede a position.
inline constexpr std::uint64_t kBosKey = 0x424F53ULL;

// Greenlist membership for a candidate token after the given context.
// prev_keys shorter than context_width is padded in front with kBosKey.
bool is_green(std::span<const std::uint64_t> prev_keys, std::uint64_t candidate_key,
              const WatermarkConfig& cfg);

// base_logits with +delta applied exactly on greenlist entries.
std::vector<double> watermarked_logits(std::span<const double> base_logits,
                                       std::span<const std::uint64_t> prev_keys,
                                       std::span<const std::uint64_t> vocab_keys,
                                       const WatermarkConfig& cfg);

// LogitTransform implementing the watermark for a model's vocabulary.
// Precomputes per-entry keys; composes with any transform already set.
LogitTransform make_watermark_transform(const Vocabulary& vocab, const WatermarkConfig& cfg);

// complete() with the watermark transform installed.
TokenSequence generate_watermarked(const LanguageModel& model, const TokenSequence& prompt,
                                   const GenerationParams& params, const WatermarkConfig& cfg);

// One-proportion z statistic for the greenlist count.
// Throws ValidationError when scored_tokens is 0 or gamma is not in (0, 1).
double z_score(std::size_t green_count, std::size_t scored_tokens, double gamma);

double normal_cdf(double z);

// Tokenizes, recounts greenlist membership over positions with full context
// (the first context_width tokens are skipped), maps z through Phi.
// Throws InsufficientLengthError when no position can be scored.
WatermarkScore detect_watermark(std::string_view text, const WatermarkConfig& cfg);

}  // namespace redline
