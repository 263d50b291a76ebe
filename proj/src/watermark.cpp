#include "redline/watermark.hpp"

#include <cmath>

#include "redline/errors.hpp"
#include "redline/rng.hpp"

namespace redline {

void WatermarkConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ValidationError("watermark: gamma must be in (0, 1), got " + std::to_string(gamma));
  }
  if (delta < 0.0) {
    throw ValidationError("watermark: delta must be >= 0, got " + std::to_string(delta));
  }
}

std::uint64_t token_key(std::string_view token) { return fnv1a64(token); }

namespace {

std::uint64_t fold_context(std::span<const std::uint64_t> prev_keys, int context_width) {
  std::span<const std::uint64_t> window = prev_keys;
  std::size_t pad = 0;
  if (context_width > 0) {
    const auto width = static_cast<std::size_t>(context_width);
    if (window.size() > width) {
      window = window.subspan(window.size() - width);
    } else {
      pad = width - window.size();
    }
  }
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < pad; ++i) acc = mix64(acc ^ kBosKey);
  for (std::uint64_t k : window) acc = mix64(acc ^ k);
  return acc;
}

}  // namespace

bool is_green(std::span<const std::uint64_t> prev_keys, std::uint64_t candidate_key,
              const WatermarkConfig& cfg) {
  const std::uint64_t seed = mix64(cfg.key ^ fold_context(prev_keys, cfg.context_width));
  const std::uint64_t draw = mix64(seed ^ candidate_key) & 0xFFFFFFFFULL;
  const auto threshold = static_cast<std::uint64_t>(cfg.gamma * 4294967296.0);
  return draw < threshold;
}

std::vector<double> watermarked_logits(std::span<const double> base_logits,
                                       std::span<const std::uint64_t> prev_keys,
                                       std::span<const std::uint64_t> vocab_keys,
                                       const WatermarkConfig& cfg) {
  std::vector<double> out(base_logits.begin(), base_logits.end());
  // One context fold shared by the whole row; only the candidate key varies.
  const std::uint64_t seed = mix64(cfg.key ^ fold_context(prev_keys, cfg.context_width));
  const auto threshold = static_cast<std::uint64_t>(cfg.gamma * 4294967296.0);
  for (std::size_t t = 0; t < out.size() && t < vocab_keys.size(); ++t) {
    if ((mix64(seed ^ vocab_keys[t]) & 0xFFFFFFFFULL) < threshold) out[t] += cfg.delta;
  }
  return out;
}

LogitTransform make_watermark_transform(const Vocabulary& vocab, const WatermarkConfig& cfg) {
  std::vector<std::uint64_t> vocab_keys;
  vocab_keys.reserve(vocab.size());
  for (std::size_t t = 0; t < vocab.size(); ++t) {
    vocab_keys.push_back(token_key(vocab.token(static_cast<int>(t))));
  }
  return [vocab_keys = std::move(vocab_keys), cfg](std::span<const int> context_ids,
                                                   std::span<double> logits) {
    std::vector<std::uint64_t> prev_keys;
    if (cfg.context_width > 0) {
      const auto width = static_cast<std::size_t>(cfg.context_width);
      const std::size_t take = std::min(width, context_ids.size());
      prev_keys.reserve(take);
      for (std::size_t i = context_ids.size() - take; i < context_ids.size(); ++i) {
        prev_keys.push_back(vocab_keys[static_cast<std::size_t>(context_ids[i])]);
      }
    } else {
      prev_keys.reserve(context_ids.size());
      for (int id : context_ids) prev_keys.push_back(vocab_keys[static_cast<std::size_t>(id)]);
    }
    const std::uint64_t seed = mix64(cfg.key ^ fold_context(prev_keys, cfg.context_width));
    const auto threshold = static_cast<std::uint64_t>(cfg.gamma * 4294967296.0);
    for (std::size_t t = 0; t < logits.size(); ++t) {
      if ((mix64(seed ^ vocab_keys[t]) & 0xFFFFFFFFULL) < threshold) logits[t] += cfg.delta;
    }
  };
}

TokenSequence generate_watermarked(const LanguageModel& model, const TokenSequence& prompt,
                                   const GenerationParams& params, const WatermarkConfig& cfg) {
  cfg.validate();
  if (!model.exposes_logits()) {
    throw CapabilityError("watermarking requires a backend that exposes logits: " + model.id());
  }
  GenerationParams wrapped = params;
  LogitTransform wm = make_watermark_transform(model.vocab(), cfg);
  if (params.logit_transform) {
    LogitTransform inner = params.logit_transform;
    wrapped.logit_transform = [inner, wm](std::span<const int> ctx, std::span<double> logits) {
      inner(ctx, logits);
      wm(ctx, logits);
    };
  } else {
    wrapped.logit_transform = wm;
  }
  return model.complete(prompt, wrapped);
}

double z_score(std::size_t green_count, std::size_t scored_tokens, double gamma) {
  if (scored_tokens == 0) throw ValidationError("z_score: scored_tokens must be >= 1");
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ValidationError("z_score: gamma must be in (0, 1)");
  }
  const double t = static_cast<double>(scored_tokens);
  const double g = static_cast<double>(green_count);
  return (g - gamma * t) / std::sqrt(t * gamma * (1.0 - gamma));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

WatermarkScore detect_watermark(std::string_view text, const WatermarkConfig& cfg) {
  cfg.validate();
  const TokenSequence seq = tokenize(text);
  const std::size_t m = seq.size();
  if (m < 2) {
    throw InsufficientLengthError("detect_watermark: need at least 2 tokens, got " +
                                  std::to_string(m));
  }
  const std::size_t skip = cfg.context_width > 0 ? static_cast<std::size_t>(cfg.context_width) : 1;
  if (skip >= m) {
    throw InsufficientLengthError("detect_watermark: context width " + std::to_string(skip) +
                                  " leaves no scorable token in a " + std::to_string(m) +
                                  "-token text");
  }

  std::vector<std::uint64_t> keys;
  keys.reserve(m);
  for (const auto& tok : seq.tokens) keys.push_back(token_key(tok));

  WatermarkScore result;
  result.scored_tokens = m - skip;
  for (std::size_t pos = skip; pos < m; ++pos) {
    std::span<const std::uint64_t> prev(keys.data(), pos);
    if (is_green(prev, keys[pos], cfg)) ++result.green_count;
  }
  result.z = z_score(result.green_count, result.scored_tokens, cfg.gamma);
  result.score = normal_cdf(result.z);
  return result;
}

}  // namespace redline
