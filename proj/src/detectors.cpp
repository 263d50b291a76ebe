#include "redline/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "redline/errors.hpp"

namespace redline {

WatermarkDetector::WatermarkDetector(WatermarkConfig cfg, double threshold)
    : cfg_(cfg), threshold_(threshold) {
  cfg_.validate();
}

DetectionVerdict WatermarkDetector::detect(std::string_view text) const {
  const WatermarkScore ws = detect_watermark(text, cfg_);
  DetectionVerdict v;
  v.score = ws.score;
  v.raw_statistic = ws.z;
  v.threshold = threshold_;
  v.flagged = v.score >= threshold_;
  v.metadata["green_count"] = std::to_string(ws.green_count);
  v.metadata["scored_tokens"] = std::to_string(ws.scored_tokens);
  return v;
}

Perturber make_lm_perturber(const LanguageModel& model) {
  // Empty-context distribution === unigram for the toy backend.
  auto probs = std::make_shared<std::vector<double>>(softmax(model.next_token_logits(TokenSequence{})));
  const Vocabulary* vocab = &model.vocab();
  return [probs, vocab](const TokenSequence& seq, std::size_t position, Rng& rng) -> std::string {
    const std::string& original = seq.tokens[position];
    int drawn = 0;
    for (int attempt = 0; attempt < 16; ++attempt) {
      double u = rng.next_double();
      double cum = 0.0;
      drawn = static_cast<int>(probs->size()) - 1;
      for (std::size_t t = 0; t < probs->size(); ++t) {
        cum += (*probs)[t];
        if (u < cum) {
          drawn = static_cast<int>(t);
          break;
        }
      }
      if (vocab->token(drawn) != original) return vocab->token(drawn);
    }
    // Vocabulary scan keeps the result deterministic when sampling keeps
    // hitting the original.
    for (std::size_t t = 0; t < vocab->size(); ++t) {
      int id = static_cast<int>((static_cast<std::size_t>(drawn) + 1 + t) % vocab->size());
      if (vocab->token(id) != original) return vocab->token(id);
    }
    return original;  // single-token vocabulary; nothing else to offer
  };
}

void CurvatureConfig::validate() const {
  if (n_perturbations < 2) throw ValidationError("curvature: n_perturbations must be >= 2");
  if (!(mask_rate > 0.0 && mask_rate < 1.0)) {
    throw ValidationError("curvature: mask_rate must be in (0, 1)");
  }
  if (scorer == nullptr) throw ValidationError("curvature: scorer model not set");
}

TokenSequence perturb_text(const TokenSequence& seq, double mask_rate, Rng& rng,
                           const Perturber& perturber, const StopwordList& stopwords) {
  if (seq.empty()) throw ValidationError("perturb_text: empty sequence");
  const auto eligible_set = eligible_positions(seq, stopwords);
  std::vector<std::size_t> eligible(eligible_set.begin(), eligible_set.end());
  if (eligible.empty()) {
    // Nothing but stopwords/punctuation: fall back to all positions so the
    // >=1 perturbation rule still holds.
    eligible.resize(seq.size());
    for (std::size_t k = 0; k < seq.size(); ++k) eligible[k] = k;
  }
  std::size_t want = static_cast<std::size_t>(
      std::ceil(mask_rate * static_cast<double>(seq.size())));
  want = std::max<std::size_t>(want, 1);
  want = std::min(want, eligible.size());

  std::vector<std::size_t> chosen = rng.sample(eligible, want);
  std::sort(chosen.begin(), chosen.end());
  TokenSequence out = seq;
  for (std::size_t pos : chosen) {
    out.tokens[pos] = perturber(seq, pos, rng);
  }
  return out;
}

DetectionVerdict curvature_score(std::string_view text, const CurvatureConfig& cfg,
                                 double threshold) {
  cfg.validate();
  const TokenSequence seq = tokenize(text);
  if (seq.empty()) throw ValidationError("curvature_score: text has no tokens");

  const Perturber perturber = cfg.perturber ? cfg.perturber : make_lm_perturber(*cfg.scorer);
  const double original_ll = cfg.scorer->score_sequence(seq);

  Rng rng(derive_seed(cfg.seed, "curvature", fnv1a64(text)));
  std::vector<double> perturbed_ll;
  perturbed_ll.reserve(static_cast<std::size_t>(cfg.n_perturbations));
  for (int i = 0; i < cfg.n_perturbations; ++i) {
    const TokenSequence perturbed = perturb_text(seq, cfg.mask_rate, rng, perturber, *cfg.stopwords);
    perturbed_ll.push_back(cfg.scorer->score_sequence(perturbed));
  }

  double mean = 0.0;
  for (double v : perturbed_ll) mean += v;
  mean /= static_cast<double>(perturbed_ll.size());
  double var = 0.0;
  for (double v : perturbed_ll) var += (v - mean) * (v - mean);
  var /= static_cast<double>(perturbed_ll.size() - 1);
  const double sd = std::sqrt(var);

  DetectionVerdict verdict;
  double d;
  if (sd == 0.0) {
    d = original_ll - mean;  // unit scale
    verdict.metadata["std_fallback"] = "true";
  } else if (cfg.normalized) {
    d = (original_ll - mean) / sd;
  } else {
    d = original_ll - mean;
    verdict.metadata["unnormalized"] = "true";
  }
  verdict.raw_statistic = d;
  verdict.score = 1.0 / (1.0 + std::exp(-d));
  verdict.threshold = threshold;
  verdict.flagged = verdict.score >= threshold;
  return verdict;
}

CurvatureDetector::CurvatureDetector(CurvatureConfig cfg, double threshold)
    : cfg_(std::move(cfg)), threshold_(threshold) {
  cfg_.validate();
}

DetectionVerdict CurvatureDetector::detect(std::string_view text) const {
  return curvature_score(text, cfg_, threshold_);
}

double calibrate_threshold(std::span<const double> human_scores, double target_fpr,
                           std::string* warning) {
  if (human_scores.empty()) throw ValidationError("calibrate_threshold: no human scores");
  if (!(target_fpr >= 0.0 && target_fpr <= 1.0)) {
    throw ValidationError("calibrate_threshold: target_fpr must be in [0, 1]");
  }
  const auto n = static_cast<double>(human_scores.size());
  if (target_fpr > 0.0 && n < 1.0 / target_fpr && warning != nullptr) {
    *warning += "calibrate_threshold: " + std::to_string(human_scores.size()) +
                " human scores is fewer than the 1/target_fpr recommended";
  }

  std::vector<double> sorted(human_scores.begin(), human_scores.end());
  std::sort(sorted.begin(), sorted.end());
  const auto allowed = static_cast<std::size_t>(std::floor(target_fpr * n + 1e-9));

  // Scan candidate thresholds ascending; count(x >= sorted[i]) == n - i for
  // the first element of each tie group.
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0 && sorted[i] == sorted[i - 1]) continue;
    if (sorted.size() - i <= allowed) return sorted[i];
  }
  return std::nextafter(sorted.back(), std::numeric_limits<double>::infinity());
}

std::string_view provider_label(double score) {
  if (score >= 0.98) return "likely";
  if (score >= 0.90) return "possibly";
  if (score >= 0.45) return "unclear if it is";
  if (score >= 0.10) return "unlikely";
  return "very unlikely";
}

}  // namespace redline
