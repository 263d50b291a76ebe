#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "redline/budget.hpp"
#include "redline/lm.hpp"
#include "redline/rng.hpp"
#include "redline/watermark.hpp"

namespace redline {

struct DetectionVerdict {
  double score = 0.0;          // [0, 1]
  double raw_statistic = 0.0;  // z, curvature d, or remote probability
  double threshold = 0.5;
  bool flagged = false;  // score >= threshold
  std::map<std::string, std::string> metadata;
};

// Shared black-box contract: higher score means more likely machine-generated.
class Detector {
 public:
  virtual ~Detector() = default;
  virtual const std::string& id() const = 0;
  virtual DetectionVerdict detect(std::string_view text) const = 0;
  virtual double threshold() const = 0;
  virtual void set_threshold(double tau) = 0;
};

class WatermarkDetector : public Detector {
 public:
  WatermarkDetector(WatermarkConfig cfg, double threshold = 0.9);

  const std::string& id() const override { return id_; }
  DetectionVerdict detect(std::string_view text) const override;
  double threshold() const override { return threshold_; }
  void set_threshold(double tau) override { threshold_ = tau; }

 private:
  std::string id_ = "watermark";
  WatermarkConfig cfg_;
  double threshold_;
};

// Replaces the token at `position`; must return something different from the
// original token.
using Perturber = std::function<std::string(const TokenSequence& seq, std::size_t position, Rng& rng)>;

// Resamples from the model's empty-context (unigram) distribution.
Perturber make_lm_perturber(const LanguageModel& model);

struct CurvatureConfig {
  int n_perturbations = 20;
  double mask_rate = 0.15;
  const LanguageModel* scorer = nullptr;
  Perturber perturber;  // defaults to make_lm_perturber(*scorer)
  bool normalized = true;
  std::uint64_t seed = 0;
  const StopwordList* stopwords = &StopwordList::default_english();

  void validate() const;
};

// Replaces ceil(mask_rate * m) eligible tokens (at least one) using the
// perturber. Deterministic given the rng state.
TokenSequence perturb_text(const TokenSequence& seq, double mask_rate, Rng& rng,
                           const Perturber& perturber,
                           const StopwordList& stopwords = StopwordList::default_english());

// Normalized likelihood-gap statistic: d = (l(Y) - mean l(perturbed)) / std,
// mapped to [0,1] through the logistic. Perturbation std of zero falls back
// to the unnormalized gap and sets metadata["std_fallback"].
DetectionVerdict curvature_score(std::string_view text, const CurvatureConfig& cfg,
                                 double threshold = 0.5);

class CurvatureDetector : public Detector {
 public:
  CurvatureDetector(CurvatureConfig cfg, double threshold = 0.5);

  const std::string& id() const override { return id_; }
  DetectionVerdict detect(std::string_view text) const override;
  double threshold() const override { return threshold_; }
  void set_threshold(double tau) override { threshold_ = tau; }

 private:
  std::string id_ = "curvature";
  CurvatureConfig cfg_;
  double threshold_;
};

// Smallest tau with fraction(human_scores >= tau) <= target_fpr, chosen among
// observed scores (or just above the maximum when nothing may be flagged).
// Appends to *warning when fewer than 1/target_fpr samples are supplied.
double calibrate_threshold(std::span<const double> human_scores, double target_fpr,
                           std::string* warning = nullptr);

// Provider class label for a score under the published thresholds
// 0.98 / 0.90 / 0.45 / 0.10.
std::string_view provider_label(double score);

}  // namespace redline
