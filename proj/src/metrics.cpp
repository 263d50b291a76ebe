#include "redline/metrics.hpp"

#include <algorithm>
#include <cstddef>

#include "redline/errors.hpp"

namespace redline {

double auroc(std::span<const double> positive_scores, std::span<const double> negative_scores) {
  if (positive_scores.empty() || negative_scores.empty()) {
    throw ValidationError("auroc: both score lists must be non-empty");
  }
  struct Entry {
    double score;
    bool positive;
  };
  std::vector<Entry> all;
  all.reserve(positive_scores.size() + negative_scores.size());
  for (double s : positive_scores) all.push_back({s, true});
  for (double s : negative_scores) all.push_back({s, false});
  std::sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) { return a.score < b.score; });

  // Average ranks across tie groups, then the rank-sum form of U.
  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    while (j < all.size() && all[j].score == all[i].score) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].positive) positive_rank_sum += avg_rank;
    }
    i = j;
  }
  const double np = static_cast<double>(positive_scores.size());
  const double nn = static_cast<double>(negative_scores.size());
  const double u = positive_rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * nn);
}

double detection_rate(std::span<const double> scores, double threshold) {
  if (scores.empty()) throw ValidationError("detection_rate: empty score list");
  std::size_t flagged = 0;
  for (double s : scores) {
    if (s >= threshold) ++flagged;
  }
  return static_cast<double>(flagged) / static_cast<double>(scores.size());
}

double attack_success_rate(std::span<const bool> flagged_before, std::span<const bool> flagged_after) {
  if (flagged_before.size() != flagged_after.size()) {
    throw ValidationError("attack_success_rate: flag lists differ in length");
  }
  std::size_t detected = 0;
  std::size_t flipped = 0;
  for (std::size_t i = 0; i < flagged_before.size(); ++i) {
    if (!flagged_before[i]) continue;
    ++detected;
    if (!flagged_after[i]) ++flipped;
  }
  if (detected == 0) {
    throw ValidationError("attack_success_rate: no example was originally detected");
  }
  return static_cast<double>(flipped) / static_cast<double>(detected);
}

}  // namespace redline
