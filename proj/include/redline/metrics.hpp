#pragma once

#include <span>
#include <vector>

namespace redline {

// Probability a random positive outranks a random negative, ties at 1/2
// (Mann-Whitney). Sort-and-rank, O(n log n). Throws ValidationError on an
// empty side.
double auroc(std::span<const double> positive_scores, std::span<const double> negative_scores);

// Fraction of scores >= threshold. Throws ValidationError when empty.
double detection_rate(std::span<const double> scores, double threshold);

// Among examples flagged before, the fraction no longer flagged after.
// Throws ValidationError on length mismatch or when nothing was flagged
// before (empty denominator).
double attack_success_rate(std::span<const bool> flagged_before, std::span<const bool> flagged_after);

}  // namespace redline
