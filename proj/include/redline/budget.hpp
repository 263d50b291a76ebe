#pragma once

#include <cstddef>
#include <set>

#include "redline/stopwords.hpp"
#include "redline/tokenize.hpp"

namespace redline {

enum class BudgetDenominator {
  kAllTokens,       // max = ceil(epsilon * total token count)
  kEligibleTokens,  // max = ceil(epsilon * non-stopword token count)
};

struct AttackBudget {
  double epsilon = 0.0;
  std::size_t max_substitutions = 0;
  std::set<std::size_t> eligible_positions;  // non-stopword, non-punctuation
};

// Throws ValidationError if epsilon is outside [0, 1].
AttackBudget budget_for(const TokenSequence& seq, double epsilon,
                        const StopwordList& stopwords = StopwordList::default_english(),
                        BudgetDenominator denominator = BudgetDenominator::kAllTokens);

// Positions a substitution attack may touch: word tokens not on the stopword
// list. Shared by budget_for, perturbation sampling, and entropy ranking.
std::set<std::size_t> eligible_positions(const TokenSequence& seq, const StopwordList& stopwords);

}  // namespace redline
