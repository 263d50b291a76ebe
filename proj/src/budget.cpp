#include "redline/budget.hpp"

#include <cmath>

#include "redline/errors.hpp"

namespace redline {

std::set<std::size_t> eligible_positions(const TokenSequence& seq, const StopwordList& stopwords) {
  std::set<std::size_t> positions;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const std::string& tok = seq.tokens[k];
    if (is_punctuation_token(tok)) continue;
    if (stopwords.contains(tok)) continue;
    positions.insert(k);
  }
  return positions;
}

AttackBudget budget_for(const TokenSequence& seq, double epsilon, const StopwordList& stopwords,
                        BudgetDenominator denominator) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw ValidationError("budget_for: epsilon must be in [0, 1], got " + std::to_string(epsilon));
  }
  AttackBudget budget;
  budget.epsilon = epsilon;
  budget.eligible_positions = eligible_positions(seq, stopwords);
  const std::size_t m = denominator == BudgetDenominator::kAllTokens
                            ? seq.size()
                            : budget.eligible_positions.size();
  budget.max_substitutions = static_cast<std::size_t>(std::ceil(epsilon * static_cast<double>(m)));
  return budget;
}

}  // namespace redline
