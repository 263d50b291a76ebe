#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "redline/budget.hpp"
#include "redline/lm.hpp"
#include "redline/substitution.hpp"
#include "redline/tokenize.hpp"
#include "redline/watermark.hpp"

namespace redline {

// One detector call made during a query-based attack.
struct DetectorQueryRecord {
  int generation = 0;
  int member = 0;
  double score = 0.0;
};

struct AttackResult {
  TokenSequence original;
  TokenSequence attacked;
  std::set<std::size_t> changed_positions;
  std::size_t g_prime_queries = 0;
  std::size_t detector_queries = 0;
  double score_before = 0.0;  // filled by the evaluation harness unless the
  double score_after = 0.0;   // attack itself queried the detector
  bool scores_measured = false;
  std::string method;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> annotations;
  std::vector<DetectorQueryRecord> query_trace;
};

// Black-box detector as seen by attacks: score in [0,1] for a candidate
// sequence.
using ScoreFn = std::function<double(const TokenSequence&)>;

struct GeneticConfig {
  std::size_t population_size = 10;  // N_p >= 2
  int generations = 10;              // N_G >= 1
  std::uint64_t seed = 0;

  void validate() const;
};

// Substitutes uniformly random candidates at uniformly chosen eligible
// positions until the budget (or the candidate supply) is exhausted.
// Never queries the detector.
AttackResult query_free_random(const TokenSequence& sequence,
                               const SubstitutionCandidateSet& candidates,
                               const AttackBudget& budget, std::uint64_t seed);

// Eligible positions sorted by descending prediction entropy of the model
// entering each position; ties resolved toward lower indices.
std::vector<std::size_t> entropy_rank(const TokenSequence& sequence, const LanguageModel& entropy_model,
                                      const StopwordList& stopwords = StopwordList::default_english());

// Two-stage watermark attack: rank by entropy, then substitute the top
// budget positions with candidates generated by G' running under the same
// watermark. Query-free with respect to the detector.
AttackResult watermark_query_free(const TokenSequence& sequence, const LanguageModel& entropy_model,
                                  const LanguageModel& g_prime, const AttackBudget& budget,
                                  const WatermarkConfig& wm_cfg, const GatherOptions& gather_options,
                                  CandidateCache* cache = nullptr);

// Evolutionary search (elitism, fitness-proportional parents on 1-score,
// uniform crossover, single-position mutation, random-reversion budget
// repair). Detector queries bounded by population_size * generations.
AttackResult genetic_attack(const TokenSequence& sequence, const SubstitutionCandidateSet& candidates,
                            const ScoreFn& detector, const AttackBudget& budget,
                            const GeneticConfig& cfg);

// Whole-text rewrite via the instruction model; exempt from the substitution
// budget and marked as such.
AttackResult paraphrase_baseline(const TokenSequence& sequence, const LanguageModel& g_prime,
                                 const GenerationParams& params = {});

}  // namespace redline
