#include "redline/attacks.hpp"

#include <algorithm>
#include <cmath>

#include "redline/errors.hpp"
#include "redline/rng.hpp"

namespace redline {

void GeneticConfig::validate() const {
  if (population_size < 2) throw ValidationError("genetic: population_size must be >= 2");
  if (generations < 1) throw ValidationError("genetic: generations must be >= 1");
}

namespace {

// Positions both eligible under the budget and covered by candidates.
std::vector<std::size_t> usable_positions(const SubstitutionCandidateSet& candidates,
                                          const AttackBudget& budget) {
  std::vector<std::size_t> usable;
  for (const auto& [pos, list] : candidates.by_position) {
    if (list.empty()) continue;
    if (budget.eligible_positions.count(pos) == 0) continue;
    usable.push_back(pos);
  }
  return usable;
}

AttackResult empty_attack(const TokenSequence& sequence, std::string method, std::uint64_t seed,
                          std::string reason) {
  AttackResult result;
  result.original = sequence;
  result.attacked = sequence;
  result.method = std::move(method);
  result.seed = seed;
  result.annotations["empty_attack"] = std::move(reason);
  return result;
}

}  // namespace

AttackResult query_free_random(const TokenSequence& sequence,
                               const SubstitutionCandidateSet& candidates,
                               const AttackBudget& budget, std::uint64_t seed) {
  const std::vector<std::size_t> usable = usable_positions(candidates, budget);
  if (usable.empty()) {
    return empty_attack(sequence, "query_free_random", seed, "no candidates at any eligible position");
  }

  Rng rng(seed);
  const std::size_t take = std::min(budget.max_substitutions, usable.size());
  std::vector<std::size_t> chosen = rng.sample(usable, take);
  std::sort(chosen.begin(), chosen.end());

  AttackResult result;
  result.original = sequence;
  result.attacked = sequence;
  result.method = "query_free_random";
  result.seed = seed;
  result.g_prime_queries = candidates.queries;
  for (std::size_t pos : chosen) {
    const auto& list = candidates.by_position.at(pos);
    const std::string& pick = list[rng.next_index(list.size())];
    result.attacked.tokens[pos] = match_capitalization(sequence.tokens[pos], pick);
    if (result.attacked.tokens[pos] != sequence.tokens[pos]) result.changed_positions.insert(pos);
  }
  if (result.changed_positions.empty()) result.annotations["empty_attack"] = "candidates collapsed onto originals";
  return result;
}

std::vector<std::size_t> entropy_rank(const TokenSequence& sequence, const LanguageModel& entropy_model,
                                      const StopwordList& stopwords) {
  const auto eligible = eligible_positions(sequence, stopwords);
  std::vector<std::pair<std::size_t, double>> scored;
  scored.reserve(eligible.size());
  for (std::size_t pos : eligible) {
    const double h = token_entropy(entropy_model, sequence.prefix(pos));
    scored.emplace_back(pos, h);
  }
  // Input is index-ascending, so stable sort leaves ties ordered by position.
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::size_t> order;
  order.reserve(scored.size());
  for (const auto& [pos, h] : scored) order.push_back(pos);
  return order;
}

AttackResult watermark_query_free(const TokenSequence& sequence, const LanguageModel& entropy_model,
                                  const LanguageModel& g_prime, const AttackBudget& budget,
                                  const WatermarkConfig& wm_cfg, const GatherOptions& gather_options,
                                  CandidateCache* cache) {
  wm_cfg.validate();
  AttackResult result;
  result.original = sequence;
  result.attacked = sequence;
  result.method = "watermark_query_free";
  result.seed = gather_options.seed;

  if (budget.max_substitutions == 0) {
    result.annotations["empty_attack"] = "zero budget";
    return result;
  }

  std::vector<std::size_t> ranked = entropy_rank(sequence, entropy_model);
  std::vector<std::size_t> targets;
  for (std::size_t pos : ranked) {
    if (budget.eligible_positions.count(pos) == 0) continue;
    targets.push_back(pos);
    if (targets.size() == budget.max_substitutions) break;
  }
  if (targets.empty()) {
    result.annotations["empty_attack"] = "no eligible positions";
    return result;
  }

  // The attacker's model runs under the same watermark it is trying to evade.
  GatherOptions protected_options = gather_options;
  if (g_prime.exposes_logits()) {
    LogitTransform wm = make_watermark_transform(g_prime.vocab(), wm_cfg);
    if (protected_options.generation.logit_transform) {
      LogitTransform inner = protected_options.generation.logit_transform;
      protected_options.generation.logit_transform = [inner, wm](std::span<const int> ctx,
                                                                 std::span<double> logits) {
        inner(ctx, logits);
        wm(ctx, logits);
      };
    } else {
      protected_options.generation.logit_transform = wm;
    }
  }

  const SubstitutionCandidateSet candidates =
      gather_candidates(sequence, targets, g_prime, protected_options, cache);
  result.g_prime_queries = candidates.queries;
  if (!candidates.errors.empty()) {
    result.annotations["gather_errors"] = std::to_string(candidates.errors.size());
  }

  for (std::size_t pos : targets) {
    auto it = candidates.by_position.find(pos);
    if (it == candidates.by_position.end() || it->second.empty()) continue;
    const std::string replacement = match_capitalization(sequence.tokens[pos], it->second.front());
    if (replacement == sequence.tokens[pos]) continue;
    result.attacked.tokens[pos] = replacement;
    result.changed_positions.insert(pos);
  }
  if (result.changed_positions.empty()) result.annotations["empty_attack"] = "no surviving candidates";
  return result;
}

AttackResult genetic_attack(const TokenSequence& sequence, const SubstitutionCandidateSet& candidates,
                            const ScoreFn& detector, const AttackBudget& budget,
                            const GeneticConfig& cfg) {
  cfg.validate();
  const std::vector<std::size_t> positions = usable_positions(candidates, budget);
  if (positions.empty()) {
    throw ValidationError("genetic_attack: no candidates at any eligible position");
  }

  // A member is its set of substitutions; fitness is cached alongside.
  struct Member {
    std::map<std::size_t, std::string> changes;
    double score = 0.0;
  };

  AttackResult result;
  result.original = sequence;
  result.attacked = sequence;
  result.method = "genetic_attack";
  result.seed = cfg.seed;

  Rng rng(cfg.seed);

  auto materialize = [&sequence](const Member& member) {
    TokenSequence out = sequence;
    for (const auto& [pos, tok] : member.changes) out.tokens[pos] = tok;
    return out;
  };
  auto repair = [&](Member& member) {
    while (member.changes.size() > budget.max_substitutions) {
      std::size_t idx = rng.next_index(member.changes.size());
      auto it = member.changes.begin();
      std::advance(it, static_cast<std::ptrdiff_t>(idx));
      member.changes.erase(it);
    }
  };
  auto substitution_for = [&](std::size_t pos) -> const std::string& {
    const auto& list = candidates.by_position.at(pos);
    return list[rng.next_index(list.size())];
  };

  Member best;
  bool have_best = false;
  bool aborted = false;

  auto evaluate = [&](Member& member, int generation, int index) -> bool {
    try {
      member.score = detector(materialize(member));
    } catch (const std::exception& e) {
      result.annotations["detector_error"] = e.what();
      aborted = true;
      return false;
    }
    ++result.detector_queries;
    result.query_trace.push_back({generation, index, member.score});
    if (!have_best || member.score < best.score) {
      best = member;
      have_best = true;
    }
    return true;
  };

  std::vector<Member> population;
  population.reserve(cfg.population_size);
  for (std::size_t i = 0; i < cfg.population_size && !aborted; ++i) {
    Member member;
    const std::size_t pos = positions[rng.next_index(positions.size())];
    member.changes[pos] = match_capitalization(sequence.tokens[pos], substitution_for(pos));
    if (member.changes[pos] == sequence.tokens[pos]) member.changes.erase(pos);
    repair(member);
    if (evaluate(member, 0, static_cast<int>(i))) population.push_back(std::move(member));
  }

  for (int gen = 1; gen < cfg.generations && !aborted && !population.empty(); ++gen) {
    // Elitism: the incumbent best moves over without a fresh detector call.
    std::size_t elite_idx = 0;
    for (std::size_t i = 1; i < population.size(); ++i) {
      if (population[i].score < population[elite_idx].score) elite_idx = i;
    }
    std::vector<Member> next;
    next.reserve(cfg.population_size);
    next.push_back(population[elite_idx]);

    std::vector<double> weights(population.size());
    double total = 0.0;
    for (std::size_t i = 0; i < population.size(); ++i) {
      weights[i] = std::max(1.0 - population[i].score, 0.0);
      total += weights[i];
    }
    auto sample_parent = [&]() -> const Member& {
      if (total <= 0.0) return population[rng.next_index(population.size())];
      double u = rng.next_double() * total;
      double cum = 0.0;
      for (std::size_t i = 0; i < population.size(); ++i) {
        cum += weights[i];
        if (u < cum) return population[i];
      }
      return population.back();
    };

    for (std::size_t i = 1; i < cfg.population_size && !aborted; ++i) {
      const Member& p1 = sample_parent();
      const Member& p2 = sample_parent();

      Member child;
      std::set<std::size_t> touched;
      for (const auto& [pos, tok] : p1.changes) touched.insert(pos);
      for (const auto& [pos, tok] : p2.changes) touched.insert(pos);
      for (std::size_t pos : touched) {
        const Member& donor = rng.next_double() < 0.5 ? p1 : p2;
        auto it = donor.changes.find(pos);
        if (it != donor.changes.end()) child.changes[pos] = it->second;
      }

      // Mutation: one random position flips to a random candidate or back to
      // the original token.
      const std::size_t pos = positions[rng.next_index(positions.size())];
      const auto& list = candidates.by_position.at(pos);
      const std::size_t option = rng.next_index(list.size() + 1);
      if (option == list.size()) {
        child.changes.erase(pos);
      } else {
        std::string replacement = match_capitalization(sequence.tokens[pos], list[option]);
        if (replacement == sequence.tokens[pos]) {
          child.changes.erase(pos);
        } else {
          child.changes[pos] = std::move(replacement);
        }
      }

      repair(child);
      if (evaluate(child, gen, static_cast<int>(i))) next.push_back(std::move(child));
    }
    if (!aborted) population = std::move(next);
  }

  if (have_best) {
    result.attacked = materialize(best);
    for (const auto& [pos, tok] : best.changes) result.changed_positions.insert(pos);
    result.score_after = best.score;
    result.scores_measured = true;
  }
  result.g_prime_queries = candidates.queries;
  return result;
}

AttackResult paraphrase_baseline(const TokenSequence& sequence, const LanguageModel& g_prime,
                                 const GenerationParams& params) {
  const std::string prompt =
      "Please paraphrase the following passage, with at least 200 words:\n\n" + detokenize(sequence);
  const std::string rewritten = g_prime.instruct(prompt, params);

  AttackResult result;
  result.original = sequence;
  result.attacked = tokenize(rewritten);
  result.method = "paraphrase";
  result.seed = params.seed;
  result.g_prime_queries = 1;
  result.annotations["budget_exempt"] = "true";
  return result;
}

}  // namespace redline
