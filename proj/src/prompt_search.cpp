#include "redline/prompt_search.hpp"

#include <algorithm>

#include "redline/errors.hpp"
#include "redline/rng.hpp"

namespace redline {

void OutputPool::push(double score, std::string text) {
  entries_.emplace(score, next_seq_++, std::move(text));
}

std::optional<std::pair<double, std::string>> OutputPool::pop() {
  if (entries_.empty()) return std::nullopt;
  auto it = entries_.begin();
  std::pair<double, std::string> out{std::get<0>(*it), std::get<2>(*it)};
  entries_.erase(it);
  return out;
}

void PromptSearchConfig::validate() const {
  if (n_train < 1) throw ValidationError("prompt_search: n_train must be >= 1");
  if (iterations < 1) throw ValidationError("prompt_search: iterations must be >= 1");
  if (beam < 1) throw ValidationError("prompt_search: beam must be >= 1");
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ValidationError("prompt_search: threshold must be in [0, 1]");
  }
}

std::string assemble_prompt(const std::string& input, const std::string& instruction,
                            const std::string& reference) {
  std::string prompt = input;
  for (const std::string* part : {&instruction, &reference}) {
    if (part->empty()) continue;
    if (!prompt.empty()) prompt += "\n\n";
    prompt += *part;
  }
  return prompt;
}

GenerateAndDetectOutcome generate_and_detect(const std::vector<std::string>& inputs,
                                             const std::string& instruction,
                                             const std::string& reference, const LanguageModel& model,
                                             const TextScoreFn& detector, double threshold,
                                             OutputPool& pool, const GenerationParams& params) {
  GenerateAndDetectOutcome outcome;
  double score_sum = 0.0;
  std::size_t flagged = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    GenerationParams per_input = params;
    per_input.seed = derive_seed(params.seed, "input", i);
    std::string output;
    double score;
    try {
      output = model.instruct(assemble_prompt(inputs[i], instruction, reference), per_input);
      score = detector(output);
    } catch (const BackendError&) {
      ++outcome.skipped;
      continue;
    }
    pool.push(score, std::move(output));
    ++outcome.generated;
    score_sum += score;
    if (score >= threshold) ++flagged;
  }
  if (outcome.generated == 0) {
    throw BackendError("generate_and_detect: every example failed");
  }
  outcome.detection_rate = static_cast<double>(flagged) / static_cast<double>(outcome.generated);
  outcome.avg_score = score_sum / static_cast<double>(outcome.generated);
  return outcome;
}

namespace {

struct Evaluated {
  std::string instruction;
  std::string reference;
  double detection_rate;
  double avg_score;
  std::size_t order;
};

// argmin by (detection_rate, avg_score, discovery order)
const Evaluated& best_of(const std::vector<Evaluated>& evaluated) {
  const Evaluated* best = &evaluated.front();
  for (const auto& e : evaluated) {
    if (std::tie(e.detection_rate, e.avg_score, e.order) <
        std::tie(best->detection_rate, best->avg_score, best->order)) {
      best = &e;
    }
  }
  return *best;
}

}  // namespace

PromptSearchResult search_prompt(const std::vector<std::string>& train_inputs,
                                 const LanguageModel& model, const TextScoreFn& detector,
                                 const PromptSearchConfig& cfg) {
  cfg.validate();
  if (train_inputs.empty()) throw ValidationError("search_prompt: no training inputs");
  if (!model.supports_instructions()) {
    throw CapabilityError("search_prompt requires an instruction-following model: " + model.id());
  }

  PromptSearchResult result;
  OutputPool pool;

  auto evaluate = [&](const std::string& instruction, const std::string& reference, int iteration,
                      const std::string& phase) {
    GenerationParams params = cfg.generation;
    params.seed = derive_seed(cfg.seed, "eval-iter", static_cast<std::uint64_t>(iteration));
    const GenerateAndDetectOutcome outcome = generate_and_detect(
        train_inputs, instruction, reference, model, detector, cfg.threshold, pool, params);
    result.generator_calls += outcome.generated + outcome.skipped;
    result.detector_calls += outcome.generated;
    PromptEvaluationRecord record;
    record.iteration = iteration;
    record.phase = phase;
    record.instruction = instruction;
    record.reference = reference;
    record.detection_rate = outcome.detection_rate;
    record.avg_score = outcome.avg_score;
    record.generator_calls = result.generator_calls;
    record.detector_calls = result.detector_calls;
    record.paraphrase_calls = result.paraphrase_calls;
    record.skipped_examples = outcome.skipped;
    result.trace.push_back(record);
    return outcome;
  };

  std::string instruction = cfg.initial_instruction;
  std::string reference;

  try {
    const auto baseline = evaluate("", "", 0, "baseline");
    result.best = {"", "", baseline.detection_rate, baseline.avg_score, 0};

    for (int t = 1; t <= cfg.iterations; ++t) {
      // Update the reference from the K lowest-scored pool outputs.
      std::vector<std::string> popped;
      for (int k = 0; k < cfg.beam; ++k) {
        auto entry = pool.pop();
        if (!entry) break;
        popped.push_back(std::move(entry->second));
      }
      if (popped.empty()) {
        PromptEvaluationRecord record;
        record.iteration = t;
        record.phase = "reference";
        record.instruction = instruction;
        record.reference = reference;
        record.detection_rate = result.best.detection_rate;
        record.avg_score = result.best.avg_score;
        record.generator_calls = result.generator_calls;
        record.detector_calls = result.detector_calls;
        record.paraphrase_calls = result.paraphrase_calls;
        result.trace.push_back(record);
      } else {
        std::vector<Evaluated> evaluated;
        for (std::size_t i = 0; i < popped.size(); ++i) {
          const auto outcome = evaluate(instruction, popped[i], t, "reference");
          evaluated.push_back(
              {instruction, popped[i], outcome.detection_rate, outcome.avg_score, i});
        }
        const Evaluated& winner = best_of(evaluated);
        reference = winner.reference;
        result.best = {winner.instruction, winner.reference, winner.detection_rate,
                       winner.avg_score, t};
      }

      // Update the instruction: incumbent plus K paraphrased variants.
      std::vector<std::string> candidates{instruction};
      for (int k = 0; k < cfg.beam; ++k) {
        GenerationParams params = cfg.generation;
        params.seed = derive_seed(cfg.seed, "paraphrase", static_cast<std::uint64_t>(t) * 1000 +
                                                              static_cast<std::uint64_t>(k));
        try {
          std::string variant = model.instruct(
              "Please paraphrase the following instruction, keeping its meaning: " + instruction,
              params);
          ++result.paraphrase_calls;
          candidates.push_back(std::move(variant));
        } catch (const BackendError&) {
          ++result.paraphrase_calls;
          // A failed paraphrase shrinks the candidate set; the incumbent stays.
        }
      }
      std::vector<Evaluated> evaluated;
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto outcome = evaluate(candidates[i], reference, t, "instruction");
        evaluated.push_back({candidates[i], reference, outcome.detection_rate, outcome.avg_score, i});
      }
      const Evaluated& winner = best_of(evaluated);
      instruction = winner.instruction;
      result.best = {winner.instruction, winner.reference, winner.detection_rate, winner.avg_score,
                     t};
    }
  } catch (const BackendError& e) {
    result.partial = true;
    result.error = e.what();
  }
  return result;
}

}  // namespace redline
