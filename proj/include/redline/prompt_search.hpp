#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "redline/lm.hpp"

namespace redline {

// Detector as seen by the search: score in [0,1] for a generated text.
using TextScoreFn = std::function<double(const std::string&)>;

// Min-priority queue over (score, insertion order): pop returns the
// lowest-scored output, ties in insertion order.
class OutputPool {
 public:
  void push(double score, std::string text);
  std::optional<std::pair<double, std::string>> pop();
  std::size_t size() const { return entries_.size(); }

 private:
  std::set<std::tuple<double, std::uint64_t, std::string>> entries_;
  std::uint64_t next_seq_ = 0;
};

struct PromptCandidate {
  std::string instruction;
  std::string reference;
  double detection_rate = 0.0;
  double avg_score = 0.0;
  int iteration_found = 0;
};

struct PromptSearchConfig {
  std::size_t n_train = 50;
  int iterations = 5;  // T
  int beam = 5;        // K
  double threshold = 0.9;
  std::string initial_instruction =
      "Meanwhile please imitate the writing style and wording of the following passage:";
  std::uint64_t seed = 0;
  GenerationParams generation;

  void validate() const;
};

struct PromptEvaluationRecord {
  int iteration = 0;
  std::string phase;  // baseline | reference | instruction
  std::string instruction;
  std::string reference;
  double detection_rate = 0.0;
  double avg_score = 0.0;
  std::size_t generator_calls = 0;  // cumulative
  std::size_t detector_calls = 0;   // cumulative
  std::size_t paraphrase_calls = 0; // cumulative
  std::size_t skipped_examples = 0;
};

struct PromptSearchResult {
  PromptCandidate best;
  std::vector<PromptEvaluationRecord> trace;
  std::size_t generator_calls = 0;
  std::size_t detector_calls = 0;
  std::size_t paraphrase_calls = 0;
  bool partial = false;
  std::string error;
};

// Prompt assembly used for every generation call: input, instruction and
// reference joined by blank lines, empty parts skipped.
std::string assemble_prompt(const std::string& input, const std::string& instruction,
                            const std::string& reference);

struct GenerateAndDetectOutcome {
  double detection_rate = 0.0;
  double avg_score = 0.0;
  std::size_t generated = 0;
  std::size_t skipped = 0;
};

// Generates one output per input under [input, instruction, reference],
// scores each with the detector, pushes everything into the pool. Failed
// examples are skipped and counted; throws BackendError when nothing
// succeeds.
GenerateAndDetectOutcome generate_and_detect(const std::vector<std::string>& inputs,
                                             const std::string& instruction,
                                             const std::string& reference, const LanguageModel& model,
                                             const TextScoreFn& detector, double threshold,
                                             OutputPool& pool, const GenerationParams& params);

// Alternating reference / instruction search for the attacking prompt.
PromptSearchResult search_prompt(const std::vector<std::string>& train_inputs,
                                 const LanguageModel& model, const TextScoreFn& detector,
                                 const PromptSearchConfig& cfg);

}  // namespace redline
