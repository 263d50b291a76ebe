#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "redline/lm.hpp"
#include "redline/tokenize.hpp"

namespace redline {

// Per-position substitution candidates for one source sequence.
struct SubstitutionCandidateSet {
  std::map<std::size_t, std::vector<std::string>> by_position;
  std::map<std::size_t, std::string> errors;  // positions whose batch failed
  std::string model_id;
  std::uint64_t prompt_hash = 0;  // folded over every prompt issued
  int n_max = 10;
  std::size_t queries = 0;  // calls made to G' (cache hits excluded)

  bool has(std::size_t position) const {
    auto it = by_position.find(position);
    return it != by_position.end() && !it->second.empty();
  }
};

// Instruction-model prompt, verbatim template with {n} substitutions per word.
// Throws ValidationError when a word does not occur in text (token match) or
// words is empty.
std::string build_instruction_prompt(const std::string& text, const std::vector<std::string>& words,
                                     int n);

// Completion-model prompt asking for equivalents of one word; double quotes
// inside the word are escaped by doubling.
std::string build_completion_prompt(const std::string& text, const std::string& word);

struct ParseResult {
  std::map<std::string, std::vector<std::string>> by_word;
  std::size_t skipped_lines = 0;
  std::size_t parsed_items = 0;        // before self-copy removal
  std::size_t self_copies_dropped = 0;
};

// Total parser for model output in either style. Lines starting with a
// letter-paren marker ("a)") are treated as completion-style items for the
// single requested word; otherwise "word: a, b, c" lines are matched against
// requested_words case-insensitively. Never throws.
ParseResult parse_substitutions(const std::string& llm_output,
                                const std::vector<std::string>& requested_words);

struct GatherOptions {
  int n_max = 10;                 // candidates kept per position
  int max_candidate_tokens = 3;   // substitutions must tokenize to fewer than 4 tokens
  int batch_words = 8;            // words per instruction prompt
  GenerationParams generation;    // params for completion-model calls
  std::uint64_t seed = 0;
};

// Content-addressed candidate cache; safe for concurrent use. Persists as
// JSONL records {"text_hash":..., "position":..., "candidates":[...]}.
class CandidateCache {
 public:
  std::optional<std::vector<std::string>> lookup(std::uint64_t text_hash, std::size_t position) const;
  void store(std::uint64_t text_hash, std::size_t position, std::vector<std::string> candidates);

  void load_file(const std::string& path);  // missing file is an empty cache
  void save_file(const std::string& path) const;
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::pair<std::uint64_t, std::size_t>, std::vector<std::string>> entries_;
};

// Asks G' for substitution candidates at the given positions. Instruction
// models get batched word lists; completion models one prompt per position.
// Backend failures mark the affected positions and leave the rest intact.
SubstitutionCandidateSet gather_candidates(const TokenSequence& sequence,
                                           const std::vector<std::size_t>& positions,
                                           const LanguageModel& model, const GatherOptions& options,
                                           CandidateCache* cache = nullptr);

// Applies the original token's capitalization pattern to a replacement.
std::string match_capitalization(const std::string& original, const std::string& candidate);

}  // namespace redline
