#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace redline {

// Word-level token sequence with byte spans back into the source text.
// Spans make detokenization lossless: substituting tokens[k] and calling
// detokenize() splices the replacement into the original whitespace layout.
struct TokenSequence {
  std::vector<std::string> tokens;
  std::vector<std::pair<std::size_t, std::size_t>> spans;  // [start, end) byte offsets
  std::string source;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }

  // Copy with tokens[k] replaced. Spans and source are unchanged.
  TokenSequence with_token(std::size_t k, std::string replacement) const;

  // First n tokens, re-anchored to a trimmed copy of the source.
  TokenSequence prefix(std::size_t n) const;
};

// Splits on whitespace; each ASCII punctuation byte is its own token, except
// apostrophes between word characters ("aren't" stays one token). Bytes >=
// 0x80 count as word bytes, so UTF-8 text round-trips untouched.
TokenSequence tokenize(std::string_view text);

std::string detokenize(const TokenSequence& seq);

// Builds a sequence from bare tokens (e.g. model output), joined with single
// spaces as the synthetic source.
TokenSequence sequence_from_tokens(std::vector<std::string> tokens);

// True if the token contains no word bytes (pure punctuation).
bool is_punctuation_token(std::string_view token);

// Count of positions where the two equal-length sequences differ.
// Throws ValidationError on length mismatch.
std::size_t hamming_substitutions(const TokenSequence& a, const TokenSequence& b);

}  // namespace redline
