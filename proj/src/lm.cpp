#include "redline/lm.hpp"

#include <algorithm>
#include <cmath>

#include "redline/errors.hpp"

namespace redline {

Vocabulary::Vocabulary() : tokens_{"<unk>"} { build_index(); }

Vocabulary::Vocabulary(std::vector<std::string> tokens) {
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  tokens_.reserve(tokens.size() + 1);
  tokens_.emplace_back("<unk>");
  for (auto& t : tokens) {
    if (t != "<unk>") tokens_.push_back(std::move(t));
  }
  build_index();
}

void Vocabulary::build_index() {
  index_.clear();
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    index_.emplace_back(tokens_[i], static_cast<int>(i));
  }
  std::sort(index_.begin(), index_.end());
}

int Vocabulary::id_of(std::string_view token) const {
  auto it = std::lower_bound(index_.begin(), index_.end(), token,
                             [](const auto& entry, std::string_view t) { return entry.first < t; });
  if (it != index_.end() && it->first == token) return it->second;
  return kUnkId;
}

std::vector<int> Vocabulary::ids_of(const TokenSequence& seq) const {
  std::vector<int> ids;
  ids.reserve(seq.size());
  for (const auto& t : seq.tokens) ids.push_back(id_of(t));
  return ids;
}

std::string LanguageModel::instruct(const std::string&, const GenerationParams&) const {
  throw CapabilityError("model '" + id() + "' does not support instructions");
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> probs(logits.begin(), logits.end());
  if (probs.empty()) return probs;
  double max_logit = *std::max_element(probs.begin(), probs.end());
  double sum = 0.0;
  for (double& v : probs) {
    v = std::exp(v - max_logit);
    sum += v;
  }
  for (double& v : probs) v /= sum;
  return probs;
}

double token_entropy(const LanguageModel& model, const TokenSequence& context) {
  const auto probs = softmax(model.next_token_logits(context));
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

}  // namespace redline
