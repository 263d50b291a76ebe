#pragma once

#include <string>
#include <string_view>
#include <unordered_set>

namespace redline {

// Case-insensitive stopword membership. The default list is embedded in the
// binary; an identical copy ships as data/stopwords.txt (one word per line).
class StopwordList {
 public:
  static const StopwordList& default_english();
  static StopwordList from_file(const std::string& path);
  static StopwordList from_text(std::string_view text);

  bool contains(std::string_view word) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

}  // namespace redline
