#include "redline/stopwords.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "redline/errors.hpp"

namespace redline {

namespace {

// Mirror of data/stopwords.txt. Keep the two in sync.
constexpr const char* kDefaultStopwords = R"sw(
a about above after again against all am an and
any are aren't as at be because been before being
below between both but by can't cannot could couldn't did
didn't do does doesn't doing don't down during each few
for from further had hadn't has hasn't have haven't having
he he'd he'll he's her here here's hers herself him
himself his how how's i i'd i'll i'm i've if
in into is isn't it it's its itself let's me
more most mustn't my myself no nor not of off
on once only or other ought our ours ourselves out
over own same shan't she she'd she'll she's should shouldn't
so some such than that that's the their theirs them
themselves then there there's these they they'd they'll they're they've
this those through to too under until up very was
wasn't we we'd we'll we're we've were weren't what what's
when when's where where's which while who who's whom why
why's with won't would wouldn't you you'd you'll you're you've
your yours yourself yourselves
)sw";

std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) out.push_back(static_cast<char>(std::tolower(c)));
  return out;
}

}  // namespace

const StopwordList& StopwordList::default_english() {
  static const StopwordList list = StopwordList::from_text(kDefaultStopwords);
  return list;
}

StopwordList StopwordList::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("stopword file not readable: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  StopwordList list = from_text(buf.str());
  if (list.size() == 0) throw ValidationError("stopword file is empty: " + path);
  return list;
}

StopwordList StopwordList::from_text(std::string_view text) {
  StopwordList list;
  std::string word;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!word.empty()) list.words_.insert(to_lower(word));
      word.clear();
    } else {
      word.push_back(c);
    }
  }
  if (!word.empty()) list.words_.insert(to_lower(word));
  return list;
}

bool StopwordList::contains(std::string_view word) const {
  return words_.count(to_lower(word)) > 0;
}

}  // namespace redline
