#include "parcoal/alphabet.hh"

#include <algorithm>

namespace parcoal {

Alphabet::Alphabet(std::vector<std::string> letters) : letters_(std::move(letters)) {
  if (letters_.empty())
    throw validation_error("alphabet must not be empty");
  for (int i = 0; i < static_cast<int>(letters_.size()); ++i) {
    if (letters_[i].empty())
      throw validation_error("alphabet letter must not be the empty string");
    if (!index_.emplace(letters_[i], i).second)
      throw validation_error("duplicate alphabet letter: " + letters_[i]);
  }
}

int Alphabet::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end())
    throw validation_error("unknown letter: " + name);
  return it->second;
}

Word Alphabet::tokenize(const std::string& text) const {
  Word out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == ',') {
      ++i;
      continue;
    }
    // Greedy longest declared-letter match at position i.
    int best = -1;
    std::size_t best_len = 0;
    for (int l = 0; l < size(); ++l) {
      const std::string& nm = letters_[l];
      if (nm.size() > best_len && text.compare(i, nm.size(), nm) == 0) {
        best = l;
        best_len = nm.size();
      }
    }
    if (best < 0)
      throw validation_error("unknown letter in word '" + text + "' at position " +
                             std::to_string(i));
    out.push_back(best);
    i += best_len;
  }
  return out;
}

std::string Alphabet::format(const Word& word) const {
  std::string plain;
  for (int l : word)
    plain += name(l);
  bool ambiguous = false;
  try {
    ambiguous = tokenize(plain) != word;
  } catch (const validation_error&) {
    ambiguous = true;
  }
  if (!ambiguous)
    return plain;
  std::string spaced;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i)
      spaced += ' ';
    spaced += name(word[i]);
  }
  return spaced;
}

}  // namespace parcoal
