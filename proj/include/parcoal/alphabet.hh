#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace parcoal {

/// A word is a sequence of letter indices into an Alphabet.
using Word = std::vector<int>;

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Ordered set of action letters. The declaration order is significant:
/// every enumeration (letter loops, tuple letters, tie-breaking) follows it.
class Alphabet {
public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> letters);

  int size() const { return static_cast<int>(letters_.size()); }
  const std::string& name(int letter) const { return letters_.at(letter); }
  const std::vector<std::string>& names() const { return letters_; }

  bool contains(const std::string& name) const { return index_.count(name) != 0; }
  int index_of(const std::string& name) const;

  /// Splits a textual word into letters: tokens may be separated by spaces
  /// or commas; unseparated runs are segmented greedily, longest declared
  /// letter name first.
  Word tokenize(const std::string& text) const;

  /// Renders a word as text. Uses plain concatenation when it tokenizes
  /// back to the same letters, space separation otherwise.
  std::string format(const Word& word) const;

  bool operator==(const Alphabet& other) const { return letters_ == other.letters_; }
  bool operator!=(const Alphabet& other) const { return !(*this == other); }

private:
  std::vector<std::string> letters_;
  std::unordered_map<std::string, int> index_;
};

/// Ultimately periodic omega-word u * v^omega. Positions are 1-based, as in
/// "the n-th letter is the action of Agent n".
struct UPWord {
  Word prefix;
  Word period;  // nonempty

  int letter_at(std::uint64_t n) const {
    if (n == 0)
      throw std::out_of_range("UPWord positions start at 1");
    if (n <= prefix.size())
      return prefix[n - 1];
    return period[(n - prefix.size() - 1) % period.size()];
  }

  /// Word made of the first k letters.
  Word prefix_of_length(std::uint64_t k) const {
    Word w;
    w.reserve(k);
    for (std::uint64_t i = 1; i <= k; ++i)
      w.push_back(letter_at(i));
    return w;
  }

  static UPWord constant(int letter) { return UPWord{{}, {letter}}; }

  bool operator==(const UPWord& other) const = default;
};

}  // namespace parcoal
