#pragma once

#include <memory>

#include "parcoal/alphabet.hh"
#include "parcoal/upset.hh"

namespace parcoal {

/// Complete deterministic finite automaton over an Alphabet. Every DFA in
/// this toolkit denotes a subset of Sigma^+: the empty word is never
/// accepted, which shows up as a non-accepting initial state in the minimal
/// automaton.
class Dfa {
public:
  Dfa(Alphabet alphabet, int num_states, int initial, std::vector<int> transitions,
      std::vector<char> accepting);

  const Alphabet& alphabet() const { return alphabet_; }
  int num_states() const { return num_states_; }
  int initial() const { return initial_; }
  bool accepting(int state) const { return accepting_[state] != 0; }
  int step(int state, int letter) const {
    return trans_[static_cast<std::size_t>(state) * alphabet_.size() + letter];
  }

  /// Runs the automaton on a word; the empty word is rejected.
  bool member(const Word& word) const;

  bool is_empty_lang() const;

  /// { k >= 1 : some word of length k is accepted }.
  UPSet length_set() const;

  /// { k >= 1 : the length-k prefix of w is accepted }.
  UPSet prefix_membership(const UPWord& w) const;

  /// Minimal automaton for the same language (Hopcroft).
  Dfa minimize() const;

  /// Minimal automaton renumbered by BFS discovery order (letters in
  /// declaration order); two minimal DFAs are isomorphic iff their
  /// canonical forms compare equal.
  Dfa canonical() const;
  bool same_structure(const Dfa& other) const;

  static Dfa sigma_plus(const Alphabet& alphabet);
  static Dfa empty_lang(const Alphabet& alphabet);

  static Dfa union_of(const Dfa& a, const Dfa& b);
  static Dfa intersection(const Dfa& a, const Dfa& b);
  static Dfa difference(const Dfa& a, const Dfa& b);
  /// Complement relative to Sigma^+ (labels never contain the empty word).
  static Dfa complement_sigma_plus(const Dfa& a);

  static bool equal_lang(const Dfa& a, const Dfa& b);

private:
  Dfa trim() const;  // keep reachable states only

  Alphabet alphabet_;
  int num_states_;
  int initial_;
  std::vector<int> trans_;      // num_states_ x |alphabet|
  std::vector<char> accepting_;
};

using DfaPtr = std::shared_ptr<const Dfa>;

}  // namespace parcoal
