#pragma once

#include "parcoal/arena.hh"

namespace parcoal {

/// Quantified Boolean formula in prenex form with a strictly alternating
/// prefix starting existentially; clauses hold at most three literals.
struct Qbf {
  std::size_t num_vars = 0;                // quantifier i: 'e' when i is odd
  std::vector<std::vector<int>> clauses;   // signed 1-based variable indices

  char quantifier(std::size_t i) const {  // 1-based
    return i % 2 == 1 ? 'e' : 'a';
  }
};

void validate_qbf(const Qbf& phi);

/// Truth of the formula by recursive quantifier expansion (<= 12 variables).
bool qbf_eval(const Qbf& phi);

/// i-th prime (1-based, i <= 16).
int prime(int i);

struct GeneratedGame {
  SafetyGame game;  // normalized
  GameFile file;    // raw input form, round-trippable through the loader
};

/// Built-in example arenas: "fig1" (the running example) and "fig2" (the
/// nondeterministic example).
GeneratedGame gen_example(const std::string& id);

/// Family whose tree unfolding grows exponentially: 2n blocks gated by
/// multiples of the first n primes; winning requires remembering which
/// v_i / nv_i branch the play took. n <= 6.
GeneratedGame gen_worstcase(int n);

/// Safety game that the coalition wins iff the formula is true; existential
/// positions choose via a/b words with an escape to top, universal positions
/// are forced through c words, and clause vertices check the chosen literal
/// against the number of agents.
GeneratedGame gen_qbf(const Qbf& phi);

/// QDIMACS-like input: quantifier lines "e 1 0" / "a 2 0", clause lines of
/// signed integers terminated by 0. Variables must be quantified in
/// increasing order starting at 1.
Qbf parse_qdimacs(const std::string& text);

/// {"prefix": ["e","a",...], "clauses": [[1,-2],...]}
Qbf qbf_from_json(const std::string& json_text);

}  // namespace parcoal
