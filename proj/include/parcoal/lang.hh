#pragma once

#include <memory>
#include <string>
#include <vector>

#include "parcoal/dfa.hh"

namespace parcoal {

struct LangExpr;
using LangExprPtr = std::shared_ptr<const LangExpr>;

/// Edge-label language expression. Every expression denotes a subset of
/// Sigma^+: complement is taken relative to Sigma^+ and the empty word is
/// dropped on compilation.
struct LangExpr {
  enum class Kind {
    Letter,      // a single letter
    AnyLetter,   // '.' = any single letter
    Concat,      // children in order
    Union,       // n-ary
    Star,        // Kleene star (empty word removed at the Sigma^+ boundary)
    Plus,
    Mod,         // letter^j with j mod modulus in residues, j >= 1
    Inter,
    Diff,
    Compl,       // Sigma^+ \ L
    ExplicitDfa,
  };

  Kind kind;
  std::vector<LangExprPtr> children;
  int letter = -1;            // Letter, Mod
  int modulus = 0;            // Mod
  std::vector<int> residues;  // Mod
  DfaPtr dfa;                 // ExplicitDfa

  static LangExprPtr make_letter(int letter);
  static LangExprPtr make_any();
  static LangExprPtr make_concat(std::vector<LangExprPtr> parts);
  static LangExprPtr make_union(std::vector<LangExprPtr> parts);
  static LangExprPtr make_star(LangExprPtr e);
  static LangExprPtr make_plus(LangExprPtr e);
  static LangExprPtr make_mod(int letter, int modulus, std::vector<int> residues);
  static LangExprPtr make_inter(LangExprPtr a, LangExprPtr b);
  static LangExprPtr make_diff(LangExprPtr a, LangExprPtr b);
  static LangExprPtr make_compl(LangExprPtr e);
  static LangExprPtr make_explicit(DfaPtr dfa);
};

/// Grammar: juxtaposition is concatenation, '|' union, '&' intersection,
/// '\' difference, '!' complement in Sigma^+, postfix '*' and '+', '.' any
/// single letter, parentheses, and mod(letter, p, {r1,...}) with an optional
/// trailing '+' marker (languages are nonempty-word sets either way).
/// Precedence: postfix > '!' > concatenation > '&' > '\' > '|'.
/// Letter runs such as "aba1" are segmented greedily against the declared
/// alphabet, longest letter name first.
LangExprPtr parse_lang_expr(const std::string& text, const Alphabet& alphabet);

/// Minimal complete DFA for the expression's language intersected with
/// Sigma^+. Regex operators go through Thompson NFA construction and subset
/// determinization; boolean operators are DFA products; Mod compiles
/// directly to a cycle automaton of size p + 2 before minimization.
Dfa compile(const LangExprPtr& expr, const Alphabet& alphabet);

}  // namespace parcoal
