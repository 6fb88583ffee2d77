#include "parcoal/lang.hh"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <map>
#include <set>

namespace parcoal {

namespace {

LangExprPtr node(LangExpr e) { return std::make_shared<LangExpr>(std::move(e)); }

}  // namespace

LangExprPtr LangExpr::make_letter(int letter) {
  LangExpr e{Kind::Letter, {}, letter, 0, {}, nullptr};
  return node(std::move(e));
}

LangExprPtr LangExpr::make_any() {
  return node(LangExpr{Kind::AnyLetter, {}, -1, 0, {}, nullptr});
}

LangExprPtr LangExpr::make_concat(std::vector<LangExprPtr> parts) {
  if (parts.size() == 1)
    return parts[0];
  return node(LangExpr{Kind::Concat, std::move(parts), -1, 0, {}, nullptr});
}

LangExprPtr LangExpr::make_union(std::vector<LangExprPtr> parts) {
  if (parts.size() == 1)
    return parts[0];
  return node(LangExpr{Kind::Union, std::move(parts), -1, 0, {}, nullptr});
}

LangExprPtr LangExpr::make_star(LangExprPtr e) {
  return node(LangExpr{Kind::Star, {std::move(e)}, -1, 0, {}, nullptr});
}

LangExprPtr LangExpr::make_plus(LangExprPtr e) {
  return node(LangExpr{Kind::Plus, {std::move(e)}, -1, 0, {}, nullptr});
}

LangExprPtr LangExpr::make_mod(int letter, int modulus, std::vector<int> residues) {
  if (modulus < 1)
    throw validation_error("mod: modulus must be >= 1");
  std::sort(residues.begin(), residues.end());
  residues.erase(std::unique(residues.begin(), residues.end()), residues.end());
  for (int r : residues)
    if (r < 0 || r >= modulus)
      throw validation_error("mod: residue out of range");
  return node(LangExpr{Kind::Mod, {}, letter, modulus, std::move(residues), nullptr});
}

LangExprPtr LangExpr::make_inter(LangExprPtr a, LangExprPtr b) {
  return node(LangExpr{Kind::Inter, {std::move(a), std::move(b)}, -1, 0, {}, nullptr});
}

LangExprPtr LangExpr::make_diff(LangExprPtr a, LangExprPtr b) {
  return node(LangExpr{Kind::Diff, {std::move(a), std::move(b)}, -1, 0, {}, nullptr});
}

LangExprPtr LangExpr::make_compl(LangExprPtr e) {
  return node(LangExpr{Kind::Compl, {std::move(e)}, -1, 0, {}, nullptr});
}

LangExprPtr LangExpr::make_explicit(DfaPtr dfa) {
  return node(LangExpr{Kind::ExplicitDfa, {}, -1, 0, {}, std::move(dfa)});
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

class Parser {
public:
  Parser(const std::string& text, const Alphabet& alphabet)
      : text_(text), alphabet_(alphabet) {}

  LangExprPtr parse() {
    LangExprPtr e = parse_union();
    skip_ws();
    if (pos_ != text_.size())
      fail("unexpected trailing input");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw parse_error("syntax error at position " + std::to_string(pos_) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool peek_is(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool consume(char c) {
    if (peek_is(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!consume(c))
      fail(std::string("expected '") + c + "'");
  }

  LangExprPtr parse_union() {
    std::vector<LangExprPtr> parts{parse_diff()};
    while (consume('|'))
      parts.push_back(parse_diff());
    return LangExpr::make_union(std::move(parts));
  }

  LangExprPtr parse_diff() {
    LangExprPtr e = parse_inter();
    while (consume('\\'))
      e = LangExpr::make_diff(e, parse_inter());
    return e;
  }

  LangExprPtr parse_inter() {
    LangExprPtr e = parse_concat();
    while (consume('&'))
      e = LangExpr::make_inter(e, parse_concat());
    return e;
  }

  bool at_atom_start() {
    skip_ws();
    if (pos_ >= text_.size())
      return false;
    char c = text_[pos_];
    return c != '|' && c != '\\' && c != '&' && c != ')' && c != '*' && c != '+' &&
           c != ',' && c != '{' && c != '}';
  }

  LangExprPtr parse_concat() {
    std::vector<LangExprPtr> parts{parse_unary()};
    while (at_atom_start())
      parts.push_back(parse_unary());
    return LangExpr::make_concat(std::move(parts));
  }

  LangExprPtr parse_unary() {
    if (consume('!'))
      return LangExpr::make_compl(parse_unary());
    return parse_postfix();
  }

  LangExprPtr parse_postfix() {
    LangExprPtr e = parse_atom();
    for (;;) {
      if (consume('*'))
        e = LangExpr::make_star(e);
      else if (consume('+'))
        e = LangExpr::make_plus(e);
      else
        break;
    }
    return e;
  }

  int parse_int() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ == start)
      fail("expected a number");
    return std::stoi(text_.substr(start, pos_ - start));
  }

  LangExprPtr parse_mod() {
    expect('(');
    skip_ws();
    int letter = match_letter();
    expect(',');
    int modulus = parse_int();
    expect(',');
    expect('{');
    std::vector<int> residues;
    if (!peek_is('}')) {
      residues.push_back(parse_int());
      while (consume(','))
        residues.push_back(parse_int());
    }
    expect('}');
    expect(')');
    // optional nonempty marker; the languages exclude the empty word anyway
    consume('+');
    return LangExpr::make_mod(letter, modulus, std::move(residues));
  }

  /// Longest declared letter name starting at the current position.
  int match_letter() {
    skip_ws();
    int best = -1;
    std::size_t best_len = 0;
    for (int l = 0; l < alphabet_.size(); ++l) {
      const std::string& nm = alphabet_.name(l);
      if (nm.size() > best_len && text_.compare(pos_, nm.size(), nm) == 0) {
        best = l;
        best_len = nm.size();
      }
    }
    if (best < 0)
      fail("unknown letter");
    pos_ += best_len;
    return best;
  }

  LangExprPtr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size())
      fail("expected an expression");
    if (consume('(')) {
      LangExprPtr e = parse_union();
      expect(')');
      return e;
    }
    if (consume('.'))
      return LangExpr::make_any();
    if (text_.compare(pos_, 3, "mod") == 0) {
      std::size_t after = pos_ + 3;
      while (after < text_.size() && std::isspace(static_cast<unsigned char>(text_[after])))
        ++after;
      if (after < text_.size() && text_[after] == '(') {
        pos_ += 3;
        skip_ws();
        return parse_mod();
      }
    }
    return LangExpr::make_letter(match_letter());
  }

  const std::string& text_;
  const Alphabet& alphabet_;
  std::size_t pos_ = 0;
};

}  // namespace

LangExprPtr parse_lang_expr(const std::string& text, const Alphabet& alphabet) {
  return Parser(text, alphabet).parse();
}

// ---------------------------------------------------------------------------
// Compilation: Thompson NFA -> subset construction -> minimization
// ---------------------------------------------------------------------------

namespace {

// Exact denotation as a subset of Sigma^*: subexpressions may contain the
// empty word (a*, intermediate differences); the Sigma^+ restriction is
// applied once, by the public compile().
Dfa compile_raw(const LangExprPtr& expr, const Alphabet& alphabet);

struct Nfa {
  // transitions: state -> list of (letter, target); letter -1 is epsilon
  std::vector<std::vector<std::pair<int, int>>> edges;
  int add_state() {
    edges.emplace_back();
    return static_cast<int>(edges.size()) - 1;
  }
  void add_edge(int from, int letter, int to) { edges[from].push_back({letter, to}); }
};

struct Fragment {
  int start;
  int accept;
};

class NfaBuilder {
public:
  NfaBuilder(const Alphabet& alphabet) : alphabet_(alphabet) {}

  Fragment build(const LangExprPtr& e) {
    switch (e->kind) {
      case LangExpr::Kind::Letter: {
        Fragment f{nfa_.add_state(), nfa_.add_state()};
        nfa_.add_edge(f.start, e->letter, f.accept);
        return f;
      }
      case LangExpr::Kind::AnyLetter: {
        Fragment f{nfa_.add_state(), nfa_.add_state()};
        for (int a = 0; a < alphabet_.size(); ++a)
          nfa_.add_edge(f.start, a, f.accept);
        return f;
      }
      case LangExpr::Kind::Concat: {
        Fragment f = build(e->children[0]);
        for (std::size_t i = 1; i < e->children.size(); ++i) {
          Fragment g = build(e->children[i]);
          nfa_.add_edge(f.accept, -1, g.start);
          f.accept = g.accept;
        }
        return f;
      }
      case LangExpr::Kind::Union: {
        Fragment f{nfa_.add_state(), nfa_.add_state()};
        for (const auto& child : e->children) {
          Fragment g = build(child);
          nfa_.add_edge(f.start, -1, g.start);
          nfa_.add_edge(g.accept, -1, f.accept);
        }
        return f;
      }
      case LangExpr::Kind::Star: {
        Fragment g = build(e->children[0]);
        Fragment f{nfa_.add_state(), nfa_.add_state()};
        nfa_.add_edge(f.start, -1, g.start);
        nfa_.add_edge(f.start, -1, f.accept);
        nfa_.add_edge(g.accept, -1, g.start);
        nfa_.add_edge(g.accept, -1, f.accept);
        return f;
      }
      case LangExpr::Kind::Plus: {
        Fragment g = build(e->children[0]);
        Fragment f{nfa_.add_state(), nfa_.add_state()};
        nfa_.add_edge(f.start, -1, g.start);
        nfa_.add_edge(g.accept, -1, g.start);
        nfa_.add_edge(g.accept, -1, f.accept);
        return f;
      }
      case LangExpr::Kind::Mod:
      case LangExpr::Kind::Inter:
      case LangExpr::Kind::Diff:
      case LangExpr::Kind::Compl:
      case LangExpr::Kind::ExplicitDfa: {
        // non-Thompson operators: compile the subtree to a DFA and embed it
        Dfa d = compile_raw(e, alphabet_);
        return embed_dfa(d);
      }
    }
    throw std::logic_error("unreachable");
  }

  Fragment embed_dfa(const Dfa& d) {
    int base = static_cast<int>(nfa_.edges.size());
    for (int q = 0; q < d.num_states(); ++q)
      nfa_.add_state();
    int accept = nfa_.add_state();
    for (int q = 0; q < d.num_states(); ++q) {
      for (int a = 0; a < alphabet_.size(); ++a)
        nfa_.add_edge(base + q, a, base + d.step(q, a));
      if (d.accepting(q))
        nfa_.add_edge(base + q, -1, accept);
    }
    return Fragment{base + d.initial(), accept};
  }

  Dfa determinize(Fragment f) {
    int n = static_cast<int>(nfa_.edges.size());
    auto closure = [&](std::vector<char>& set) {
      std::vector<int> stack;
      for (int q = 0; q < n; ++q)
        if (set[q])
          stack.push_back(q);
      while (!stack.empty()) {
        int q = stack.back();
        stack.pop_back();
        for (auto [letter, to] : nfa_.edges[q])
          if (letter == -1 && !set[to]) {
            set[to] = 1;
            stack.push_back(to);
          }
      }
    };

    std::map<std::vector<char>, int> idx;
    std::vector<std::vector<char>> subsets;
    auto intern = [&](std::vector<char> s) {
      auto it = idx.find(s);
      if (it != idx.end())
        return it->second;
      int id = static_cast<int>(subsets.size());
      idx.emplace(s, id);
      subsets.push_back(std::move(s));
      return id;
    };

    std::vector<char> start(n, 0);
    start[f.start] = 1;
    closure(start);
    intern(std::move(start));

    std::vector<int> trans;
    std::vector<char> acc;
    for (std::size_t i = 0; i < subsets.size(); ++i) {
      std::vector<char> cur = subsets[i];
      acc.push_back(cur[f.accept] ? 1 : 0);
      for (int a = 0; a < alphabet_.size(); ++a) {
        std::vector<char> next(n, 0);
        for (int q = 0; q < n; ++q)
          if (cur[q])
            for (auto [letter, to] : nfa_.edges[q])
              if (letter == a)
                next[to] = 1;
        closure(next);
        trans.push_back(intern(std::move(next)));
      }
    }
    return Dfa(alphabet_, static_cast<int>(subsets.size()), 0, std::move(trans),
               std::move(acc));
  }

private:
  const Alphabet& alphabet_;
  Nfa nfa_;
};

Dfa compile_mod(const LangExpr& e, const Alphabet& alphabet);

Dfa compile_raw(const LangExprPtr& expr, const Alphabet& alphabet) {
  switch (expr->kind) {
    case LangExpr::Kind::Mod:
      return compile_mod(*expr, alphabet);
    case LangExpr::Kind::Inter:
      return Dfa::intersection(compile_raw(expr->children[0], alphabet),
                               compile_raw(expr->children[1], alphabet));
    case LangExpr::Kind::Diff:
      return Dfa::difference(compile_raw(expr->children[0], alphabet),
                             compile_raw(expr->children[1], alphabet));
    case LangExpr::Kind::Compl:
      // complement relative to Sigma^+ by definition
      return Dfa::complement_sigma_plus(compile_raw(expr->children[0], alphabet));
    case LangExpr::Kind::ExplicitDfa: {
      if (expr->dfa->alphabet() != alphabet)
        throw validation_error("explicit DFA alphabet mismatch");
      return *expr->dfa;
    }
    default: {
      NfaBuilder builder(alphabet);
      Fragment f = builder.build(expr);
      return builder.determinize(f);
    }
  }
}

Dfa compile_mod(const LangExpr& e, const Alphabet& alphabet) {
  int p = e.modulus;
  int nl = alphabet.size();
  int num = p + 2;  // fresh initial + p residue states + rejecting sink
  int sink = p + 1;
  auto residue_state = [&](int r) { return 1 + r; };
  std::vector<int> trans(static_cast<std::size_t>(num) * nl, sink);
  trans[static_cast<std::size_t>(0) * nl + e.letter] = residue_state(1 % p);
  for (int r = 0; r < p; ++r)
    trans[static_cast<std::size_t>(residue_state(r)) * nl + e.letter] =
        residue_state((r + 1) % p);
  std::vector<char> acc(num, 0);
  for (int r : e.residues)
    acc[residue_state(r)] = 1;
  return Dfa(alphabet, num, 0, std::move(trans), std::move(acc));
}

}  // namespace

Dfa compile(const LangExprPtr& expr, const Alphabet& alphabet) {
  return Dfa::intersection(compile_raw(expr, alphabet), Dfa::sigma_plus(alphabet));
}

}  // namespace parcoal
