// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances and time budgets are pinned in the checks themselves.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <vector>

#include "oracles.hh"
#include "parcoal/generators.hh"
#include "parcoal/product.hh"
#include "parcoal/synthesis.hh"
#include "parcoal/unfolding.hh"
#include "parcoal/verify.hh"

using namespace parcoal;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

struct Criterion {
  int number;
  const char* title;
  double budget_seconds;

  void run(const std::function<bool(std::string&)>& body) const {
    auto t0 = Clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (budget_seconds > 0 && secs > budget_seconds) {
      ok = false;
      detail += detail.empty() ? "" : "; ";
      detail += "time budget exceeded";
    }
    if (!ok)
      ++failures;
    std::printf("[%s] criterion %d: %s (%.2f s / budget %.0f s)%s%s\n",
                ok ? "PASS" : "FAIL", number, title, secs, budget_seconds,
                detail.empty() ? "" : " — ", detail.c_str());
  }
};

MemoryStrategy synthesize(const UnfoldingTree& tree) {
  auto lasso = solve(tree);
  if (!lasso)
    throw std::runtime_error("expected a winnable game");
  return build_memory(tree, extract_strategy(tree, *lasso));
}

/// The intro's hand strategy for fig1: a^w everywhere, except b^w at the v3
/// reached through v2.
MemoryStrategy fig1_intro_strategy(const SafetyGame& game, const UnfoldingTree& tree) {
  int a = game.arena.alphabet().index_of("a");
  int b = game.arena.alphabet().index_of("b");
  int v2 = game.arena.vertex_index("v2");
  int v3 = game.arena.vertex_index("v3");
  TreeStrategy ts;
  ts.words.resize(tree.num_internal(), UPWord::constant(a));
  for (const TreeNode& n : tree.nodes()) {
    if (!n.internal || n.vertex != v3)
      continue;
    for (int anc = n.parent; anc >= 0; anc = tree.node(anc).parent)
      if (tree.node(anc).vertex == v2)
        ts.words[n.internal_index] = UPWord::constant(b);
  }
  return build_memory(tree, ts);
}

History random_safe_history(oracle::Rng& rng, const SafetyGame& game, int max_steps) {
  History h{game.arena.initial()};
  int steps = rng.below(max_steps + 1);
  for (int i = 0; i < steps; ++i) {
    std::vector<int> safe_succ;
    for (const ArenaEdge& e : game.arena.out(h.back()))
      if (game.is_safe(e.to))
        safe_succ.push_back(e.to);
    if (safe_succ.empty())
      break;
    h.push_back(safe_succ[rng.below(static_cast<int>(safe_succ.size()))]);
  }
  return h;
}

bool check_memory_bridge(const SafetyGame& game, std::uint64_t seed,
                         std::string& detail) {
  UnfoldingTree tree = unfold(game);
  MemoryStrategy ms = synthesize(tree);
  oracle::Rng rng(seed);
  for (int i = 0; i < 500; ++i) {
    History h = random_safe_history(rng, game, 12);
    int node = alpha(tree, zip(game, h));
    if (!tree.node(node).internal) {
      detail = "zip left the internal region on a safe history";
      return false;
    }
    int mem = ms.initial();
    for (std::size_t j = 1; j < h.size(); ++j)
      mem = ms.update(mem, h[j]);
    if (mem != tree.node(node).internal_index) {
      detail = "memory state diverged from alpha(zip(h))";
      return false;
    }
  }
  return true;
}

std::vector<Qbf> qbf_corpus() {
  // every pair (with repetition) of clauses drawn from a fixed literal
  // enumeration per variable count, including the worked three-variable
  // example; 109 formulas in total
  std::vector<Qbf> corpus;
  for (int v = 1; v <= 3; ++v) {
    std::vector<std::vector<int>> lits;
    for (int x = 1; x <= v; ++x) {
      lits.push_back({x});
      lits.push_back({-x});
    }
    if (v >= 2) {
      lits.push_back({1, 2});
      lits.push_back({-1, 2});
      lits.push_back({1, -2});
    }
    if (v == 3) {
      lits.push_back({1, -2, -3});
      lits.push_back({1, -2, 3});
      lits.push_back({-1, 2, 3});
    }
    for (std::size_t i = 0; i < lits.size(); ++i)
      for (std::size_t j = i; j < lits.size(); ++j) {
        Qbf phi;
        phi.num_vars = v;
        phi.clauses = {lits[i], lits[j]};
        corpus.push_back(phi);
      }
  }
  return corpus;
}

}  // namespace

int main() {
  Criterion{1, "running-example regression (fig1)", 5.0}.run([](std::string& detail) {
    GeneratedGame g = gen_example("fig1");
    UnfoldingTree tree = unfold(g.game);
    auto lasso = solve(tree);
    if (!lasso) {
      detail = "not winnable";
      return false;
    }
    MemoryStrategy ms = build_memory(tree, extract_strategy(tree, *lasso));
    if (verify_all_k(g.game, ms).verdict != Verdict::safe) {
      detail = "synthesized strategy failed verification";
      return false;
    }
    MemoryStrategy intro = fig1_intro_strategy(g.game, tree);
    if (verify_all_k(g.game, intro).verdict != Verdict::safe) {
      detail = "hand strategy failed verification";
      return false;
    }
    return true;
  });

  Criterion{2, "nondeterministic-example regression (fig2)", 10.0}.run(
      [](std::string& detail) {
        GeneratedGame g = gen_example("fig2");
        UnfoldingTree tree = unfold(g.game);
        auto lasso = solve(tree);
        if (!lasso) {
          detail = "not winnable";
          return false;
        }
        MemoryStrategy ms = build_memory(tree, extract_strategy(tree, *lasso));
        const Alphabet& al = g.game.arena.alphabet();
        const UPWord& root_word = ms.word(ms.initial());
        bool letters_match = root_word.letter_at(1) == al.index_of("a") &&
                             root_word.letter_at(2) == al.index_of("b") &&
                             root_word.letter_at(3) == al.index_of("a");
        if (verify_all_k(g.game, ms).verdict != Verdict::safe) {
          detail = "synthesized strategy failed verification";
          return false;
        }
        if (brute_force_exists(g.game, tree, 2, 2, true)) {
          detail = "a memoryless assignment unexpectedly wins";
          return false;
        }
        if (!letters_match)
          detail = "certificate tie-broke differently; fallback clauses hold";
        return true;
      });

  Criterion{3, "tree-unfolding shapes", 5.0}.run([](std::string& detail) {
    UnfoldingTree fig2 = unfold(gen_example("fig2").game);
    if (fig2.num_internal() != 4 || fig2.nodes().size() != 10) {
      detail = "fig2 tree has " + std::to_string(fig2.num_internal()) +
               " internal / " + std::to_string(fig2.nodes().size()) + " total";
      return false;
    }
    UnfoldingTree fig1 = unfold(gen_example("fig1").game);
    if (fig1.leaves().size() != 6) {
      detail = "fig1 tree has " + std::to_string(fig1.leaves().size()) + " leaves";
      return false;
    }
    int v3 = fig1.game().arena.vertex_index("v3");
    int v3_subtrees = 0;
    for (const TreeNode& n : fig1.nodes())
      if (n.internal && n.vertex == v3)
        ++v3_subtrees;
    if (v3_subtrees != 2) {
      detail = "expected two v3 subtrees";
      return false;
    }
    return true;
  });

  Criterion{4, "worst-case family (n = 1, 2, 3)", 60.0}.run([](std::string& detail) {
    int prev_internal = 0;
    for (int n = 1; n <= 3; ++n) {
      GeneratedGame g = gen_worstcase(n);
      UnfoldingTree tree = unfold(g.game);
      auto lasso = solve(tree);
      if (!lasso) {
        detail = "worstcase(" + std::to_string(n) + ") not winnable";
        return false;
      }
      MemoryStrategy ms = build_memory(tree, extract_strategy(tree, *lasso));
      if (verify_all_k(g.game, ms).verdict != Verdict::safe) {
        detail = "worstcase(" + std::to_string(n) + ") strategy failed verification";
        return false;
      }
      if (n > 1 && tree.num_internal() < 2 * prev_internal) {
        detail = "internal node count did not double at n=" + std::to_string(n);
        return false;
      }
      prev_internal = tree.num_internal();
      if (n == 2 && brute_force_exists(g.game, tree, 6, 6, true)) {
        detail = "a memoryless assignment wins worstcase(2)";
        return false;
      }
    }
    return true;
  });

  Criterion{5, "QBF reduction soundness (>= 40 formulas)", 120.0}.run(
      [](std::string& detail) {
        std::vector<Qbf> corpus = qbf_corpus();
        if (corpus.size() < 40) {
          detail = "corpus too small";
          return false;
        }
        bool has_worked_example = false;
        for (const Qbf& phi : corpus)
          has_worked_example =
              has_worked_example ||
              (phi.num_vars == 3 &&
               phi.clauses ==
                   std::vector<std::vector<int>>{{1, -2, -3}, {1, -2, 3}});
        if (!has_worked_example) {
          detail = "worked example missing from the corpus";
          return false;
        }
        int checked = 0;
        for (const Qbf& phi : corpus) {
          bool truth = qbf_eval(phi);
          GeneratedGame g = gen_qbf(phi);
          bool winnable = solve(unfold(g.game)).has_value();
          if (winnable != truth) {
            detail = "disagreement on formula " + std::to_string(checked);
            return false;
          }
          ++checked;
        }
        detail = std::to_string(checked) + " formulas, 100% agreement";
        return true;
      });

  Criterion{6, "language-layer properties", 60.0}.run([](std::string& detail) {
    Alphabet al({"a", "b"});
    oracle::Rng rng(606060);
    for (int i = 0; i < 1000; ++i) {
      LangExprPtr e = oracle::random_expr(rng, al, 4);
      Dfa d = compile(e, al);
      Word word = oracle::random_word(rng, al, 8);
      bool expect = oracle::naive_eval(e, word, al) && !word.empty();
      if (d.member(word) != expect) {
        detail = "membership disagreement at sample " + std::to_string(i);
        return false;
      }
      if (i % 10 == 0) {
        UPWord w{oracle::random_word(rng, al, 4), oracle::random_word(rng, al, 3)};
        if (w.period.empty())
          w.period.push_back(0);
        UPSet s = d.prefix_membership(w);
        std::uint64_t bound =
            w.prefix.size() +
            2 * static_cast<std::uint64_t>(d.num_states()) * w.period.size() + 4;
        for (std::uint64_t k = 1; k <= bound; ++k)
          if (s.membership(k) != d.member(w.prefix_of_length(k))) {
            detail = "prefix membership disagreement at sample " + std::to_string(i);
            return false;
          }
        UPSet ls = d.length_set();
        std::vector<bool> bfs = oracle::bfs_accept_lengths(d, 12);
        for (std::uint64_t k = 1; k <= 12; ++k)
          if (ls.membership(k) != bfs[k]) {
            detail = "length set disagreement at sample " + std::to_string(i);
            return false;
          }
      }
    }
    return true;
  });

  Criterion{7, "product-layer properties (200 random automata)", 60.0}.run(
      [](std::string& detail) {
        oracle::Rng rng(707070);
        for (int i = 0; i < 200; ++i) {
          ExplicitSafetyAutomaton aut = oracle::random_safety_automaton(rng, 8, 3);
          auto lasso = solve_explicit(aut);
          if (lasso.has_value() != oracle::pigeonhole_nonempty(aut)) {
            detail = "emptiness disagreement at sample " + std::to_string(i);
            return false;
          }
          if (!lasso)
            continue;
          int q = aut.initial;
          for (int a : lasso->stem) {
            q = aut.trans[static_cast<std::size_t>(q) * aut.num_letters + a];
            if (!aut.safe[q]) {
              detail = "stem leaves the safe set at sample " + std::to_string(i);
              return false;
            }
          }
          int cycle_start = q;
          for (int rep = 0; rep < 2; ++rep)
            for (int a : lasso->cycle) {
              q = aut.trans[static_cast<std::size_t>(q) * aut.num_letters + a];
              if (!aut.safe[q]) {
                detail = "cycle leaves the safe set at sample " + std::to_string(i);
                return false;
              }
            }
          if (q != cycle_start) {
            detail = "cycle does not close at sample " + std::to_string(i);
            return false;
          }
        }
        return true;
      });

  Criterion{8, "memory tracks alpha-of-zip on 500 histories per game", 60.0}.run(
      [](std::string& detail) {
        if (!check_memory_bridge(gen_example("fig1").game, 81, detail))
          return false;
        if (!check_memory_bridge(gen_example("fig2").game, 82, detail))
          return false;
        if (!check_memory_bridge(gen_worstcase(2).game, 83, detail))
          return false;
        Qbf t1;  // exists x1 . x1
        t1.num_vars = 1;
        t1.clauses = {{1}};
        Qbf t2;  // the worked three-variable example
        t2.num_vars = 3;
        t2.clauses = {{1, -2, -3}, {1, -2, 3}};
        Qbf t3;  // exists x1 forall x2 . (x1 | x2) & (x1 | !x2)
        t3.num_vars = 2;
        t3.clauses = {{1, 2}, {1, -2}};
        for (const Qbf* phi : {&t1, &t2, &t3}) {
          if (!qbf_eval(*phi)) {
            detail = "bridge corpus formula is unexpectedly false";
            return false;
          }
          if (!check_memory_bridge(gen_qbf(*phi).game, 84, detail))
            return false;
        }
        return true;
      });

  if (failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
