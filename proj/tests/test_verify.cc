#include "parcoal/verify.hh"

#include <map>

#include "doctest.h"
#include "oracles.hh"
#include "parcoal/generators.hh"

using namespace parcoal;

namespace {

struct Setup {
  SafetyGame game;
  UnfoldingTree tree;

  explicit Setup(const std::string& id)
      : game(gen_example(id).game), tree(unfold(game)) {}

  MemoryStrategy synthesized() const {
    auto lasso = solve(tree);
    REQUIRE(lasso.has_value());
    return build_memory(tree, extract_strategy(tree, *lasso));
  }

  /// Memoryless fixture: every internal node labeled v plays words[v].
  MemoryStrategy memoryless(const std::map<std::string, UPWord>& words) const {
    TreeStrategy ts;
    ts.words.resize(tree.num_internal());
    for (const TreeNode& n : tree.nodes()) {
      if (!n.internal)
        continue;
      ts.words[n.internal_index] =
          words.at(game.arena.vertex_name(n.vertex));
    }
    return build_memory(tree, ts);
  }
};

/// The textbook hand strategy for fig1: a^w everywhere except
/// b^w at the v3 reached through v2 (the odd-agent branch).
MemoryStrategy fig1_intro_strategy(const Setup& s) {
  int a = s.game.arena.alphabet().index_of("a");
  int b = s.game.arena.alphabet().index_of("b");
  int v2 = s.game.arena.vertex_index("v2");
  int v3 = s.game.arena.vertex_index("v3");
  TreeStrategy ts;
  ts.words.resize(s.tree.num_internal(), UPWord::constant(a));
  for (const TreeNode& n : s.tree.nodes()) {
    if (!n.internal || n.vertex != v3)
      continue;
    bool via_v2 = false;
    for (int anc = n.parent; anc >= 0; anc = s.tree.node(anc).parent)
      if (s.tree.node(anc).vertex == v2)
        via_v2 = true;
    if (via_v2)
      ts.words[n.internal_index] = UPWord::constant(b);
  }
  return build_memory(s.tree, ts);
}

}  // namespace

TEST_CASE("verify_fixed_k: the synthesized strategy survives small k") {
  Setup s("fig2");
  MemoryStrategy ms = s.synthesized();
  CHECK(verify_fixed_k(s.game, ms, 1).verdict == Verdict::safe);
  CHECK(verify_fixed_k(s.game, ms, 2).verdict == Verdict::safe);
  CHECK(verify_fixed_k(s.game, ms, 7).verdict == Verdict::safe);
}

TEST_CASE("verify_fixed_k: memoryless a^w loses for one agent") {
  Setup s("fig2");
  int a = s.game.arena.alphabet().index_of("a");
  MemoryStrategy ms = s.memoryless({{"v0", UPWord::constant(a)},
                                    {"v1", UPWord::constant(a)},
                                    {"v2", UPWord::constant(a)}});
  VerificationReport r = verify_fixed_k(s.game, ms, 1);
  CHECK(r.verdict == Verdict::unsafe);
  CHECK(r.failing_k == 1);
  REQUIRE(!r.counterexample.empty());
  CHECK_FALSE(s.game.is_safe(r.counterexample.back()));
  // the losing step is at v1, where a single a is not in b|aa+
  CHECK(r.counterexample ==
        History{s.game.arena.vertex_index("v0"), s.game.arena.vertex_index("v2"),
                s.game.arena.vertex_index("v1"), s.game.arena.vertex_index("bot")});
}

TEST_CASE("verify_fixed_k: games with only safe vertices verify trivially") {
  GameFile f;
  f.alphabet = {"a", "b"};
  f.vertices = {"u", "w"};
  f.safe = {"u", "w"};
  f.initial = "u";
  f.edges = {{"u", "w", ".+"}, {"w", "u", ".+"}};
  SafetyGame game = normalize(build_game(f));
  UnfoldingTree tree = unfold(game);
  int b = game.arena.alphabet().index_of("b");
  TreeStrategy ts;
  ts.words.resize(tree.num_internal(), UPWord::constant(b));
  MemoryStrategy ms = build_memory(tree, ts);
  for (std::uint64_t k : {1, 2, 3, 9})
    CHECK(verify_fixed_k(game, ms, k).verdict == Verdict::safe);
  CHECK(verify_all_k(game, ms).verdict == Verdict::safe);
}

TEST_CASE("verify_all_k: the intro strategy wins the running example") {
  Setup s("fig1");
  MemoryStrategy intro = fig1_intro_strategy(s);
  VerificationReport r = verify_all_k(s.game, intro);
  CHECK(r.verdict == Verdict::safe);
}

TEST_CASE("verify_all_k: the synthesized strategy wins the nondeterministic one") {
  Setup s("fig2");
  VerificationReport r = verify_all_k(s.game, s.synthesized());
  CHECK(r.verdict == Verdict::safe);
}

TEST_CASE("verify_all_k: memoryless b^w at v1 fails exactly from two agents") {
  Setup s("fig2");
  const Alphabet& al = s.game.arena.alphabet();
  int a = al.index_of("a");
  int b = al.index_of("b");
  MemoryStrategy ms = s.memoryless({{"v0", UPWord{{a, b}, {a}}},
                                    {"v1", UPWord::constant(b)},
                                    {"v2", UPWord::constant(a)}});
  VerificationReport r = verify_all_k(s.game, ms);
  CHECK(r.verdict == Verdict::unsafe);
  CHECK(r.failing_k == 2);
  REQUIRE(!r.counterexample.empty());
  CHECK_FALSE(s.game.is_safe(r.counterexample.back()));
}

TEST_CASE("verify_all_k: lcm cap yields a distinct undecided verdict") {
  Setup s("fig1");
  MemoryStrategy intro = fig1_intro_strategy(s);
  VerificationReport r = verify_all_k(s.game, intro, 1);
  CHECK(r.verdict == Verdict::undecided);
  CHECK(r.note.find("undecided at cap") != std::string::npos);
}

TEST_CASE("consistency: all-k safe implies fixed-k safe, with spot checks") {
  Setup s("fig2");
  MemoryStrategy ms = s.synthesized();
  REQUIRE(verify_all_k(s.game, ms).verdict == Verdict::safe);
  for (std::uint64_t k = 1; k <= 40; ++k)
    CHECK(verify_fixed_k(s.game, ms, k).verdict == Verdict::safe);
  oracle::Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    std::uint64_t k = 41 + rng.below(5000);
    CHECK(verify_fixed_k(s.game, ms, k).verdict == Verdict::safe);
  }
}

TEST_CASE("brute_force_exists on the nondeterministic example") {
  Setup s("fig2");
  CHECK(brute_force_exists(s.game, s.tree, 2, 2));
  // with equilabeled nodes forced equal there is no winning choice
  CHECK_FALSE(brute_force_exists(s.game, s.tree, 2, 2, /*memoryless=*/true));
}

TEST_CASE("brute_force_exists: all-safe games always have a strategy") {
  GameFile f;
  f.alphabet = {"a", "b"};
  f.vertices = {"u", "w"};
  f.safe = {"u", "w"};
  f.initial = "u";
  f.edges = {{"u", "w", ".+"}, {"w", "u", ".+"}};
  SafetyGame game = normalize(build_game(f));
  UnfoldingTree tree = unfold(game);
  CHECK(brute_force_exists(game, tree, 3, 3));
}

TEST_CASE("brute_force_exists: the budget guard raises, never lies") {
  Setup s("fig2");
  CHECK_THROWS_AS(brute_force_exists(s.game, s.tree, 2, 2, false, 3),
                  budget_exceeded);
}

TEST_CASE("simulate: parity routes the running example through v1 or v2") {
  Setup s("fig1");
  MemoryStrategy intro = fig1_intro_strategy(s);
  int v0 = s.game.arena.vertex_index("v0");
  int v1 = s.game.arena.vertex_index("v1");
  int v2 = s.game.arena.vertex_index("v2");
  int v3 = s.game.arena.vertex_index("v3");
  int v5 = s.game.arena.vertex_index("v5");

  History even = simulate(s.game, intro, 2, 10, 1);
  REQUIRE(even.size() == 11);
  CHECK(even[0] == v0);
  CHECK(even[1] == v1);
  CHECK(even[2] == v3);
  for (std::size_t i = 3; i < even.size(); ++i)
    CHECK(even[i] == v5);

  History odd = simulate(s.game, intro, 3, 10, 1);
  CHECK(odd[1] == v2);
  CHECK(odd[2] == v3);
  CHECK(odd[3] == v5);

  for (int v : even)
    CHECK(s.game.is_safe(v));
}

TEST_CASE("simulate: deterministic arenas ignore the seed under first") {
  Setup s("fig1");
  MemoryStrategy intro = fig1_intro_strategy(s);
  History t1 = simulate(s.game, intro, 2, 8, 1, Resolver::first);
  History t2 = simulate(s.game, intro, 2, 8, 999, Resolver::first);
  CHECK(t1 == t2);
  CHECK(t1.size() == 9);
}

TEST_CASE("simulate: traces are k-realizable step by step") {
  Setup s("fig2");
  MemoryStrategy ms = s.synthesized();
  for (std::uint64_t k : {1, 2, 3, 5}) {
    History t = simulate(s.game, ms, k, 12, 7, Resolver::random);
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
      const ArenaEdge* e = s.game.arena.edge(t[i], t[i + 1]);
      REQUIRE(e != nullptr);
      CHECK(e->dfa->length_set().membership(k));
      // and the played prefix itself is a witness
      History h(t.begin(), t.begin() + i + 1);
      Word prefix = strategy_word(ms, s.game, h).prefix_of_length(k);
      CHECK(e->dfa->member(prefix));
    }
  }
}

TEST_CASE("bounded converse: unwinnable small games have no bounded strategy") {
  // the one-variable reduction instances stabilize below K = 4 (prime 2),
  // so the bounded oracle is conclusive there
  Qbf contra;
  contra.num_vars = 1;
  contra.clauses = {{1}, {-1}};
  GeneratedGame g = gen_qbf(contra);
  UnfoldingTree tree = unfold(g.game);
  REQUIRE_FALSE(solve(tree).has_value());
  CHECK_FALSE(brute_force_exists(g.game, tree, 4, 4));

  Qbf tauto;
  tauto.num_vars = 1;
  tauto.clauses = {{1}};
  GeneratedGame g2 = gen_qbf(tauto);
  UnfoldingTree tree2 = unfold(g2.game);
  REQUIRE(solve(tree2).has_value());
  CHECK(brute_force_exists(g2.game, tree2, 4, 4));
}

TEST_CASE("simulate: the minimal resolver picks the least vertex name") {
  // declaration order differs from name order, so first != minimal
  GameFile f;
  f.alphabet = {"a"};
  f.vertices = {"z", "q"};
  f.safe = {"z", "q"};
  f.initial = "z";
  f.edges = {{"z", "z", ".+"}, {"z", "q", ".+"}, {"q", "q", ".+"}};
  SafetyGame game = normalize(build_game(f));
  UnfoldingTree tree = unfold(game);
  TreeStrategy ts;
  ts.words.resize(tree.num_internal(), UPWord::constant(0));
  MemoryStrategy ms = build_memory(tree, ts);

  History by_first = simulate(game, ms, 1, 3, 0, Resolver::first);
  CHECK(by_first == History{0, 0, 0, 0});  // declaration order: z first
  History by_minimal = simulate(game, ms, 1, 3, 0, Resolver::minimal);
  CHECK(by_minimal[1] == game.arena.vertex_index("q"));
}

TEST_CASE("reports render to text and json with the counterexample") {
  Setup s("fig2");
  int a = s.game.arena.alphabet().index_of("a");
  MemoryStrategy ms = s.memoryless({{"v0", UPWord::constant(a)},
                                    {"v1", UPWord::constant(a)},
                                    {"v2", UPWord::constant(a)}});
  VerificationReport r = verify_fixed_k(s.game, ms, 1);
  std::string text = report_to_text(r, s.game);
  CHECK(text.find("unsafe") != std::string::npos);
  CHECK(text.find("failing k: 1") != std::string::npos);
  std::string json = report_to_json(r, s.game);
  CHECK(json.find("\"verdict\": \"unsafe\"") != std::string::npos);
  std::string dot = counterexample_dot(s.game, r);
  CHECK(dot.find("color=red") != std::string::npos);
}
