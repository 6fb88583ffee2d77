#include "parcoal/synthesis.hh"

#include "doctest.h"
#include "oracles.hh"
#include "parcoal/generators.hh"
#include "parcoal/unfolding.hh"

using namespace parcoal;

namespace {

struct Solved {
  SafetyGame game;
  UnfoldingTree tree;
  TreeStrategy ts;
  MemoryStrategy ms;

  static Solved make(const std::string& id) {
    SafetyGame game = gen_example(id).game;
    UnfoldingTree tree = unfold(game);
    auto lasso = solve(tree);
    REQUIRE(lasso.has_value());
    TreeStrategy ts = extract_strategy(tree, *lasso);
    MemoryStrategy ms = build_memory(tree, ts);
    return Solved{std::move(game), std::move(tree), std::move(ts), std::move(ms)};
  }
};

}  // namespace

TEST_CASE("extract_strategy: coordinate projections of the example lasso") {
  Solved s = Solved::make("fig2");
  const Alphabet& al = s.game.arena.alphabet();
  int a = al.index_of("a");
  int b = al.index_of("b");

  // sigma(n0) = ab a^w = aba^w, sigma(n1) = a^w, sigma(n1') starts with b
  CHECK(s.ts.words[0].prefix == Word{a, b});
  CHECK(s.ts.words[0].period == Word{a});
  for (std::uint64_t k = 1; k <= 8; ++k)
    CHECK(s.ts.words[1].letter_at(k) == a);
  CHECK(s.ts.words[3].letter_at(1) == b);

  // prefix and period lengths equal the lasso's stem and cycle lengths
  for (const UPWord& w : s.ts.words) {
    CHECK(w.prefix.size() == 2);
    CHECK(w.period.size() == 1);
  }
}

TEST_CASE("extract_strategy: degenerate shapes") {
  Solved s = Solved::make("fig2");
  SUBCASE("empty stem gives constant-per-cycle words") {
    Lasso lasso;
    lasso.cycle.push_back(TupleLetter{0, 1, 0, 1});
    TreeStrategy ts = extract_strategy(s.tree, lasso);
    CHECK(ts.words[1].prefix.empty());
    CHECK(ts.words[1].period == Word{1});
  }
  SUBCASE("coordinate mismatch is rejected") {
    Lasso lasso;
    lasso.cycle.push_back(TupleLetter{0});
    CHECK_THROWS_AS(extract_strategy(s.tree, lasso), validation_error);
  }
  SUBCASE("empty cycle is rejected") {
    Lasso lasso;
    lasso.stem.push_back(TupleLetter{0, 0, 0, 0});
    CHECK_THROWS_AS(extract_strategy(s.tree, lasso), validation_error);
  }
}

TEST_CASE("build_memory: update table follows the tree") {
  Solved s = Solved::make("fig2");
  int v0 = s.game.arena.vertex_index("v0");
  int v1 = s.game.arena.vertex_index("v1");
  int v2 = s.game.arena.vertex_index("v2");
  int bot = s.game.arena.vertex_index("bot");

  // internal indices: 0 = root (v0), 1 = v1, 2 = v2, 3 = deep v1
  CHECK(s.ms.initial() == 0);
  // child v0 of the root is a leaf with the root as equilabeled ancestor
  CHECK(s.ms.update(0, v0) == 0);
  CHECK(s.ms.update(0, v1) == 1);
  CHECK(s.ms.update(0, v2) == 2);
  // the v2 node's only child is the deep internal v1
  CHECK(s.ms.update(2, v1) == 3);
  // unsafe successors fall into the dead state, which is absorbing
  CHECK(s.ms.update(0, bot) == s.ms.dead());
  CHECK(s.ms.update(s.ms.dead(), v0) == s.ms.dead());
  // deep v1's v0-child jumps back to the root
  CHECK(s.ms.update(3, v0) == 0);
}

TEST_CASE("strategy_word on histories of the nondeterministic example") {
  Solved s = Solved::make("fig2");
  const Alphabet& al = s.game.arena.alphabet();
  int a = al.index_of("a");
  int b = al.index_of("b");
  int v0 = s.game.arena.vertex_index("v0");
  int v1 = s.game.arena.vertex_index("v1");
  int v2 = s.game.arena.vertex_index("v2");
  int bot = s.game.arena.vertex_index("bot");

  UPWord at_start = strategy_word(s.ms, s.game, {v0});
  CHECK(at_start.letter_at(1) == a);
  CHECK(at_start.letter_at(2) == b);
  for (std::uint64_t k = 3; k <= 10; ++k)
    CHECK(at_start.letter_at(k) == a);

  // sigma(v0 v2 v1) plays a word starting with b (only the first letter of
  // b^w is forced by the certificate)
  CHECK(strategy_word(s.ms, s.game, {v0, v2, v1}).letter_at(1) == b);

  // histories ending unsafe play the constant dead-letter word
  UPWord dead = strategy_word(s.ms, s.game, {v0, bot});
  CHECK(dead.prefix.empty());
  CHECK(dead.period == Word{s.ms.dead_letter()});

  CHECK_THROWS_AS(strategy_word(s.ms, s.game, {v2}), validation_error);
  CHECK_THROWS_AS(strategy_word(s.ms, s.game, History{}), validation_error);
  (void)v1;
}

TEST_CASE("agent_action reads the coalition word positionally") {
  Solved s = Solved::make("fig2");
  const Alphabet& al = s.game.arena.alphabet();
  int v0 = s.game.arena.vertex_index("v0");
  CHECK(agent_action(s.ms, s.game, {v0}, 2) == al.index_of("b"));
  CHECK(agent_action(s.ms, s.game, {v0}, 5) == al.index_of("a"));
  CHECK(agent_action(s.ms, s.game, {v0}, 1) ==
        strategy_word(s.ms, s.game, {v0}).letter_at(1));
  CHECK_THROWS_AS(agent_action(s.ms, s.game, {v0}, 0), validation_error);

  AgentView second{&s.ms, &s.game, 2};
  CHECK(second.action({v0}) == al.index_of("b"));
}

TEST_CASE("serialization round-trips") {
  Solved s = Solved::make("fig2");
  std::string text = serialize_strategy(s.ms, s.game);
  MemoryStrategy back = deserialize_strategy(text, s.game);
  CHECK(back == s.ms);

  oracle::Rng rng(404);
  for (int i = 0; i < 100; ++i) {
    History h = oracle::random_history(rng, s.game, 8);
    CHECK(strategy_word(back, s.game, h) == strategy_word(s.ms, s.game, h));
  }
}

TEST_CASE("deserialize validates references") {
  Solved s = Solved::make("fig2");
  std::string text = serialize_strategy(s.ms, s.game);

  SUBCASE("undeclared vertex") {
    std::string bad = text;
    auto pos = bad.find("\"v2\"");
    REQUIRE(pos != std::string::npos);
    bad.replace(pos, 4, "\"vX\"");
    CHECK_THROWS_AS(deserialize_strategy(bad, s.game), validation_error);
  }
  SUBCASE("unknown letter in a word") {
    std::string bad = text;
    auto pos = bad.find("\"prefix\": \"ab\"");
    REQUIRE(pos != std::string::npos);
    bad.replace(pos, 14, "\"prefix\": \"az\"");
    CHECK_THROWS_AS(deserialize_strategy(bad, s.game), validation_error);
  }
  SUBCASE("malformed json") {
    CHECK_THROWS_AS(deserialize_strategy("{not json", s.game), parse_error);
  }
  SUBCASE("strategy over the wrong alphabet") {
    SafetyGame other = gen_example("fig1").game;  // same letters, ok
    GameFile f;
    f.alphabet = {"x", "y"};
    f.vertices = {"v0"};
    f.safe = {"v0"};
    f.initial = "v0";
    f.edges = {{"v0", "v0", ".+"}};
    SafetyGame wrong = normalize(build_game(f));
    CHECK_THROWS_AS(deserialize_strategy(text, wrong), std::runtime_error);
    (void)other;
  }
}

TEST_CASE("property: the memory tracks alpha of zip") {
  for (const char* id : {"fig1", "fig2"}) {
    Solved s = Solved::make(id);
    oracle::Rng rng(id[3] + 11);
    for (int i = 0; i < 500; ++i) {
      History h = oracle::random_history(rng, s.game, 12);
      History z = zip(s.game, h);
      int node = alpha(s.tree, z);
      int mem = s.ms.initial();
      for (std::size_t j = 1; j < h.size(); ++j)
        mem = s.ms.update(mem, h[j]);
      if (s.tree.node(node).internal) {
        CHECK(mem == s.tree.node(node).internal_index);
      } else {
        CHECK(mem == s.ms.dead());
      }
    }
  }
}

TEST_CASE("memory size stays within the tree bound") {
  for (const char* id : {"fig1", "fig2"}) {
    Solved s = Solved::make(id);
    double bound = 1;
    int V = s.game.arena.num_vertices();
    for (int i = 0; i < V + 1; ++i)
      bound *= V;
    CHECK(static_cast<double>(s.ms.num_nodes() + 1) <= bound + 1);
    CHECK(s.ms.num_nodes() == s.tree.num_internal());
  }
}
