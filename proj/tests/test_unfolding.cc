#include "parcoal/unfolding.hh"

#include <set>

#include "doctest.h"
#include "oracles.hh"
#include "parcoal/generators.hh"

using namespace parcoal;

namespace {

std::vector<std::string> internal_labels(const UnfoldingTree& tree) {
  std::vector<std::string> labels;
  for (int i = 0; i < tree.num_internal(); ++i)
    labels.push_back(
        tree.game().arena.vertex_name(tree.node(tree.internal_node(i)).vertex));
  return labels;
}

}  // namespace

TEST_CASE("unfold: the nondeterministic example unrolls to ten nodes") {
  UnfoldingTree tree = unfold(gen_example("fig2").game);
  CHECK(tree.nodes().size() == 10);
  CHECK(tree.num_internal() == 4);
  CHECK(internal_labels(tree) ==
        std::vector<std::string>{"v0", "v1", "v2", "v1"});
  CHECK(tree.leaves().size() == 6);

  // root children: v0 leaf (repeats the root), v1, v2, bot leaf
  const TreeNode& root = tree.node(tree.root());
  REQUIRE(root.children.size() == 4);
  CHECK_FALSE(tree.node(root.children[0]).internal);
  CHECK(tree.node(root.children[1]).internal);
  CHECK(tree.node(root.children[2]).internal);
  CHECK_FALSE(tree.node(root.children[3]).internal);

  // under v2 there is a second internal v1 with its own subtree
  int n2 = tree.internal_node(2);
  REQUIRE(tree.node(n2).children.size() == 1);
  CHECK(tree.node(tree.node(n2).children[0]).internal);
}

TEST_CASE("unfold: the running example has two v3 subtrees and 6 leaves") {
  UnfoldingTree tree = unfold(gen_example("fig1").game);
  CHECK(tree.leaves().size() == 6);
  int v3 = tree.game().arena.vertex_index("v3");
  int v3_nodes = 0;
  for (const TreeNode& n : tree.nodes())
    if (n.vertex == v3 && n.internal)
      ++v3_nodes;
  CHECK(v3_nodes == 2);
  // each v3 subtree branches to a v4 leaf, a v5 subtree, and the remainder
  for (const TreeNode& n : tree.nodes()) {
    if (n.vertex != v3)
      continue;
    std::set<std::string> child_labels;
    for (int c : n.children)
      child_labels.insert(tree.game().arena.vertex_name(tree.node(c).vertex));
    CHECK(child_labels == std::set<std::string>{"v4", "v5", "bot"});
  }
}

TEST_CASE("unfold: an unsafe initial vertex gives a single-node tree") {
  GameFile f;
  f.alphabet = {"a"};
  f.vertices = {"v0"};
  f.safe = {};
  f.initial = "v0";
  f.edges = {};
  UnfoldingTree tree = unfold(normalize(build_game(f)));
  CHECK(tree.nodes().size() == 1);
  CHECK(tree.num_internal() == 0);
  CHECK(maximal_paths(tree).size() == 1);
  CHECK(maximal_paths(tree)[0].size() == 1);
}

TEST_CASE("unfold: height and size bounds hold") {
  for (const char* id : {"fig1", "fig2"}) {
    SafetyGame game = gen_example(id).game;
    UnfoldingTree tree = unfold(game);
    int height = 0;
    int branching = 1;
    for (const TreeNode& n : tree.nodes()) {
      height = std::max(height, n.depth);
      branching = std::max(branching, static_cast<int>(n.children.size()));
    }
    CHECK(height <= game.arena.num_vertices() + 1);
    double bound = 1;
    for (int i = 0; i < height; ++i)
      bound *= branching;
    double total = 0;
    double level = 1;
    for (int i = 0; i <= height; ++i) {
      total += level;
      level *= branching;
    }
    CHECK(static_cast<double>(tree.nodes().size()) <= total);
  }
}

TEST_CASE("unfold: children match the arena edges of the label") {
  SafetyGame game = gen_example("fig2").game;
  UnfoldingTree tree = unfold(game);
  for (const TreeNode& n : tree.nodes()) {
    if (!n.internal)
      continue;
    std::vector<int> child_targets;
    for (int c : n.children)
      child_targets.push_back(tree.node(c).vertex);
    std::vector<int> arena_targets;
    for (const ArenaEdge& e : game.arena.out(n.vertex))
      arena_targets.push_back(e.to);
    CHECK(child_targets == arena_targets);
  }
}

TEST_CASE("zip follows the inductive definition") {
  SafetyGame g = gen_example("fig2").game;
  int v0 = g.arena.vertex_index("v0");
  int v1 = g.arena.vertex_index("v1");
  int v2 = g.arena.vertex_index("v2");

  CHECK(zip(g, {v0, v1, v0, v1}) == History{v0, v1});
  CHECK(zip(g, {v0}) == History{v0});
  CHECK(zip(g, {v0, v2, v1, v0, v2}) == History{v0, v2});
  CHECK(zip(g, {v0, v0, v0, v1}) == History{v0, v1});
  CHECK_THROWS_AS(zip(g, {v0, v2, v0}), validation_error);  // not a history
}

TEST_CASE("zip freezes once the history goes unsafe") {
  SafetyGame g = gen_example("fig2").game;
  int v0 = g.arena.vertex_index("v0");
  int bot = g.arena.vertex_index("bot");
  CHECK(zip(g, {v0, bot, bot, bot}) == History{v0, bot});
}

TEST_CASE("alpha walks label paths and rejects non-virtual histories") {
  SafetyGame g = gen_example("fig2").game;
  UnfoldingTree tree = unfold(g);
  int v0 = g.arena.vertex_index("v0");
  int v1 = g.arena.vertex_index("v1");
  int v2 = g.arena.vertex_index("v2");

  CHECK(alpha(tree, {v0}) == tree.root());
  int deep_v1 = alpha(tree, {v0, v2, v1});
  CHECK(tree.node(deep_v1).internal);
  CHECK(tree.node(deep_v1).vertex == v1);
  CHECK(tree.node(deep_v1).depth == 2);

  CHECK_THROWS_AS(alpha(tree, {v0, v1, v0}), validation_error);  // repeats v0
  CHECK_THROWS_AS(alpha(tree, {v1}), validation_error);
  CHECK_THROWS_AS(alpha(tree, History{}), validation_error);
}

TEST_CASE("maximal_paths: counts per example") {
  CHECK(maximal_paths(unfold(gen_example("fig2").game)).size() == 6);
  CHECK(maximal_paths(unfold(gen_example("fig1").game)).size() == 6);
}

TEST_CASE("property: beta and alpha are inverse on every test tree") {
  for (const char* id : {"fig1", "fig2"}) {
    SafetyGame game = gen_example(id).game;
    UnfoldingTree tree = unfold(game);
    for (const TreeNode& n : tree.nodes()) {
      bool in_domain = n.internal || !game.is_safe(n.vertex);
      if (!in_domain)
        continue;
      History labels = tree.label_path(n.id);
      CHECK(alpha(tree, labels) == n.id);
    }
  }
}

TEST_CASE("property: zip composed with alpha tracks random histories") {
  for (const char* id : {"fig1", "fig2"}) {
    SafetyGame game = gen_example(id).game;
    UnfoldingTree tree = unfold(game);
    oracle::Rng rng(id[3]);
    for (int i = 0; i < 200; ++i) {
      History h = oracle::random_history(rng, game, 10);
      History z = zip(game, h);
      CHECK(zip(game, z) == z);  // idempotence
      int node = alpha(tree, z);
      CHECK(tree.label_path(node) == z);
    }
  }
}

TEST_CASE("dot export mentions every node") {
  UnfoldingTree tree = unfold(gen_example("fig2").game);
  std::string dot = tree_to_dot(tree);
  CHECK(dot.find("n0 : v0") != std::string::npos);
  CHECK(dot.find("style=dashed") != std::string::npos);
  CHECK(dot.find("a*ba*") != std::string::npos);
}
