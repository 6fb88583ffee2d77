#pragma once

#include "parcoal/product.hh"

namespace parcoal {

/// Coalition strategy on the tree: one ultimately periodic word per
/// internal node (coordinate projections of an accepting lasso).
struct TreeStrategy {
  std::vector<UPWord> words;  // indexed by internal index
};

/// Projects an accepting lasso onto the internal nodes.
TreeStrategy extract_strategy(const UnfoldingTree& tree, const Lasso& lasso);

/// Finite-memory coalition strategy. Memory states are the internal nodes
/// of the unfolding (by internal index) plus a dead state reached on losing
/// continuations; the dead state plays the constant word on the first
/// alphabet letter.
class MemoryStrategy {
public:
  MemoryStrategy(int num_nodes, int initial, std::vector<int> node_vertex,
                 std::vector<UPWord> node_word, std::vector<std::vector<int>> upd,
                 int dead_letter);

  int num_nodes() const { return num_nodes_; }  // memory states besides dead
  int dead() const { return num_nodes_; }
  int initial() const { return initial_; }
  int dead_letter() const { return dead_letter_; }

  int node_vertex(int mem) const { return node_vertex_.at(mem); }

  /// next(mem, v): the word depends on the memory state only.
  const UPWord& word(int mem) const;

  /// upd(mem, v); total — unreachable combinations map to dead.
  int update(int mem, int vertex) const;

  bool operator==(const MemoryStrategy& other) const = default;

private:
  int num_nodes_;
  int initial_;  // may equal dead() for degenerate trees
  std::vector<int> node_vertex_;
  std::vector<UPWord> node_word_;
  std::vector<std::vector<int>> upd_;  // [mem][vertex] -> mem or dead
  int dead_letter_;
  UPWord dead_word_;
};

/// Packages a tree strategy as a finite-memory strategy on the game.
MemoryStrategy build_memory(const UnfoldingTree& tree, const TreeStrategy& ts);

/// Folds the update function over a history and applies next.
UPWord strategy_word(const MemoryStrategy& ms, const SafetyGame& game,
                     const History& h);

/// The n-th letter of the word the coalition plays after h (Agent n's move).
int agent_action(const MemoryStrategy& ms, const SafetyGame& game, const History& h,
                 std::uint64_t agent);

/// Row view of the coalition strategy table for one agent.
struct AgentView {
  const MemoryStrategy* ms;
  const SafetyGame* game;
  std::uint64_t agent;  // >= 1

  int action(const History& h) const { return agent_action(*ms, *game, h, agent); }
};

std::string serialize_strategy(const MemoryStrategy& ms, const SafetyGame& game);
MemoryStrategy deserialize_strategy(const std::string& json_text,
                                    const SafetyGame& game);

}  // namespace parcoal
