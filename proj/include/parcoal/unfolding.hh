#pragma once

#include <string>
#include <vector>

#include "parcoal/arena.hh"

namespace parcoal {

struct TreeNode {
  int id;
  int parent;            // -1 for the root
  int edge_from_parent;  // tree-edge id, -1 for the root
  int vertex;            // arena vertex label
  int depth;
  std::vector<int> children;  // in target-vertex declaration order
  bool internal;
  int internal_index;  // BFS order among internal nodes, -1 for leaves
};

struct TreeEdge {
  int id;
  int from_node;
  int to_node;
  int arena_from;
  int arena_to;
  DfaPtr dfa;  // shared with the arena edge
  std::string expr_text;
};

/// Finite tree unfolding of a safety game: branches stop at the first
/// repeated vertex label or at an unsafe vertex. Internal nodes double as
/// the memory states of synthesized strategies.
class UnfoldingTree {
public:
  UnfoldingTree(SafetyGame game, std::vector<TreeNode> nodes,
                std::vector<TreeEdge> edges, std::vector<int> leaves,
                int num_internal);

  const SafetyGame& game() const { return game_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& node(int id) const { return nodes_.at(id); }
  const std::vector<TreeEdge>& edges() const { return edges_; }
  const TreeEdge& edge(int id) const { return edges_.at(id); }
  int root() const { return 0; }

  int num_internal() const { return num_internal_; }  // m
  int num_edges() const { return static_cast<int>(edges_.size()); }  // r
  const std::vector<int>& leaves() const { return leaves_; }

  /// Internal node id for a given internal index.
  int internal_node(int internal_index) const { return internal_ids_.at(internal_index); }

  bool leaf_label_safe(int node_id) const { return game_.is_safe(nodes_[node_id].vertex); }

  /// Vertex-label sequence of the root path ending at the node (beta).
  History label_path(int node_id) const;

private:
  SafetyGame game_;
  std::vector<TreeNode> nodes_;
  std::vector<TreeEdge> edges_;
  std::vector<int> leaves_;
  std::vector<int> internal_ids_;
  int num_internal_;
};

/// Builds the tree unfolding; the game must be normalized. Nodes, edges and
/// internal indices are assigned in breadth-first construction order, with
/// children ordered by target-vertex declaration order.
UnfoldingTree unfold(const SafetyGame& game);

/// Incremental zip: maintains the loop-erased virtual history of a growing
/// history, frozen once an unsafe vertex is reached.
class ZipTracker {
public:
  ZipTracker(const SafetyGame& game, int start_vertex);
  void extend(int vertex);
  const History& current() const { return zipped_; }

private:
  const SafetyGame* game_;
  History zipped_;
  std::vector<int> position_of_;  // vertex -> index in zipped_, or -1
};

/// Loop-erased summary of a history (must start at the initial vertex).
History zip(const SafetyGame& game, const History& h);

/// The unique tree node whose root-path labels equal z; inverse of beta.
/// Errors when z is not in the image of zip.
int alpha(const UnfoldingTree& tree, const History& z);

/// All root-to-leaf node sequences, ordered by leaf index.
std::vector<std::vector<int>> maximal_paths(const UnfoldingTree& tree);

std::string tree_to_dot(const UnfoldingTree& tree);

}  // namespace parcoal
