#include "parcoal/unfolding.hh"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace parcoal {

UnfoldingTree::UnfoldingTree(SafetyGame game, std::vector<TreeNode> nodes,
                             std::vector<TreeEdge> edges, std::vector<int> leaves,
                             int num_internal)
    : game_(std::move(game)),
      nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      leaves_(std::move(leaves)),
      num_internal_(num_internal) {
  internal_ids_.assign(num_internal_, -1);
  for (const TreeNode& n : nodes_)
    if (n.internal)
      internal_ids_.at(n.internal_index) = n.id;
}

History UnfoldingTree::label_path(int node_id) const {
  History labels;
  for (int cur = node_id; cur >= 0; cur = nodes_[cur].parent)
    labels.push_back(nodes_[cur].vertex);
  std::reverse(labels.begin(), labels.end());
  return labels;
}

UnfoldingTree unfold(const SafetyGame& game) {
  if (!game.normalized)
    throw validation_error("unfold requires a normalized game");
  const Arena& arena = game.arena;

  std::vector<TreeNode> nodes;
  std::vector<TreeEdge> edges;
  std::vector<int> leaves;
  int num_internal = 0;

  auto label_on_path = [&](int node_id, int vertex) {
    for (int cur = node_id; cur >= 0; cur = nodes[cur].parent)
      if (nodes[cur].vertex == vertex)
        return true;
    return false;
  };

  auto make_node = [&](int parent, int vertex) {
    int id = static_cast<int>(nodes.size());
    bool repeats = parent >= 0 && label_on_path(parent, vertex);
    bool internal = game.is_safe(vertex) && !repeats;
    TreeNode n;
    n.id = id;
    n.parent = parent;
    n.edge_from_parent = -1;
    n.vertex = vertex;
    n.depth = parent < 0 ? 0 : nodes[parent].depth + 1;
    n.internal = internal;
    n.internal_index = internal ? num_internal++ : -1;
    nodes.push_back(std::move(n));
    if (!internal)
      leaves.push_back(id);
    return id;
  };

  make_node(-1, arena.initial());
  for (std::size_t next = 0; next < nodes.size(); ++next) {
    int id = static_cast<int>(next);
    if (!nodes[id].internal)
      continue;
    int v = nodes[id].vertex;
    for (const ArenaEdge& e : arena.out(v)) {
      int child = make_node(id, e.to);
      int edge_id = static_cast<int>(edges.size());
      edges.push_back(TreeEdge{edge_id, id, child, e.from, e.to, e.dfa, e.expr_text});
      nodes[child].edge_from_parent = edge_id;
      nodes[id].children.push_back(child);
      assert(nodes[child].depth <= arena.num_vertices() + 1);
    }
  }

  return UnfoldingTree(game, std::move(nodes), std::move(edges), std::move(leaves),
                       num_internal);
}

ZipTracker::ZipTracker(const SafetyGame& game, int start_vertex)
    : game_(&game), position_of_(game.arena.num_vertices(), -1) {
  zipped_.push_back(start_vertex);
  position_of_[start_vertex] = 0;
}

void ZipTracker::extend(int vertex) {
  if (!game_->is_safe(zipped_.back()))
    return;  // frozen once an unsafe vertex is reached
  int pos = position_of_[vertex];
  if (pos < 0) {
    position_of_[vertex] = static_cast<int>(zipped_.size());
    zipped_.push_back(vertex);
    return;
  }
  while (static_cast<int>(zipped_.size()) > pos + 1) {
    position_of_[zipped_.back()] = -1;
    zipped_.pop_back();
  }
}

History zip(const SafetyGame& game, const History& h) {
  if (!is_history(game.arena, h))
    throw validation_error("zip: not a history");
  if (h[0] != game.arena.initial())
    throw validation_error("zip: history must start at the initial vertex");
  ZipTracker tracker(game, h[0]);
  for (std::size_t i = 1; i < h.size(); ++i)
    tracker.extend(h[i]);
  return tracker.current();
}

int alpha(const UnfoldingTree& tree, const History& z) {
  if (z.empty() || z[0] != tree.node(tree.root()).vertex)
    throw validation_error("alpha: sequence is not in the zip image");
  int cur = tree.root();
  for (std::size_t i = 1; i < z.size(); ++i) {
    int next = -1;
    for (int child : tree.node(cur).children)
      if (tree.node(child).vertex == z[i]) {
        next = child;
        break;
      }
    if (next < 0)
      throw validation_error("alpha: sequence is not in the zip image");
    cur = next;
  }
  const TreeNode& n = tree.node(cur);
  if (!n.internal && tree.game().is_safe(n.vertex))
    throw validation_error("alpha: sequence is not in the zip image");
  return cur;
}

std::vector<std::vector<int>> maximal_paths(const UnfoldingTree& tree) {
  std::vector<std::vector<int>> paths;
  for (int leaf : tree.leaves()) {
    std::vector<int> path;
    for (int cur = leaf; cur >= 0; cur = tree.node(cur).parent)
      path.push_back(cur);
    std::reverse(path.begin(), path.end());
    paths.push_back(std::move(path));
  }
  return paths;
}

std::string tree_to_dot(const UnfoldingTree& tree) {
  std::ostringstream os;
  os << "digraph unfolding {\n  node [shape=box];\n";
  for (const TreeNode& n : tree.nodes()) {
    os << "  n" << n.id << " [label=\"";
    if (n.internal)
      os << "n" << n.internal_index << " : ";
    os << tree.game().arena.vertex_name(n.vertex) << "\"";
    if (!n.internal && !tree.game().is_safe(n.vertex))
      os << ", style=dashed";
    os << "];\n";
  }
  for (const TreeEdge& e : tree.edges()) {
    std::string label = e.expr_text;
    // basic DOT escaping
    std::string escaped;
    for (char c : label) {
      if (c == '"' || c == '\\')
        escaped += '\\';
      escaped += c;
    }
    os << "  n" << e.from_node << " -> n" << e.to_node << " [label=\"" << escaped
       << "\"";
    if (!tree.game().is_safe(e.arena_to))
      os << ", style=dashed";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace parcoal
