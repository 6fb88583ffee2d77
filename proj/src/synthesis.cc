#include "parcoal/synthesis.hh"

#include <algorithm>

#include "json.hpp"

namespace parcoal {

TreeStrategy extract_strategy(const UnfoldingTree& tree, const Lasso& lasso) {
  int m = tree.num_internal();
  for (const TupleLetter& a : lasso.stem)
    if (static_cast<int>(a.size()) != m)
      throw validation_error("lasso coordinate count mismatch");
  for (const TupleLetter& a : lasso.cycle)
    if (static_cast<int>(a.size()) != m)
      throw validation_error("lasso coordinate count mismatch");
  if (lasso.cycle.empty())
    throw validation_error("lasso cycle must be nonempty");

  TreeStrategy ts;
  ts.words.resize(m);
  for (int i = 0; i < m; ++i) {
    UPWord& w = ts.words[i];
    for (const TupleLetter& a : lasso.stem)
      w.prefix.push_back(a[i]);
    for (const TupleLetter& a : lasso.cycle)
      w.period.push_back(a[i]);
  }
  return ts;
}

MemoryStrategy::MemoryStrategy(int num_nodes, int initial,
                               std::vector<int> node_vertex,
                               std::vector<UPWord> node_word,
                               std::vector<std::vector<int>> upd, int dead_letter)
    : num_nodes_(num_nodes),
      initial_(initial),
      node_vertex_(std::move(node_vertex)),
      node_word_(std::move(node_word)),
      upd_(std::move(upd)),
      dead_letter_(dead_letter),
      dead_word_(UPWord::constant(dead_letter)) {
  if (static_cast<int>(node_vertex_.size()) != num_nodes_ ||
      static_cast<int>(node_word_.size()) != num_nodes_ ||
      static_cast<int>(upd_.size()) != num_nodes_)
    throw validation_error("memory strategy tables have inconsistent sizes");
  for (const UPWord& w : node_word_)
    if (w.period.empty())
      throw validation_error("strategy word period must be nonempty");
  if (initial_ < 0 || initial_ > num_nodes_)
    throw validation_error("memory strategy initial state out of range");
}

const UPWord& MemoryStrategy::word(int mem) const {
  if (mem == dead())
    return dead_word_;
  return node_word_.at(mem);
}

int MemoryStrategy::update(int mem, int vertex) const {
  if (mem == dead())
    return dead();
  const auto& row = upd_.at(mem);
  if (vertex < 0 || vertex >= static_cast<int>(row.size()))
    throw validation_error("update: unknown vertex");
  return row[vertex];
}

MemoryStrategy build_memory(const UnfoldingTree& tree, const TreeStrategy& ts) {
  int m = tree.num_internal();
  if (static_cast<int>(ts.words.size()) != m)
    throw validation_error("tree strategy must cover all internal nodes");
  int num_vertices = tree.game().arena.num_vertices();

  std::vector<int> node_vertex(m);
  std::vector<std::vector<int>> upd(m, std::vector<int>(num_vertices, m));
  for (const TreeNode& n : tree.nodes()) {
    if (!n.internal)
      continue;
    node_vertex[n.internal_index] = n.vertex;
    for (int child_id : n.children) {
      const TreeNode& child = tree.node(child_id);
      int target;
      if (child.internal) {
        target = child.internal_index;
      } else if (!tree.game().is_safe(child.vertex)) {
        target = m;  // dead
      } else {
        // leaf with an equilabeled proper ancestor: jump back to it
        int anc = child.parent;
        while (anc >= 0 && tree.node(anc).vertex != child.vertex)
          anc = tree.node(anc).parent;
        if (anc < 0 || !tree.node(anc).internal)
          throw std::logic_error("safe leaf without an internal equilabeled ancestor");
        target = tree.node(anc).internal_index;
      }
      upd[n.internal_index][child.vertex] = target;
    }
  }

  int initial = m > 0 ? tree.node(tree.root()).internal_index : m;
  return MemoryStrategy(m, initial, std::move(node_vertex), ts.words, std::move(upd),
                        0);
}

namespace {

int memory_after(const MemoryStrategy& ms, const SafetyGame& game, const History& h) {
  if (!is_history(game.arena, h))
    throw validation_error("not a history");
  if (h[0] != game.arena.initial())
    throw validation_error("history must start at the initial vertex");
  int mem = ms.initial();
  for (std::size_t i = 1; i < h.size(); ++i)
    mem = ms.update(mem, h[i]);
  return mem;
}

}  // namespace

UPWord strategy_word(const MemoryStrategy& ms, const SafetyGame& game,
                     const History& h) {
  return ms.word(memory_after(ms, game, h));
}

int agent_action(const MemoryStrategy& ms, const SafetyGame& game, const History& h,
                 std::uint64_t agent) {
  if (agent < 1)
    throw validation_error("agent indices start at 1");
  return strategy_word(ms, game, h).letter_at(agent);
}

using nlohmann::json;

std::string serialize_strategy(const MemoryStrategy& ms, const SafetyGame& game) {
  const Alphabet& alphabet = game.arena.alphabet();
  json j;
  j["nodes"] = json::array();
  for (int i = 0; i < ms.num_nodes(); ++i) {
    j["nodes"].push_back({{"id", i},
                          {"vertex", game.arena.vertex_name(ms.node_vertex(i))},
                          {"prefix", alphabet.format(ms.word(i).prefix)},
                          {"period", alphabet.format(ms.word(i).period)}});
  }
  j["root"] = ms.initial() == ms.dead() ? json("dead") : json(ms.initial());
  j["upd"] = json::array();
  for (int i = 0; i < ms.num_nodes(); ++i) {
    for (int v = 0; v < game.arena.num_vertices(); ++v) {
      int t = ms.update(i, v);
      if (t == ms.dead())
        continue;  // absent entries default to dead on load
      j["upd"].push_back({{"from", i},
                          {"vertex", game.arena.vertex_name(v)},
                          {"to", t}});
    }
  }
  j["dead_letter"] = alphabet.name(ms.dead_letter());
  return j.dump(2) + "\n";
}

MemoryStrategy deserialize_strategy(const std::string& json_text,
                                    const SafetyGame& game) {
  const Alphabet& alphabet = game.arena.alphabet();
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw parse_error(std::string("strategy file: ") + e.what());
  }
  try {
    int m = static_cast<int>(j.at("nodes").size());
    std::vector<int> node_vertex(m, -1);
    std::vector<UPWord> node_word(m);
    for (const json& nj : j.at("nodes")) {
      int id = nj.at("id").get<int>();
      if (id < 0 || id >= m)
        throw validation_error("strategy node id out of range");
      if (node_vertex[id] >= 0)
        throw validation_error("duplicate strategy node id");
      node_vertex[id] = game.arena.vertex_index(nj.at("vertex").get<std::string>());
      node_word[id].prefix = alphabet.tokenize(nj.at("prefix").get<std::string>());
      node_word[id].period = alphabet.tokenize(nj.at("period").get<std::string>());
      if (node_word[id].period.empty())
        throw validation_error("strategy word period must be nonempty");
    }
    std::vector<std::vector<int>> upd(
        m, std::vector<int>(game.arena.num_vertices(), m));
    for (const json& uj : j.at("upd")) {
      int from = uj.at("from").get<int>();
      if (from < 0 || from >= m)
        throw validation_error("strategy upd source out of range");
      int v = game.arena.vertex_index(uj.at("vertex").get<std::string>());
      int to;
      if (uj.at("to").is_string()) {
        if (uj.at("to").get<std::string>() != "dead")
          throw validation_error("strategy upd target must be a node id or 'dead'");
        to = m;
      } else {
        to = uj.at("to").get<int>();
        if (to < 0 || to > m)
          throw validation_error("strategy upd target out of range");
      }
      upd[from][v] = to;
    }
    int initial;
    if (j.at("root").is_string()) {
      if (j.at("root").get<std::string>() != "dead")
        throw validation_error("strategy root must be a node id or 'dead'");
      initial = m;
    } else {
      initial = j.at("root").get<int>();
    }
    int dead_letter = alphabet.index_of(j.at("dead_letter").get<std::string>());
    return MemoryStrategy(m, initial, std::move(node_vertex), std::move(node_word),
                          std::move(upd), dead_letter);
  } catch (const json::exception& e) {
    throw parse_error(std::string("strategy file: ") + e.what());
  }
}

}  // namespace parcoal
