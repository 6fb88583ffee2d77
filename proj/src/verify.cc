#include "parcoal/verify.hh"

#include <algorithm>
#include <map>
#include <queue>
#include <random>
#include <sstream>

#include "json.hpp"

namespace parcoal {

namespace {

struct StateKey {
  int mem;
  int vertex;
  bool operator<(const StateKey& o) const {
    return mem != o.mem ? mem < o.mem : vertex < o.vertex;
  }
};

// Reachability over (memory, vertex) pairs where the successor relation is
// given by a callback; reconstructs the play prefix on an unsafe hit.
template <class SuccFn>
VerificationReport explore_pairs(const SafetyGame& game, const MemoryStrategy& ms,
                                 SuccFn&& succ_fn) {
  VerificationReport report;
  int v0 = game.arena.initial();
  StateKey start{ms.initial(), v0};
  std::map<StateKey, StateKey> parent;
  parent.emplace(start, start);
  report.states_explored = 1;
  auto rebuild = [&](StateKey at) {
    History h;
    while (true) {
      h.push_back(at.vertex);
      StateKey p = parent.at(at);
      if (p.mem == at.mem && p.vertex == at.vertex)
        break;
      at = p;
    }
    std::reverse(h.begin(), h.end());
    return h;
  };
  if (!game.is_safe(v0)) {
    report.verdict = Verdict::unsafe;
    report.counterexample = {v0};
    return report;
  }
  std::queue<StateKey> todo;
  todo.push(start);
  while (!todo.empty()) {
    StateKey cur = todo.front();
    todo.pop();
    for (int v2 : succ_fn(cur.mem, cur.vertex)) {
      StateKey next{ms.update(cur.mem, v2), v2};
      if (parent.count(next))
        continue;
      parent.emplace(next, cur);
      ++report.states_explored;
      if (!game.is_safe(v2)) {
        report.verdict = Verdict::unsafe;
        report.counterexample = rebuild(next);
        return report;
      }
      todo.push(next);
    }
  }
  report.verdict = Verdict::safe;
  return report;
}

}  // namespace

VerificationReport verify_fixed_k(const SafetyGame& game, const MemoryStrategy& ms,
                                  std::uint64_t k) {
  if (k < 1)
    throw validation_error("k must be positive");
  if (!game.normalized)
    throw validation_error("verification requires a normalized game");

  std::map<int, Word> prefix_cache;  // memory -> played length-k prefix
  auto succ_fn = [&](int mem, int v) {
    auto it = prefix_cache.find(mem);
    if (it == prefix_cache.end())
      it = prefix_cache.emplace(mem, ms.word(mem).prefix_of_length(k)).first;
    std::vector<int> out;
    for (const ArenaEdge& e : game.arena.out(v))
      if (e.dfa->member(it->second))
        out.push_back(e.to);
    return out;
  };
  VerificationReport report = explore_pairs(game, ms, succ_fn);
  if (report.verdict == Verdict::unsafe)
    report.failing_k = k;
  return report;
}

VerificationReport verify_all_k(const SafetyGame& game, const MemoryStrategy& ms,
                                std::uint64_t lcm_cap) {
  if (!game.normalized)
    throw validation_error("verification requires a normalized game");

  // U(m, v, v') = positions k at which the played word's k-prefix lies in
  // the edge language; cached per (memory, arena edge)
  std::map<std::pair<int, const ArenaEdge*>, UPSet> membership;
  std::uint64_t threshold = 1;
  std::uint64_t period = 1;
  try {
    for (int mem = 0; mem <= ms.dead(); ++mem) {
      for (int v = 0; v < game.arena.num_vertices(); ++v) {
        for (const ArenaEdge& e : game.arena.out(v)) {
          auto key = std::make_pair(mem, &e);
          if (membership.count(key))
            continue;
          UPSet u = e.dfa->prefix_membership(ms.word(mem));
          threshold = std::max(threshold, u.threshold());
          period = lcm_capped(period, u.period(), lcm_cap);
          membership.emplace(key, std::move(u));
        }
      }
    }
  } catch (const budget_exceeded&) {
    VerificationReport report;
    report.verdict = Verdict::undecided;
    report.note = "undecided at cap: joint period exceeds the lcm cap";
    return report;
  }

  // representatives cover k = 1 .. threshold+period-1; beyond that every k
  // agrees with its class representative
  std::uint64_t total_states = 0;
  for (std::uint64_t k = 1; k < threshold + period; ++k) {
    auto succ_fn = [&](int mem, int v) {
      std::vector<int> out;
      for (const ArenaEdge& e : game.arena.out(v))
        if (membership.at(std::make_pair(mem, &e)).membership(k))
          out.push_back(e.to);
      return out;
    };
    VerificationReport report = explore_pairs(game, ms, succ_fn);
    total_states += report.states_explored;
    if (report.verdict == Verdict::unsafe) {
      report.failing_k = k;
      report.states_explored = total_states;
      return report;
    }
  }
  VerificationReport report;
  report.verdict = Verdict::safe;
  report.states_explored = total_states;
  std::ostringstream os;
  os << "all k checked via representatives 1.." << (threshold + period - 1);
  report.note = os.str();
  return report;
}

// ---------------------------------------------------------------------------
// bounded brute-force existence oracle
// ---------------------------------------------------------------------------

namespace {

struct BruteContext {
  const UnfoldingTree* tree;
  std::uint64_t K;
  std::uint64_t L;
  std::uint64_t budget;
  std::uint64_t used = 0;
  int nl;
  std::vector<int> var_of_node;  // internal node id -> variable index
  int num_vars = 0;
  // per variable: the out-edge automata of all its nodes (its word feeds
  // every equilabeled node when the memoryless restriction is on)
  std::vector<std::vector<const Dfa*>> var_dfas;
  std::vector<Word> assignment;  // per variable; empty = unassigned

  void charge(std::uint64_t amount) {
    used += amount;
    if (used > budget)
      throw budget_exceeded("brute-force budget exceeded");
  }
};

// Walks the tree for a fixed k; returns false when some adversarial walk
// through fully assigned nodes reaches an unsafe leaf.
bool walk_ok(BruteContext& ctx, int node_id, std::uint64_t k) {
  ctx.charge(1);
  const UnfoldingTree& tree = *ctx.tree;
  const TreeNode& n = tree.node(node_id);
  const Word& w = ctx.assignment[ctx.var_of_node[node_id]];
  if (w.empty())
    return true;  // undetermined branch
  Word prefix(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
  for (int child_id : n.children) {
    const TreeNode& child = tree.node(child_id);
    const TreeEdge& e = tree.edge(child.edge_from_parent);
    if (!e.dfa->member(prefix))
      continue;
    if (!child.internal) {
      if (!tree.game().is_safe(child.vertex))
        return false;
      continue;
    }
    if (!walk_ok(ctx, child_id, k))
      return false;
  }
  return true;
}

bool check_partial(BruteContext& ctx) {
  for (std::uint64_t k = 1; k <= ctx.K; ++k)
    if (!walk_ok(ctx, ctx.tree->root(), k))
      return false;
  return true;
}

bool assign_next(BruteContext& ctx, int var);

// Enumerates candidate words for a variable position by position, branching
// only on distinct joint states of the variable's automata: words with the
// same run have the same accepting-children sets everywhere, so one
// representative (least letters first) is enough.
bool enumerate_words(BruteContext& ctx, int var, Word& word,
                     std::vector<int>& joint) {
  if (word.size() == ctx.L) {
    ctx.charge(1);
    ctx.assignment[var] = word;
    if (check_partial(ctx) && assign_next(ctx, var + 1))
      return true;
    ctx.assignment[var].clear();
    return false;
  }
  const auto& dfas = ctx.var_dfas[var];
  std::map<std::vector<int>, int> next_states;  // joint successor -> letter
  for (int a = 0; a < ctx.nl; ++a) {
    std::vector<int> nq(joint.size());
    for (std::size_t c = 0; c < joint.size(); ++c)
      nq[c] = dfas[c]->step(joint[c], a);
    next_states.try_emplace(std::move(nq), a);
  }
  // revisit in letter order
  std::vector<std::pair<int, std::vector<int>>> ordered;
  for (auto& [nq, a] : next_states)
    ordered.push_back({a, nq});
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  for (auto& [a, nq] : ordered) {
    word.push_back(a);
    std::vector<int> saved = joint;
    joint = nq;
    if (enumerate_words(ctx, var, word, joint))
      return true;
    joint = saved;
    word.pop_back();
  }
  return false;
}

bool assign_next(BruteContext& ctx, int var) {
  if (var == ctx.num_vars)
    return true;
  Word word;
  std::vector<int> joint;
  for (const Dfa* d : ctx.var_dfas[var])
    joint.push_back(d->initial());
  return enumerate_words(ctx, var, word, joint);
}

}  // namespace

bool brute_force_exists(const SafetyGame& game, const UnfoldingTree& tree,
                        std::uint64_t K, std::uint64_t L, bool memoryless,
                        std::uint64_t budget) {
  (void)game;
  if (K < 1 || L < K)
    throw validation_error("brute force requires 1 <= K <= L");

  BruteContext ctx;
  ctx.tree = &tree;
  ctx.K = K;
  ctx.L = L;
  ctx.budget = budget;
  ctx.nl = tree.game().arena.alphabet().size();
  ctx.var_of_node.assign(tree.nodes().size(), -1);

  // variables in depth-first preorder, so a failing subtree is refuted
  // before unrelated branches multiply the search
  std::map<int, int> label_var;  // vertex -> variable (memoryless)
  std::vector<int> stack{tree.root()};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    const TreeNode& n = tree.node(id);
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it)
      stack.push_back(*it);
    if (!n.internal)
      continue;
    int var;
    if (memoryless) {
      auto found = label_var.find(n.vertex);
      if (found == label_var.end()) {
        var = ctx.num_vars++;
        label_var.emplace(n.vertex, var);
        ctx.var_dfas.emplace_back();
      } else {
        var = found->second;
      }
    } else {
      var = ctx.num_vars++;
      ctx.var_dfas.emplace_back();
    }
    ctx.var_of_node[n.id] = var;
    for (int child : n.children)
      ctx.var_dfas[var].push_back(
          tree.edge(tree.node(child).edge_from_parent).dfa.get());
  }

  if (ctx.num_vars == 0)  // degenerate tree: the root is a leaf
    return tree.game().is_safe(tree.node(tree.root()).vertex);

  ctx.assignment.assign(ctx.num_vars, Word{});
  return assign_next(ctx, 0);
}

History simulate(const SafetyGame& game, const MemoryStrategy& ms, std::uint64_t k,
                 std::uint64_t steps, std::uint64_t seed, Resolver resolver) {
  if (k < 1 || steps < 1)
    throw validation_error("simulate requires k >= 1 and steps >= 1");
  if (!game.normalized)
    throw validation_error("simulate requires a normalized game");
  std::mt19937_64 rng(seed);
  History trace{game.arena.initial()};
  int mem = ms.initial();
  int v = game.arena.initial();
  std::map<int, Word> prefix_cache;
  for (std::uint64_t s = 0; s < steps; ++s) {
    auto it = prefix_cache.find(mem);
    if (it == prefix_cache.end())
      it = prefix_cache.emplace(mem, ms.word(mem).prefix_of_length(k)).first;
    std::vector<int> succs;
    for (const ArenaEdge& e : game.arena.out(v))
      if (e.dfa->member(it->second))
        succs.push_back(e.to);
    if (succs.empty())
      throw std::logic_error("normalized game has a blocked vertex");
    int choice;
    switch (resolver) {
      case Resolver::first:
        choice = succs.front();
        break;
      case Resolver::minimal:
        choice = *std::min_element(succs.begin(), succs.end(),
                                   [&](int a, int b) {
                                     return game.arena.vertex_name(a) <
                                            game.arena.vertex_name(b);
                                   });
        break;
      case Resolver::random:
      default:
        choice = succs[std::uniform_int_distribution<std::size_t>(
            0, succs.size() - 1)(rng)];
        break;
    }
    trace.push_back(choice);
    mem = ms.update(mem, choice);
    v = choice;
  }
  return trace;
}

using nlohmann::json;

namespace {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::safe:
      return "safe";
    case Verdict::unsafe:
      return "unsafe";
    case Verdict::undecided:
      return "undecided";
  }
  return "unknown";
}

}  // namespace

std::string report_to_json(const VerificationReport& report, const SafetyGame& game) {
  json j;
  j["verdict"] = verdict_name(report.verdict);
  if (report.failing_k)
    j["failing_k"] = *report.failing_k;
  if (!report.counterexample.empty()) {
    json play = json::array();
    for (int v : report.counterexample)
      play.push_back(game.arena.vertex_name(v));
    j["counterexample"] = play;
  }
  j["states_explored"] = report.states_explored;
  if (!report.note.empty())
    j["note"] = report.note;
  return j.dump(2) + "\n";
}

std::string report_to_text(const VerificationReport& report, const SafetyGame& game) {
  std::ostringstream os;
  os << "verdict: " << verdict_name(report.verdict) << "\n";
  if (report.failing_k)
    os << "failing k: " << *report.failing_k << "\n";
  if (!report.counterexample.empty()) {
    os << "counterexample play:";
    for (int v : report.counterexample)
      os << " " << game.arena.vertex_name(v);
    os << "\n";
  }
  os << "states explored: " << report.states_explored << "\n";
  if (!report.note.empty())
    os << "note: " << report.note << "\n";
  return os.str();
}

std::string counterexample_dot(const SafetyGame& game,
                               const VerificationReport& report) {
  std::ostringstream os;
  os << "digraph arena {\n";
  for (int v = 0; v < game.arena.num_vertices(); ++v) {
    os << "  v" << v << " [label=\"" << game.arena.vertex_name(v) << "\"";
    if (game.is_safe(v))
      os << ", style=filled, fillcolor=palegreen";
    else
      os << ", style=dashed";
    os << "];\n";
  }
  std::map<std::pair<int, int>, char> on_path;
  for (std::size_t i = 0; i + 1 < report.counterexample.size(); ++i)
    on_path[{report.counterexample[i], report.counterexample[i + 1]}] = 1;
  for (int v = 0; v < game.arena.num_vertices(); ++v) {
    for (const ArenaEdge& e : game.arena.out(v)) {
      std::string escaped;
      for (char c : e.expr_text) {
        if (c == '"' || c == '\\')
          escaped += '\\';
        escaped += c;
      }
      os << "  v" << e.from << " -> v" << e.to << " [label=\"" << escaped << "\"";
      if (on_path.count({e.from, e.to}))
        os << ", color=red, penwidth=2";
      os << "];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace parcoal
