#include "parcoal/product.hh"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>

namespace parcoal {

namespace {

// Shared per-tree data: edge sources, unsafe-leaf paths, constrained nodes.
struct TreeInfo {
  const UnfoldingTree* tree;
  int m;
  int r;
  std::vector<int> src_index;                  // edge id -> internal index of source
  std::vector<const Dfa*> edge_dfa;            // edge id -> component automaton
  std::vector<std::vector<int>> unsafe_paths;  // edge-id lists of unsafe-leaf paths
  std::vector<char> subtree_unsafe;            // node id -> subtree has an unsafe leaf
  std::vector<char> node_constrained;          // internal index -> constrained

  explicit TreeInfo(const UnfoldingTree& t) : tree(&t) {
    m = t.num_internal();
    r = t.num_edges();
    src_index.resize(r);
    edge_dfa.resize(r);
    for (const TreeEdge& e : t.edges()) {
      src_index[e.id] = t.node(e.from_node).internal_index;
      edge_dfa[e.id] = e.dfa.get();
    }
    subtree_unsafe.assign(t.nodes().size(), 0);
    for (int id = static_cast<int>(t.nodes().size()) - 1; id >= 0; --id) {
      const TreeNode& n = t.node(id);
      if (!n.internal) {
        subtree_unsafe[id] = t.game().is_safe(n.vertex) ? 0 : 1;
      } else {
        for (int c : n.children)
          if (subtree_unsafe[c])
            subtree_unsafe[id] = 1;
      }
    }
    node_constrained.assign(std::max(m, 1), 0);
    for (const TreeNode& n : t.nodes())
      if (n.internal)
        node_constrained[n.internal_index] = subtree_unsafe[n.id];
    for (int leaf : t.leaves()) {
      if (t.game().is_safe(t.node(leaf).vertex))
        continue;
      std::vector<int> path;
      for (int cur = leaf; t.node(cur).parent >= 0; cur = t.node(cur).parent)
        path.push_back(t.node(cur).edge_from_parent);
      std::reverse(path.begin(), path.end());
      unsafe_paths.push_back(std::move(path));
    }
  }

  bool phi(const ProductState& q) const {
    for (const auto& path : unsafe_paths) {
      bool all_accept = true;
      for (int e : path) {
        if (!edge_dfa[e]->accepting(q[e])) {
          all_accept = false;
          break;
        }
      }
      if (all_accept)
        return false;
    }
    return true;
  }
};

}  // namespace

ProductState initial_state(const UnfoldingTree& tree) {
  ProductState q(tree.num_edges());
  for (const TreeEdge& e : tree.edges())
    q[e.id] = e.dfa->initial();
  return q;
}

ProductState step(const UnfoldingTree& tree, const ProductState& q,
                  const TupleLetter& a) {
  if (static_cast<int>(a.size()) != tree.num_internal())
    throw validation_error("tuple letter has the wrong coordinate count");
  if (static_cast<int>(q.size()) != tree.num_edges())
    throw validation_error("product state has the wrong coordinate count");
  ProductState next(q.size());
  for (const TreeEdge& e : tree.edges()) {
    int src = tree.node(e.from_node).internal_index;
    next[e.id] = e.dfa->step(q[e.id], a[src]);
  }
  return next;
}

bool phi_eval(const UnfoldingTree& tree, const ProductState& q) {
  if (static_cast<int>(q.size()) != tree.num_edges())
    throw validation_error("product state has the wrong coordinate count");
  TreeInfo info(tree);
  return info.phi(q);
}

// ---------------------------------------------------------------------------
// The explored greatest-fixpoint engine
// ---------------------------------------------------------------------------

namespace {

// Emptiness of a deterministic safety automaton presented by callbacks.
// States are dense ids; id `initial` is position 0 of every run and is
// exempt from the safety predicate. Explores only states reachable from the
// initial state's successors through safe states, prunes states with no
// successor inside the set, and extracts a lexicographically least lasso.
template <class StepFn, class SafeFn>
std::optional<ExplicitLasso> gfp_solve(int initial, int num_letters, StepFn&& step_fn,
                                       SafeFn&& safe_fn,
                                       std::uint64_t* states_explored = nullptr) {
  std::vector<int> init_succ(num_letters);
  for (int a = 0; a < num_letters; ++a)
    init_succ[a] = step_fn(initial, a);

  std::unordered_map<int, char> in_x;  // explored phi-satisfying states
  std::vector<int> order;
  std::queue<int> todo;
  auto visit = [&](int s) {
    if (in_x.count(s))
      return;
    if (!safe_fn(s)) {
      in_x[s] = 0;
      return;
    }
    in_x[s] = 1;
    order.push_back(s);
    todo.push(s);
  };
  for (int a = 0; a < num_letters; ++a)
    visit(init_succ[a]);
  while (!todo.empty()) {
    int s = todo.front();
    todo.pop();
    for (int a = 0; a < num_letters; ++a)
      visit(step_fn(s, a));
  }
  if (states_explored)
    *states_explored = order.size();

  // iterated pruning: keep states with some successor still inside
  std::unordered_map<int, int> live_count;
  std::unordered_map<int, std::vector<int>> preds;
  auto alive = [&](int s) {
    auto it = in_x.find(s);
    return it != in_x.end() && it->second;
  };
  for (int s : order) {
    int cnt = 0;
    for (int a = 0; a < num_letters; ++a) {
      int t = step_fn(s, a);
      if (alive(t)) {
        ++cnt;
        preds[t].push_back(s);
      }
    }
    live_count[s] = cnt;
  }
  std::queue<int> dead;
  for (int s : order)
    if (live_count[s] == 0)
      dead.push(s);
  while (!dead.empty()) {
    int t = dead.front();
    dead.pop();
    if (!alive(t))
      continue;
    in_x[t] = 0;
    for (int p : preds[t])
      if (alive(p) && --live_count[p] == 0)
        dead.push(p);
  }

  // some letter must send the initial state into the fixpoint
  int a0 = -1;
  for (int a = 0; a < num_letters; ++a)
    if (alive(init_succ[a])) {
      a0 = a;
      break;
    }
  if (a0 < 0)
    return std::nullopt;

  ExplicitLasso lasso;
  std::unordered_map<int, std::size_t> pos;  // state -> index in the walk
  std::vector<int> letters{a0};
  int cur = init_succ[a0];
  std::size_t at = 1;  // cur is reached after letters[0..at)
  pos[cur] = at;
  for (;;) {
    int choice = -1;
    for (int a = 0; a < num_letters; ++a)
      if (alive(step_fn(cur, a))) {
        choice = a;
        break;
      }
    assert(choice >= 0);
    letters.push_back(choice);
    cur = step_fn(cur, choice);
    ++at;
    auto it = pos.find(cur);
    if (it != pos.end()) {
      std::size_t first = it->second;
      lasso.stem.assign(letters.begin(), letters.begin() + first);
      lasso.cycle.assign(letters.begin() + first, letters.end());
      return lasso;
    }
    pos[cur] = at;
  }
}

// Adapter: the product automaton with letters enumerated over constrained
// coordinates only (free coordinates are pinned to the first letter; they
// never influence phi, so the emptiness verdict is unchanged and pinned
// letters are the lexicographically least viable choice at those
// coordinates).
class ProductExplorer {
public:
  ProductExplorer(const TreeInfo& info, std::uint64_t state_cap)
      : info_(info), state_cap_(state_cap) {
    nl_ = info.tree->game().arena.alphabet().size();
    for (int i = 0; i < info_.m; ++i)
      if (info_.node_constrained[i])
        constrained_.push_back(i);
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < constrained_.size(); ++i) {
      count *= static_cast<std::uint64_t>(nl_);
      if (count > (1u << 22))
        throw solver_undecided("product letter enumeration too large");
    }
    num_letters_ = static_cast<int>(count);
    intern(initial_state(*info.tree));
  }

  int num_letters() const { return num_letters_; }

  TupleLetter letter_of(int lid) const {
    TupleLetter a(info_.m, 0);
    for (std::size_t i = constrained_.size(); i-- > 0;) {
      a[constrained_[i]] = lid % nl_;
      lid /= nl_;
    }
    return a;
  }

  int step_id(int sid, int lid) {
    auto key = std::make_pair(sid, lid);
    auto it = succ_memo_.find(key);
    if (it != succ_memo_.end())
      return it->second;
    TupleLetter a = letter_of(lid);
    const ProductState& q = states_[sid];
    ProductState next(q.size());
    for (int e = 0; e < info_.r; ++e)
      next[e] = info_.edge_dfa[e]->step(q[e], a[info_.src_index[e]]);
    int id = intern(std::move(next));
    succ_memo_[key] = id;
    return id;
  }

  bool safe(int sid) const { return info_.phi(states_[sid]); }
  const ProductState& state(int sid) const { return states_[sid]; }
  std::size_t num_states() const { return states_.size(); }

private:
  int intern(ProductState q) {
    auto it = index_.find(q);
    if (it != index_.end())
      return it->second;
    if (states_.size() >= state_cap_)
      throw solver_undecided("product state cap exceeded");
    int id = static_cast<int>(states_.size());
    index_.emplace(q, id);
    states_.push_back(std::move(q));
    return id;
  }

  const TreeInfo& info_;
  std::uint64_t state_cap_;
  int nl_;
  int num_letters_;
  std::vector<int> constrained_;
  std::map<ProductState, int> index_;
  std::vector<ProductState> states_;
  std::map<std::pair<int, int>, int> succ_memo_;
};

}  // namespace

std::optional<ExplicitLasso> solve_explicit(const ExplicitSafetyAutomaton& aut) {
  auto step_fn = [&](int s, int a) {
    return aut.trans[static_cast<std::size_t>(s) * aut.num_letters + a];
  };
  auto safe_fn = [&](int s) { return aut.safe[s] != 0; };
  return gfp_solve(aut.initial, aut.num_letters, step_fn, safe_fn);
}

// ---------------------------------------------------------------------------
// Tree-structured engine
// ---------------------------------------------------------------------------
//
// The explicit product is intractable once the tree has many internal nodes
// (letters multiply per node). The tree-structured engine decides the same
// emptiness question by recursion over the tree: a node picks an ultimately
// periodic word as a lasso of its local out-edge product (extended with a
// clock for the positions its ancestors gate), and each constrained child is
// solved against the gate "ancestor components all accepting", an ultimately
// periodic set computed exactly from the candidate lasso. Candidate words
// are enumerated as first-repeat lassos, with clock enrichment factors to
// reach longer periods; exceeding the search budget raises solver_undecided
// rather than guessing.

namespace {

class GateSolver {
public:
  GateSolver(const TreeInfo& info, const SolveConfig& cfg) : info_(info), cfg_(cfg) {
    nl_ = info.tree->game().arena.alphabet().size();
  }

  // words per internal index, or nullopt when no winning assignment exists
  std::optional<std::vector<UPWord>> run() {
    const UnfoldingTree& tree = *info_.tree;
    std::vector<UPWord> words(info_.m, UPWord::constant(0));
    if (info_.m == 0 || !info_.subtree_unsafe[tree.root()])
      return words;  // nothing to lose against
    for (int factor : {1, 2, 3, 4, 6}) {
      memo_.clear();
      factor_ = factor;
      SubResult res = solve_node(tree.root(), UPSet::all());
      if (res.win) {
        for (const auto& [idx, w] : res.words)
          words[idx] = w;
        return words;
      }
    }
    return std::nullopt;
  }

private:
  struct SubResult {
    bool win = false;
    std::map<int, UPWord> words;  // internal index -> word, subtree scope
  };

  struct Local {
    std::vector<int> coords;             // tree edge ids, one per out-edge
    std::vector<const Dfa*> dfas;        // per coord
    std::vector<char> unsafe_leaf;       // per coord: target is an unsafe leaf
    std::vector<int> child_node;         // per coord: target node id
    std::vector<int> constrained_child;  // coords whose child subtree is constrained
  };

  const Local& local(int node_id) {
    auto it = locals_.find(node_id);
    if (it != locals_.end())
      return it->second;
    Local l;
    const TreeNode& n = info_.tree->node(node_id);
    for (int child : n.children) {
      const TreeNode& cn = info_.tree->node(child);
      int e = cn.edge_from_parent;
      l.coords.push_back(e);
      l.dfas.push_back(info_.edge_dfa[e]);
      l.unsafe_leaf.push_back(!cn.internal &&
                              !info_.tree->game().is_safe(cn.vertex));
      l.child_node.push_back(child);
      if (cn.internal && info_.subtree_unsafe[child])
        l.constrained_child.push_back(static_cast<int>(l.coords.size()) - 1);
    }
    return locals_.emplace(node_id, std::move(l)).first->second;
  }

  void fill_constants(int node_id, std::map<int, UPWord>& words) {
    const TreeNode& n = info_.tree->node(node_id);
    if (!n.internal)
      return;
    words.emplace(n.internal_index, UPWord::constant(0));
    for (int c : n.children)
      fill_constants(c, words);
  }

  // Local search automaton: product of the node's out-edge DFAs (they all
  // read the node's own word) paired with a clock over the gate positions.
  struct LocalAut {
    const Local* l;
    std::uint64_t t;     // clock threshold
    std::uint64_t p;     // clock period (gate period * enrichment factor)
    std::vector<char> gate_bit;  // position 1 .. t+p-1
    std::map<std::vector<int>, int> pindex;
    std::vector<std::vector<int>> pstates;

    int pintern(std::vector<int> q, std::uint64_t cap) {
      auto it = pindex.find(q);
      if (it != pindex.end())
        return it->second;
      if (pstates.size() >= cap)
        throw solver_undecided("local product cap exceeded");
      int id = static_cast<int>(pstates.size());
      pindex.emplace(q, id);
      pstates.push_back(std::move(q));
      return id;
    }
  };

  // A-states are (local product state, clock position) pairs.
  struct AState {
    int pid;
    std::uint64_t pos;
    bool operator<(const AState& o) const {
      return pid != o.pid ? pid < o.pid : pos < o.pos;
    }
  };

  SubResult solve_node(int node_id, const UPSet& gate) {
    SubResult res;
    if (gate.is_empty()) {
      res.win = true;
      fill_constants(node_id, res.words);
      return res;
    }
    auto key = std::make_pair(node_id, gate.describe());
    auto mit = memo_.find(key);
    if (mit != memo_.end())
      return mit->second;

    const Local& l = local(node_id);
    LocalAut aut;
    aut.l = &l;
    aut.t = gate.threshold();
    aut.p = gate.period() * static_cast<std::uint64_t>(factor_);
    aut.gate_bit.assign(aut.t + aut.p, 0);
    for (std::uint64_t k = 1; k < aut.t + aut.p; ++k)
      aut.gate_bit[k] = gate.membership(k) ? 1 : 0;

    std::vector<int> init(l.coords.size());
    for (std::size_t c = 0; c < l.coords.size(); ++c)
      init[c] = l.dfas[c]->initial();
    int init_pid = aut.pintern(std::move(init), cfg_.local_state_cap);

    // reachable A-graph
    std::map<AState, int> aindex;
    std::vector<AState> astates;
    std::vector<int> asucc;  // aid * nl + letter
    auto aintern = [&](AState s) {
      auto it = aindex.find(s);
      if (it != aindex.end())
        return it->second;
      if (astates.size() >= cfg_.local_state_cap)
        throw solver_undecided("local search cap exceeded");
      int id = static_cast<int>(astates.size());
      aindex.emplace(s, id);
      astates.push_back(s);
      return id;
    };
    auto next_pos = [&](std::uint64_t pos) {
      return pos + 1 < aut.t + aut.p ? pos + 1 : aut.t;
    };
    auto locally_safe = [&](const AState& s) {
      if (s.pos == 0)
        return true;
      if (!aut.gate_bit[s.pos])
        return true;
      const std::vector<int>& q = aut.pstates[s.pid];
      for (std::size_t c = 0; c < l.coords.size(); ++c)
        if (l.unsafe_leaf[c] && l.dfas[c]->accepting(q[c]))
          return false;
      return true;
    };

    int start = aintern(AState{init_pid, 0});
    for (std::size_t i = 0; i < astates.size(); ++i) {
      AState s = astates[i];
      for (int a = 0; a < nl_; ++a) {
        const std::vector<int>& q = aut.pstates[s.pid];
        std::vector<int> nq(q.size());
        for (std::size_t c = 0; c < q.size(); ++c)
          nq[c] = l.dfas[c]->step(q[c], a);
        int npid = aut.pintern(std::move(nq), cfg_.local_state_cap);
        asucc.push_back(aintern(AState{npid, next_pos(s.pos)}));
      }
    }
    // rows were appended in state order, so asucc is already dense
    std::vector<int>& succ = asucc;

    // viability: states with an infinite locally-safe continuation
    std::vector<char> viable(astates.size(), 0);
    for (std::size_t i = 0; i < astates.size(); ++i)
      viable[i] = locally_safe(astates[i]) ? 1 : 0;
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < astates.size(); ++i) {
        if (!viable[i])
          continue;
        bool has = false;
        for (int a = 0; a < nl_ && !has; ++a)
          has = viable[succ[i * nl_ + a]] != 0;
        if (!has) {
          viable[i] = 0;
          changed = true;
        }
      }
    }

    if (!viable[start]) {
      memo_[key] = res;  // lose
      return res;
    }

    // depth-first enumeration of first-repeat lassos through viable states;
    // path_pids[j] is the local product state after j letters
    std::vector<int> path_states{start};
    std::vector<int> path_pids{init_pid};
    std::vector<int> path_letters;
    std::map<int, std::size_t> on_path{{start, 0}};

    std::function<bool(SubResult&)> dfs = [&](SubResult& out) -> bool {
      if (++dfs_steps_ > cfg_.lasso_budget)
        throw solver_undecided("lasso search budget exceeded");
      int cur = path_states.back();
      // letters with the same successor state induce the same acceptance
      // pattern and child gates, so one representative (the least) suffices
      std::set<int> tried;
      for (int a = 0; a < nl_; ++a) {
        int t = succ[static_cast<std::size_t>(cur) * nl_ + a];
        if (!viable[t] || !tried.insert(t).second)
          continue;
        auto it = on_path.find(t);
        if (it != on_path.end()) {
          std::size_t close = it->second;
          if (close == 0)
            continue;  // the pre-position-0 state cannot be on a cycle
          path_letters.push_back(a);
          bool ok = try_candidate(node_id, l, aut, gate, path_pids, path_letters,
                                  close, out);
          path_letters.pop_back();
          if (ok)
            return true;
          continue;
        }
        path_letters.push_back(a);
        path_states.push_back(t);
        path_pids.push_back(astates[t].pid);
        on_path.emplace(t, path_states.size() - 1);
        if (dfs(out))
          return true;
        on_path.erase(t);
        path_states.pop_back();
        path_pids.pop_back();
        path_letters.pop_back();
      }
      return false;
    };

    if (dfs(res))
      res.win = true;
    memo_[key] = res;
    return res;
  }

  // A candidate lasso closed at path index `close`: letters[0..close) is the
  // stem, letters[close..) the cycle. Computes each constrained child's gate
  // and recurses.
  bool try_candidate(int node_id, const Local& l, const LocalAut& aut,
                     const UPSet& gate, const std::vector<int>& path_pids,
                     const std::vector<int>& letters, std::size_t close,
                     SubResult& out) {
    std::size_t total = letters.size();
    std::size_t cycle_len = total - close;
    std::map<int, UPWord> words;

    for (int c : l.constrained_child) {
      // acceptance bits of the child's edge component along the lasso; the
      // local state after k letters repeats with period cycle_len from
      // position close on
      auto bit = [&](std::uint64_t k) {
        std::size_t idx = k < total
                              ? static_cast<std::size_t>(k)
                              : close + static_cast<std::size_t>((k - close) %
                                                                 cycle_len);
        return l.dfas[c]->accepting(aut.pstates[path_pids[idx]][c]);
      };
      UPSet acc =
          UPSet::from_bits(bit, std::max<std::uint64_t>(close, 1), cycle_len);
      UPSet child_gate;
      try {
        child_gate = gate.intersect(acc, cfg_.lcm_cap);
      } catch (const budget_exceeded&) {
        throw solver_undecided("gate period exceeds the lcm cap");
      }
      SubResult sub = solve_node(l.child_node[c], child_gate);
      if (!sub.win)
        return false;
      for (const auto& [idx, w] : sub.words)
        words.emplace(idx, w);
    }

    // unconstrained internal children play a constant word
    for (std::size_t c = 0; c < l.coords.size(); ++c) {
      const TreeNode& cn = info_.tree->node(l.child_node[c]);
      if (cn.internal && !info_.subtree_unsafe[cn.id])
        fill_constants(cn.id, words);
    }

    UPWord w;
    w.prefix.assign(letters.begin(), letters.begin() + close);
    w.period.assign(letters.begin() + close, letters.end());
    words.emplace(info_.tree->node(node_id).internal_index, std::move(w));
    out.words = std::move(words);
    return true;
  }

  const TreeInfo& info_;
  const SolveConfig& cfg_;
  int nl_;
  int factor_ = 1;
  std::uint64_t dfs_steps_ = 0;
  std::map<int, Local> locals_;
  std::map<std::pair<int, std::string>, SubResult> memo_;
};

}  // namespace

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

namespace {

// Per-node word -> (stem, cycle) such that the node's local component states
// repeat: state(pos + cycle) == state(pos) for all pos >= stem.
void node_run_shape(const TreeInfo& info, int node_id, const UPWord& w,
                    std::uint64_t* stem, std::uint64_t* cycle) {
  const TreeNode& n = info.tree->node(node_id);
  std::vector<const Dfa*> dfas;
  for (int child : n.children)
    dfas.push_back(info.edge_dfa[info.tree->node(child).edge_from_parent]);
  std::vector<int> q;
  for (const Dfa* d : dfas)
    q.push_back(d->initial());
  std::map<std::pair<std::vector<int>, std::uint64_t>, std::uint64_t> seen;
  std::uint64_t ulen = w.prefix.size();
  std::uint64_t vlen = w.period.size();
  for (std::uint64_t pos = 0;; ++pos) {
    if (pos >= ulen) {
      auto key = std::make_pair(q, (pos - ulen) % vlen);
      auto it = seen.find(key);
      if (it != seen.end()) {
        *stem = it->second;
        *cycle = pos - it->second;
        return;
      }
      seen.emplace(std::move(key), pos);
    }
    int letter = w.letter_at(pos + 1);
    for (std::size_t c = 0; c < dfas.size(); ++c)
      q[c] = dfas[c]->step(q[c], letter);
  }
}

std::optional<Lasso> assemble_lasso(const TreeInfo& info,
                                    const std::vector<UPWord>& words,
                                    const SolveConfig& cfg) {
  const UnfoldingTree& tree = *info.tree;
  std::uint64_t stem_len = 0, cycle_len = 1;
  try {
    for (const TreeNode& n : tree.nodes()) {
      if (!n.internal)
        continue;
      std::uint64_t s = 0, c = 1;
      node_run_shape(info, n.id, words[n.internal_index], &s, &c);
      stem_len = std::max(stem_len, s);
      cycle_len = lcm_capped(cycle_len, c, cfg.lcm_cap);
    }
  } catch (const budget_exceeded&) {
    throw solver_undecided("certificate period exceeds the lcm cap");
  }
  Lasso lasso;
  auto tuple_at = [&](std::uint64_t k) {
    TupleLetter a(info.m);
    for (int i = 0; i < info.m; ++i)
      a[i] = words[i].letter_at(k);
    return a;
  };
  for (std::uint64_t k = 1; k <= stem_len; ++k)
    lasso.stem.push_back(tuple_at(k));
  for (std::uint64_t k = stem_len + 1; k <= stem_len + cycle_len; ++k)
    lasso.cycle.push_back(tuple_at(k));

  // self-check: run B along stem + cycle, phi must hold at every position
  // >= 1 and the state must repeat at the cycle boundary
  ProductState q = initial_state(tree);
  ProductState at_stem_end;
  std::uint64_t k = 0;
  for (const TupleLetter& a : lasso.stem) {
    q = step(tree, q, a);
    ++k;
    if (!info.phi(q))
      throw std::logic_error("internal error: assembled lasso fails phi");
  }
  at_stem_end = q;
  for (const TupleLetter& a : lasso.cycle) {
    q = step(tree, q, a);
    ++k;
    if (!info.phi(q))
      throw std::logic_error("internal error: assembled lasso fails phi");
  }
  if (q != at_stem_end)
    throw std::logic_error("internal error: assembled lasso does not close");
  return lasso;
}

}  // namespace

std::optional<Lasso> solve(const UnfoldingTree& tree, const SolveConfig& config,
                           SolveStats* stats) {
  TreeInfo info(tree);

  // degenerate trees: the root is already a leaf
  if (tree.num_internal() == 0) {
    if (!tree.game().is_safe(tree.node(tree.root()).vertex))
      return std::nullopt;
    Lasso lasso;
    lasso.cycle.push_back(TupleLetter{});
    return lasso;
  }

  int constrained = 0;
  for (char c : info.node_constrained)
    if (c)
      ++constrained;
  std::uint64_t letters = 1;
  bool letters_small = true;
  for (int i = 0; i < constrained && letters_small; ++i) {
    letters *= static_cast<std::uint64_t>(tree.game().arena.alphabet().size());
    if (letters > config.explicit_letter_cap)
      letters_small = false;
  }

  bool use_explicit =
      config.force_engine == 1 || (config.force_engine == 0 && letters_small);

  if (use_explicit) {
    try {
      ProductExplorer explorer(info, config.explicit_state_cap);
      auto step_fn = [&](int s, int a) { return explorer.step_id(s, a); };
      auto safe_fn = [&](int s) { return explorer.safe(s); };
      std::uint64_t explored = 0;
      auto result = gfp_solve(0, explorer.num_letters(), step_fn, safe_fn, &explored);
      if (stats) {
        stats->used_explicit = true;
        stats->explored_states = explored;
      }
      if (!result)
        return std::nullopt;
      Lasso lasso;
      for (int lid : result->stem)
        lasso.stem.push_back(explorer.letter_of(lid));
      for (int lid : result->cycle)
        lasso.cycle.push_back(explorer.letter_of(lid));
      return lasso;
    } catch (const solver_undecided&) {
      if (config.force_engine == 1)
        throw;
      // fall through to the tree-structured engine
    }
  }

  GateSolver solver(info, config);
  auto words = solver.run();
  if (!words)
    return std::nullopt;
  return assemble_lasso(info, *words, config);
}

std::string product_to_dot(const UnfoldingTree& tree, std::size_t max_states) {
  TreeInfo info(tree);
  std::ostringstream os;
  os << "digraph product {\n  node [shape=box, style=rounded];\n";
  if (tree.num_internal() == 0) {
    os << "  q0 [label=\"()\"];\n}\n";
    return os.str();
  }
  std::optional<ProductExplorer> holder;
  try {
    holder.emplace(info, std::max<std::size_t>(max_states * 4, 1024));
  } catch (const solver_undecided&) {
    os << "  note [label=\"tuple alphabet too large to enumerate\", "
          "shape=plaintext];\n}\n";
    return os.str();
  }
  ProductExplorer& explorer = *holder;
  const Alphabet& alphabet = tree.game().arena.alphabet();

  auto state_label = [&](int sid) {
    std::string s = "(";
    const ProductState& q = explorer.state(sid);
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (i)
        s += ",";
      s += std::to_string(q[i]);
    }
    return s + ")";
  };

  std::vector<int> order{0};
  std::map<int, char> seen{{0, 1}};
  bool truncated = false;
  for (std::size_t i = 0; i < order.size(); ++i) {
    int sid = order[i];
    std::map<int, int> first_letter;  // successor -> least letter id
    for (int a = 0; a < explorer.num_letters(); ++a) {
      int t = explorer.step_id(sid, a);
      if (!first_letter.count(t))
        first_letter[t] = a;
    }
    for (auto [t, a] : first_letter) {
      if (!seen.count(t)) {
        if (order.size() >= max_states) {
          truncated = true;
          continue;
        }
        seen[t] = 1;
        order.push_back(t);
      }
      TupleLetter letter = explorer.letter_of(a);
      std::string llabel;
      for (std::size_t i2 = 0; i2 < letter.size(); ++i2) {
        if (i2)
          llabel += ",";
        llabel += alphabet.name(letter[i2]);
      }
      os << "  q" << sid << " -> q" << t << " [label=\"(" << llabel << ")\"];\n";
    }
  }
  for (int sid : order) {
    os << "  q" << sid << " [label=\"" << state_label(sid) << "\"";
    if (explorer.safe(sid))
      os << ", style=\"rounded,filled\", fillcolor=lightblue";
    os << "];\n";
  }
  if (truncated)
    os << "  trunc [label=\"... truncated ...\", shape=plaintext];\n";
  os << "}\n";
  return os.str();
}

}  // namespace parcoal
