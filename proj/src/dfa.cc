#include "parcoal/dfa.hh"

#include <algorithm>
#include <cassert>
#include <map>
#include <queue>
#include <set>

namespace parcoal {

Dfa::Dfa(Alphabet alphabet, int num_states, int initial, std::vector<int> transitions,
         std::vector<char> accepting)
    : alphabet_(std::move(alphabet)),
      num_states_(num_states),
      initial_(initial),
      trans_(std::move(transitions)),
      accepting_(std::move(accepting)) {
  if (num_states_ <= 0)
    throw validation_error("DFA needs at least one state");
  if (initial_ < 0 || initial_ >= num_states_)
    throw validation_error("DFA initial state out of range");
  if (trans_.size() != static_cast<std::size_t>(num_states_) * alphabet_.size())
    throw validation_error("DFA transition table has the wrong size");
  if (accepting_.size() != static_cast<std::size_t>(num_states_))
    throw validation_error("DFA accepting vector has the wrong size");
  for (int t : trans_)
    if (t < 0 || t >= num_states_)
      throw validation_error("DFA transition target out of range");
}

bool Dfa::member(const Word& word) const {
  int q = initial_;
  for (int letter : word) {
    if (letter < 0 || letter >= alphabet_.size())
      throw validation_error("word letter outside the DFA alphabet");
    q = step(q, letter);
  }
  return !word.empty() && accepting(q);
}

bool Dfa::is_empty_lang() const {
  // emptiness of L intersected with Sigma^+: acceptance is checked on every
  // state reachable by at least one letter, so an accepting initial state
  // only matters when re-entered
  std::vector<char> seen(num_states_, 0);
  std::queue<int> todo;
  seen[initial_] = 1;
  todo.push(initial_);
  while (!todo.empty()) {
    int q = todo.front();
    todo.pop();
    for (int a = 0; a < alphabet_.size(); ++a) {
      int q2 = step(q, a);
      if (accepting(q2))
        return false;
      if (!seen[q2]) {
        seen[q2] = 1;
        todo.push(q2);
      }
    }
  }
  return true;
}

Dfa Dfa::trim() const {
  std::vector<int> renum(num_states_, -1);
  std::vector<int> order;
  renum[initial_] = 0;
  order.push_back(initial_);
  for (std::size_t i = 0; i < order.size(); ++i) {
    int q = order[i];
    for (int a = 0; a < alphabet_.size(); ++a) {
      int q2 = step(q, a);
      if (renum[q2] < 0) {
        renum[q2] = static_cast<int>(order.size());
        order.push_back(q2);
      }
    }
  }
  int n = static_cast<int>(order.size());
  std::vector<int> tr(static_cast<std::size_t>(n) * alphabet_.size());
  std::vector<char> acc(n, 0);
  for (int i = 0; i < n; ++i) {
    acc[i] = accepting_[order[i]];
    for (int a = 0; a < alphabet_.size(); ++a)
      tr[static_cast<std::size_t>(i) * alphabet_.size() + a] = renum[step(order[i], a)];
  }
  return Dfa(alphabet_, n, 0, std::move(tr), std::move(acc));
}

Dfa Dfa::minimize() const {
  Dfa d = trim();
  int n = d.num_states_;
  int nl = d.alphabet_.size();

  // inverse transitions
  std::vector<std::vector<std::vector<int>>> inv(
      nl, std::vector<std::vector<int>>(n));
  for (int q = 0; q < n; ++q)
    for (int a = 0; a < nl; ++a)
      inv[a][d.step(q, a)].push_back(q);

  // Hopcroft partition refinement
  std::vector<std::vector<int>> blocks;
  std::vector<int> block_of(n, -1);
  {
    std::vector<int> acc, rej;
    for (int q = 0; q < n; ++q)
      (d.accepting_[q] ? acc : rej).push_back(q);
    if (!rej.empty()) {
      for (int q : rej)
        block_of[q] = static_cast<int>(blocks.size());
      blocks.push_back(std::move(rej));
    }
    if (!acc.empty()) {
      for (int q : acc)
        block_of[q] = static_cast<int>(blocks.size());
      blocks.push_back(std::move(acc));
    }
  }

  std::set<std::pair<int, int>> work;  // (block, letter)
  for (int b = 0; b < static_cast<int>(blocks.size()); ++b)
    for (int a = 0; a < nl; ++a)
      work.insert({b, a});

  while (!work.empty()) {
    auto [bi, a] = *work.begin();
    work.erase(work.begin());

    // X = predecessors of block bi under letter a
    std::vector<int> preds;
    for (int q : blocks[bi])
      for (int p : inv[a][q])
        preds.push_back(p);
    if (preds.empty())
      continue;

    // group predecessors by their current block
    std::map<int, std::vector<int>> touched;
    for (int p : preds)
      touched[block_of[p]].push_back(p);

    for (auto& [y, inter] : touched) {
      std::sort(inter.begin(), inter.end());
      inter.erase(std::unique(inter.begin(), inter.end()), inter.end());
      if (inter.size() == blocks[y].size())
        continue;  // block fully inside X, no split
      // split y into inter and rest
      std::vector<char> in_inter(n, 0);
      for (int p : inter)
        in_inter[p] = 1;
      std::vector<int> rest;
      for (int q : blocks[y])
        if (!in_inter[q])
          rest.push_back(q);
      int new_idx = static_cast<int>(blocks.size());
      blocks[y] = inter;
      blocks.push_back(rest);
      for (int q : blocks[new_idx])
        block_of[q] = new_idx;
      for (int c = 0; c < nl; ++c) {
        if (work.count({y, c})) {
          work.insert({new_idx, c});
        } else {
          // add the smaller of the two parts
          if (blocks[y].size() <= blocks[new_idx].size())
            work.insert({y, c});
          else
            work.insert({new_idx, c});
        }
      }
    }
  }

  int m = static_cast<int>(blocks.size());
  std::vector<int> tr(static_cast<std::size_t>(m) * nl);
  std::vector<char> acc(m, 0);
  for (int b = 0; b < m; ++b) {
    int rep = blocks[b][0];
    acc[b] = d.accepting_[rep];
    for (int a = 0; a < nl; ++a)
      tr[static_cast<std::size_t>(b) * nl + a] = block_of[d.step(rep, a)];
  }
  return Dfa(d.alphabet_, m, block_of[d.initial_], std::move(tr), std::move(acc));
}

Dfa Dfa::canonical() const {
  return minimize().trim();  // trim renumbers in BFS discovery order
}

bool Dfa::same_structure(const Dfa& other) const {
  return alphabet_ == other.alphabet_ && num_states_ == other.num_states_ &&
         initial_ == other.initial_ && trans_ == other.trans_ &&
         accepting_ == other.accepting_;
}

Dfa Dfa::sigma_plus(const Alphabet& alphabet) {
  int nl = alphabet.size();
  std::vector<int> tr(2 * nl, 1);
  return Dfa(alphabet, 2, 0, std::move(tr), {0, 1});
}

Dfa Dfa::empty_lang(const Alphabet& alphabet) {
  int nl = alphabet.size();
  std::vector<int> tr(nl, 0);
  return Dfa(alphabet, 1, 0, std::move(tr), {0});
}

namespace {

Dfa product(const Dfa& a, const Dfa& b, bool (*combine)(bool, bool)) {
  if (a.alphabet() != b.alphabet())
    throw validation_error("DFA product over different alphabets");
  int nl = a.alphabet().size();
  std::map<std::pair<int, int>, int> idx;
  std::vector<std::pair<int, int>> states;
  auto intern = [&](int p, int q) {
    auto it = idx.find({p, q});
    if (it != idx.end())
      return it->second;
    int id = static_cast<int>(states.size());
    idx.emplace(std::make_pair(p, q), id);
    states.push_back({p, q});
    return id;
  };
  intern(a.initial(), b.initial());
  std::vector<int> tr;
  std::vector<char> acc;
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto [p, q] = states[i];
    acc.push_back(combine(a.accepting(p), b.accepting(q)) ? 1 : 0);
    for (int l = 0; l < nl; ++l)
      tr.push_back(intern(a.step(p, l), b.step(q, l)));
  }
  // tr was filled row by row while states grew; rows are contiguous already
  return Dfa(a.alphabet(), static_cast<int>(states.size()), 0, std::move(tr),
             std::move(acc));
}

}  // namespace

Dfa Dfa::union_of(const Dfa& a, const Dfa& b) {
  return product(a, b, [](bool x, bool y) { return x || y; }).minimize();
}

Dfa Dfa::intersection(const Dfa& a, const Dfa& b) {
  return product(a, b, [](bool x, bool y) { return x && y; }).minimize();
}

Dfa Dfa::difference(const Dfa& a, const Dfa& b) {
  return product(a, b, [](bool x, bool y) { return x && !y; }).minimize();
}

Dfa Dfa::complement_sigma_plus(const Dfa& a) {
  Dfa flipped = a;
  for (auto& f : flipped.accepting_)
    f = f ? 0 : 1;
  return intersection(flipped, sigma_plus(a.alphabet()));
}

bool Dfa::equal_lang(const Dfa& a, const Dfa& b) {
  Dfa diff = product(a, b, [](bool x, bool y) { return x != y; });
  return diff.is_empty_lang();
}

UPSet Dfa::length_set() const {
  // subset-of-states-at-distance-k iteration; cycles within 2^{|Q|} steps
  std::vector<char> cur(num_states_, 0);
  cur[initial_] = 1;
  std::map<std::vector<char>, std::uint64_t> seen;
  std::vector<char> bits;  // bits[k-1] for k = 1..
  seen[cur] = 0;
  std::uint64_t t0 = 0, p0 = 0;
  for (std::uint64_t k = 1;; ++k) {
    std::vector<char> next(num_states_, 0);
    for (int q = 0; q < num_states_; ++q)
      if (cur[q])
        for (int a = 0; a < alphabet_.size(); ++a)
          next[step(q, a)] = 1;
    bool any_acc = false;
    for (int q = 0; q < num_states_; ++q)
      if (next[q] && accepting_[q])
        any_acc = true;
    bits.push_back(any_acc ? 1 : 0);
    auto it = seen.find(next);
    if (it != seen.end()) {
      t0 = it->second;
      p0 = k - it->second;
      break;
    }
    seen[next] = k;
    cur = std::move(next);
  }
  std::uint64_t raw_t = std::max<std::uint64_t>(t0 + 1, 1);
  return UPSet::from_bits(
      [&](std::uint64_t k) {
        if (k <= bits.size())
          return bits[k - 1] != 0;
        std::uint64_t r = raw_t + (k - raw_t) % p0;
        return bits[r - 1] != 0;
      },
      raw_t, p0);
}

UPSet Dfa::prefix_membership(const UPWord& w) const {
  if (w.period.empty())
    throw validation_error("UPWord period must be nonempty");
  std::uint64_t ulen = w.prefix.size();
  std::uint64_t vlen = w.period.size();
  std::vector<char> bits;
  std::map<std::pair<int, std::uint64_t>, std::uint64_t> seen;
  int q = initial_;
  std::uint64_t t0 = 0, p0 = 0;
  for (std::uint64_t n = 1;; ++n) {
    int letter = w.letter_at(n);
    if (letter < 0 || letter >= alphabet_.size())
      throw validation_error("UPWord letter outside the DFA alphabet");
    q = step(q, letter);
    bits.push_back(accepting(q) ? 1 : 0);
    if (n >= ulen) {
      std::uint64_t phase = (n - ulen) % vlen;
      auto key = std::make_pair(q, phase);
      auto it = seen.find(key);
      if (it != seen.end()) {
        t0 = it->second;
        p0 = n - it->second;
        break;
      }
      seen[key] = n;
    }
  }
  return UPSet::from_bits(
      [&](std::uint64_t k) {
        if (k <= bits.size())
          return bits[k - 1] != 0;
        std::uint64_t r = t0 + (k - t0) % p0;
        return bits[r - 1] != 0;
      },
      t0, p0);
}

}  // namespace parcoal
