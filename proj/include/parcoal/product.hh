#pragma once

#include <optional>

#include "parcoal/unfolding.hh"
#include "parcoal/upset.hh"

namespace parcoal {

/// One letter of the product alphabet Sigma^m: coordinate i is the letter
/// played at internal node n_i.
using TupleLetter = std::vector<int>;

/// One state of the product safety automaton B: coordinate s is the state of
/// the component DFA attached to tree edge e_s.
using ProductState = std::vector<int>;

/// Certificate for L(B) != empty: the run of B on stem * cycle^omega stays
/// phi-satisfying at every position >= 1 (position 0 is exempt; the initial
/// state need not satisfy phi).
struct Lasso {
  std::vector<TupleLetter> stem;
  std::vector<TupleLetter> cycle;  // nonempty
};

ProductState initial_state(const UnfoldingTree& tree);

/// Componentwise step: component s reads the letter of its source node.
ProductState step(const UnfoldingTree& tree, const ProductState& q,
                  const TupleLetter& a);

/// phi = for every maximal path: if all edge components on the path accept,
/// the leaf label is safe.
bool phi_eval(const UnfoldingTree& tree, const ProductState& q);

struct solver_undecided : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolveConfig {
  std::uint64_t explicit_state_cap = 200000;
  std::uint64_t explicit_letter_cap = 4096;
  std::uint64_t local_state_cap = 200000;
  std::uint64_t lasso_budget = 2000000;
  std::uint64_t lcm_cap = 1u << 20;
  // 0 = choose by instance size, 1 = force explicit gfp, 2 = force the
  // tree-structured engine (used by cross-checking tests)
  int force_engine = 0;
};

struct SolveStats {
  bool used_explicit = false;
  std::uint64_t explored_states = 0;  // explicit engine only
};

/// Decides L(B) != empty and returns a certificate lasso. Small instances
/// run the on-the-fly greatest-fixpoint over explored product states; larger
/// trees run an equivalent recursion over the tree that searches per-node
/// lassos against gate constraints.
std::optional<Lasso> solve(const UnfoldingTree& tree, const SolveConfig& config = {},
                           SolveStats* stats = nullptr);

// --- explicit safety automata ------------------------------------------------

/// Deterministic safety automaton given by explicit tables; acceptance asks
/// every position >= 1 of the run to be in the safe set.
struct ExplicitSafetyAutomaton {
  int num_states;
  int num_letters;
  int initial;
  std::vector<int> trans;  // state * num_letters + letter
  std::vector<char> safe;
};

struct ExplicitLasso {
  std::vector<int> stem;   // letters
  std::vector<int> cycle;  // letters, nonempty
};

/// Emptiness via the explored greatest fixpoint; lasso letters are
/// tie-broken lexicographically least.
std::optional<ExplicitLasso> solve_explicit(const ExplicitSafetyAutomaton& aut);

/// DOT export of the explored fragment of B (phi-satisfying states shaded);
/// exploration is truncated at max_states with a marker.
std::string product_to_dot(const UnfoldingTree& tree, std::size_t max_states = 64);

}  // namespace parcoal
