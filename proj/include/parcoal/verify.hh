#pragma once

#include "parcoal/synthesis.hh"

namespace parcoal {

enum class Verdict { safe, unsafe, undecided };

struct VerificationReport {
  Verdict verdict = Verdict::safe;
  std::optional<std::uint64_t> failing_k;
  History counterexample;  // k-realizable play prefix ending unsafe
  std::uint64_t states_explored = 0;
  std::string note;
};

/// Exact model check of the k-outcome: explores the finite (memory, vertex)
/// graph with adversarial nondeterminism; safe iff no reachable vertex is
/// unsafe.
VerificationReport verify_fixed_k(const SafetyGame& game, const MemoryStrategy& ms,
                                  std::uint64_t k);

/// Exact over all k >= 1 via representatives: the prefix-membership sets
/// U(m, v, v') are ultimately periodic, so parameters agreeing beyond the
/// joint threshold modulo the joint period induce identical transition
/// graphs. Exceeding lcm_cap yields an undecided report, never a wrong
/// verdict.
VerificationReport verify_all_k(const SafetyGame& game, const MemoryStrategy& ms,
                                std::uint64_t lcm_cap = 1u << 20);

/// Bounded independent oracle: does some assignment of length-L words to the
/// internal nodes keep every adversarial tree walk safe for every k <= K?
/// With memoryless set, equilabeled internal nodes are forced to share one
/// word. Throws budget_exceeded instead of guessing.
bool brute_force_exists(const SafetyGame& game, const UnfoldingTree& tree,
                        std::uint64_t K, std::uint64_t L, bool memoryless = false,
                        std::uint64_t budget = 50000000);

enum class Resolver { random, first, minimal };

/// Seeded play prefix consistent with the strategy for k agents;
/// nondeterminism resolved per the resolver.
History simulate(const SafetyGame& game, const MemoryStrategy& ms, std::uint64_t k,
                 std::uint64_t steps, std::uint64_t seed,
                 Resolver resolver = Resolver::random);

std::string report_to_json(const VerificationReport& report, const SafetyGame& game);
std::string report_to_text(const VerificationReport& report, const SafetyGame& game);

/// Arena drawing with the report's counterexample play overlaid.
std::string counterexample_dot(const SafetyGame& game,
                               const VerificationReport& report);

}  // namespace parcoal
