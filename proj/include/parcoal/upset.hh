#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace parcoal {

struct budget_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Ultimately periodic set of positive integers, in canonical form: the
/// period is minimal, and the threshold is minimal for that period.
/// membership(k) for k >= threshold is res[(k - threshold) mod period];
/// below the threshold the bits are stored explicitly.
class UPSet {
public:
  /// The empty set.
  UPSet();

  /// Builds the canonical form from a raw description: bits(k) must be
  /// defined for all k >= 1 and satisfy bits(k + raw_period) == bits(k)
  /// for every k >= raw_threshold. The minimal period divides raw_period.
  static UPSet from_bits(const std::function<bool(std::uint64_t)>& bits,
                         std::uint64_t raw_threshold, std::uint64_t raw_period);

  static UPSet all();  // every k >= 1
  static UPSet empty();

  bool membership(std::uint64_t k) const;
  bool is_empty() const;

  std::uint64_t threshold() const { return threshold_; }
  std::uint64_t period() const { return period_; }

  /// Exact intersection. Throws budget_exceeded when lcm of the periods
  /// would exceed lcm_cap.
  UPSet intersect(const UPSet& other, std::uint64_t lcm_cap = 1u << 20) const;

  bool operator==(const UPSet& other) const = default;

  std::string describe() const;

private:
  std::uint64_t threshold_;      // >= 1
  std::uint64_t period_;         // >= 1
  std::vector<char> pre_;        // bits for k = 1 .. threshold_-1
  std::vector<char> res_;        // bits for k >= threshold_, size period_
};

std::uint64_t lcm_capped(std::uint64_t a, std::uint64_t b, std::uint64_t cap);

}  // namespace parcoal
