#include "parcoal/upset.hh"

#include <numeric>
#include <sstream>

namespace parcoal {

std::uint64_t lcm_capped(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
  std::uint64_t g = std::gcd(a, b);
  std::uint64_t q = a / g;
  if (b != 0 && q > cap / b)
    throw budget_exceeded("lcm cap exceeded");
  std::uint64_t l = q * b;
  if (l > cap)
    throw budget_exceeded("lcm cap exceeded");
  return l;
}

UPSet::UPSet() : threshold_(1), period_(1), pre_{}, res_{0} {}

UPSet UPSet::empty() { return UPSet(); }

UPSet UPSet::all() {
  UPSet s;
  s.res_ = {1};
  return s;
}

bool UPSet::membership(std::uint64_t k) const {
  if (k == 0)
    throw std::out_of_range("UPSet members are positive integers");
  if (k < threshold_)
    return pre_[k - 1] != 0;
  return res_[(k - threshold_) % period_] != 0;
}

bool UPSet::is_empty() const {
  for (char b : pre_)
    if (b)
      return false;
  for (char b : res_)
    if (b)
      return false;
  return true;
}

UPSet UPSet::from_bits(const std::function<bool(std::uint64_t)>& bits,
                       std::uint64_t raw_threshold, std::uint64_t raw_period) {
  if (raw_threshold < 1 || raw_period < 1)
    throw std::invalid_argument("UPSet threshold and period must be >= 1");

  // Evaluation against the raw description; valid for every k >= 1.
  auto raw_at = [&](std::uint64_t k) -> bool {
    if (k < raw_threshold)
      return bits(k);
    return bits(raw_threshold + (k - raw_threshold) % raw_period);
  };

  // Minimal period: the smallest divisor d of raw_period such that the tail
  // is d-periodic. The minimal eventual period of any eventually periodic
  // sequence divides every eventual period, so scanning divisors is exact.
  std::uint64_t d = raw_period;
  for (std::uint64_t cand = 1; cand <= raw_period; ++cand) {
    if (raw_period % cand != 0)
      continue;
    bool ok = true;
    for (std::uint64_t j = 0; j < raw_period && ok; ++j)
      ok = raw_at(raw_threshold + j) == raw_at(raw_threshold + j + cand);
    if (ok) {
      d = cand;
      break;
    }
  }

  // Minimal threshold for period d.
  std::uint64_t t = raw_threshold;
  while (t > 1 && raw_at(t - 1) == raw_at(t - 1 + d))
    --t;

  UPSet s;
  s.threshold_ = t;
  s.period_ = d;
  s.pre_.assign(t - 1, 0);
  for (std::uint64_t k = 1; k < t; ++k)
    s.pre_[k - 1] = raw_at(k) ? 1 : 0;
  s.res_.assign(d, 0);
  for (std::uint64_t j = 0; j < d; ++j)
    s.res_[j] = raw_at(t + j) ? 1 : 0;
  return s;
}

UPSet UPSet::intersect(const UPSet& other, std::uint64_t lcm_cap) const {
  std::uint64_t p = lcm_capped(period_, other.period_, lcm_cap);
  std::uint64_t t = std::max(threshold_, other.threshold_);
  return from_bits(
      [&](std::uint64_t k) { return membership(k) && other.membership(k); }, t, p);
}

std::string UPSet::describe() const {
  std::ostringstream os;
  os << "{pre:";
  for (std::uint64_t k = 1; k < threshold_; ++k)
    os << (pre_[k - 1] ? '1' : '0');
  os << " t:" << threshold_ << " cycle:";
  for (char b : res_)
    os << (b ? '1' : '0');
  os << "}";
  return os.str();
}

}  // namespace parcoal
