#include "gnorb/invariants.hpp"

#include <algorithm>

#include "gnorb/errors.hpp"
#include "gnorb/mcg_action.hpp"

namespace gnorb {

int vanishing_number(const GnElement& x, const SpaceParams& p) {
  if (p.n % 2 != 0)
    throw UndefinedInvariant("vanishing number is only defined for even n (n = " +
                             std::to_string(p.n) + ")");
  if (x.dim() != p.dim()) throw DimensionError("element dimension does not match genus");
  int zeros = 0;
  for (int i = 1; i <= p.g; ++i)
    if (x.alpha(i) % 2 == 0 && x.beta(i) % 2 == 0) ++zeros;
  return zeros % 2;
}

std::optional<int> vanishing_number_if_defined(const GnElement& x, const SpaceParams& p) {
  if (p.n % 2 != 0) return std::nullopt;
  return vanishing_number(x, p);
}

Residue beta_sum(const GnElement& x) {
  Residue s = 0;
  for (int i = 1; i <= x.genus(); ++i) s = (s + x.beta(i)) % x.modulus();
  return s;
}

std::int64_t block_content(const GnElement& x, int i, const SpaceParams& p) {
  if (i < 1 || i > p.g)
    throw RangeError("block index " + std::to_string(i) + " outside [1, " + std::to_string(p.g) + "]");
  return gcd3(x.alpha(i), x.beta(i), p.n);
}

BetaSumAudit audit_beta_sum(const SpaceParams& p, int bound) {
  if (bound < 0) throw ParamError("multi-twist bound must be non-negative");
  const std::int64_t n = p.n;
  const int dim = p.dim();
  BetaSumAudit out;
  std::vector<std::int64_t> k(p.g - 1, -bound);
  std::vector<Residue> x(dim);
  while (true) {
    const AffineMap m = multi_twist_action(MultiTwist{k}, p);
    std::vector<Residue> w(dim, 0);
    Residue tau = 0;
    for (int j = 1; j <= p.g; ++j) {
      for (int c = 0; c < dim; ++c) w[c] += m.linear()(2 * j - 1, c);
      tau += m.translation()[2 * j - 1];
    }
    std::fill(x.begin(), x.end(), 0);
    Residue before = 0;
    for (std::uint64_t i = 0; i < p.state_count(); ++i) {
      Residue after = tau;
      for (int c = 0; c < dim; ++c) after += w[c] * x[c];
      if (mod_reduce(after, n) != mod_reduce(before, n)) ++out.violations;
      ++out.pairs;
      // Odometer over the mixed-radix index, tracking the beta sum.
      for (int c = 0; c < dim; ++c) {
        const bool carry = ++x[c] == n;
        if (c % 2 == 1) before += carry ? 1 - n : 1;
        if (!carry) break;
        x[c] = 0;
      }
    }
    std::size_t pos = 0;
    while (pos < k.size() && k[pos] == bound) k[pos++] = -bound;
    if (pos == k.size()) break;
    ++k[pos];
  }
  return out;
}

}  // namespace gnorb
