#pragma once

#include <cstdint>
#include <optional>

#include "gnorb/gn_space.hpp"

namespace gnorb {

// Number of blocks (alpha_i, beta_i) that vanish after reduction mod 2,
// taken mod 2. Constant along orbits when n is even. Throws
// UndefinedInvariant for odd n.
int vanishing_number(const GnElement& x, const SpaceParams& p);

// Same, but empty for odd n.
std::optional<int> vanishing_number_if_defined(const GnElement& x, const SpaceParams& p);

// sum_i beta_i mod n: invariant under the abelian subgroup generated by the C_i.
Residue beta_sum(const GnElement& x);

// gcd(alpha_i, beta_i, n), 1-based block i.
std::int64_t block_content(const GnElement& x, int i, const SpaceParams& p);

struct BetaSumAudit {
  std::uint64_t pairs = 0;
  std::uint64_t violations = 0;
};

// Every state against every multi-twist with |k_i| <= bound. The beta sum
// of an image is a fixed linear form in x per twist, so each pair costs 2g
// multiply-adds.
BetaSumAudit audit_beta_sum(const SpaceParams& p, int bound);

}  // namespace gnorb
