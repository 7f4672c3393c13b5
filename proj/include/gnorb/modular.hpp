#pragma once

#include <cstdint>
#include <numeric>

namespace gnorb {

using Residue = std::int64_t;

// Canonical representative of v modulo n in [0, n).
constexpr Residue mod_reduce(std::int64_t v, std::int64_t n) {
  const std::int64_t r = v % n;
  return r < 0 ? r + n : r;
}

constexpr Residue mod_mul(Residue a, Residue b, std::int64_t n) {
  return static_cast<Residue>((static_cast<__int128>(a) * b) % n);
}

constexpr std::int64_t gcd3(std::int64_t a, std::int64_t b, std::int64_t c) {
  return std::gcd(std::gcd(a, b), c);
}

// Inverse of a modulo n, or -1 when gcd(a, n) != 1.
constexpr std::int64_t mod_inverse(std::int64_t a, std::int64_t n) {
  std::int64_t old_r = mod_reduce(a, n), r = n;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) return n == 1 ? 0 : -1;
  return mod_reduce(old_s, n);
}

}  // namespace gnorb
