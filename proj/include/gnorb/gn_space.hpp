#pragma once

// The state space of index-n fiberwise coverings, identified with
// (Z/nZ)^{2g} through the values (alpha_1, beta_1, ..., alpha_g, beta_g) of
// the cochain nu on the standard generators.

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gnorb/modular.hpp"

namespace gnorb {

inline constexpr std::int64_t kMaxModulus = std::int64_t{1} << 30;

struct SpaceParams {
  int g = 2;
  std::int64_t n = 1;
  bool strict_euler = true;

  // Throws ParamError unless g >= 2, 1 <= n <= kMaxModulus and, when
  // strict_euler is set, n divides 2g - 2.
  static SpaceParams make(int g, std::int64_t n, bool strict_euler = true);

  int dim() const { return 2 * g; }
  bool euler_divisible() const { return (2 * g - 2) % n == 0; }
  // n^{2g}, or 0 when it does not fit in 64 bits.
  std::uint64_t state_count() const;

  friend bool operator==(const SpaceParams&, const SpaceParams&) = default;
};

class GnElement {
 public:
  GnElement() = default;
  // Reduces every value into [0, n).
  GnElement(std::vector<std::int64_t> values, std::int64_t n);

  static GnElement zero(const SpaceParams& p);

  std::int64_t modulus() const { return n_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  int genus() const { return dim() / 2; }
  std::span<const Residue> coords() const { return coords_; }

  // 1-based block accessors.
  Residue alpha(int i) const { return coords_[2 * (i - 1)]; }
  Residue beta(int i) const { return coords_[2 * (i - 1) + 1]; }
  Residue operator[](int j) const { return coords_[j]; }
  void set(int j, std::int64_t v) { coords_[j] = mod_reduce(v, n_); }

  friend bool operator==(const GnElement&, const GnElement&) = default;
  friend auto operator<=>(const GnElement&, const GnElement&) = default;

 private:
  std::vector<Residue> coords_;
  std::int64_t n_ = 1;
};

GnElement make_element(const SpaceParams& p, std::span<const std::int64_t> values);
GnElement make_element(const SpaceParams& p, std::initializer_list<std::int64_t> values);

// "a,b,c,d" with exactly 2g decimal integers (possibly negative).
GnElement parse_element(const SpaceParams& p, std::string_view text);
std::string format_element(const GnElement& x);

// Dense matrix over Z/nZ, row-major.
class ModMatrix {
 public:
  ModMatrix() = default;
  ModMatrix(int rows, int cols, std::int64_t n);
  static ModMatrix identity(int d, std::int64_t n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::int64_t modulus() const { return n_; }
  Residue operator()(int r, int c) const { return data_[r * cols_ + c]; }
  void set(int r, int c, std::int64_t v) { data_[r * cols_ + c] = mod_reduce(v, n_); }
  std::span<const Residue> data() const { return data_; }

  ModMatrix operator*(const ModMatrix& rhs) const;
  std::vector<Residue> apply(std::span<const Residue> v) const;
  ModMatrix transpose() const;

  friend bool operator==(const ModMatrix&, const ModMatrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::int64_t n_ = 1;
  std::vector<Residue> data_;
};

// Standard symplectic form in the (alpha_1, beta_1, ...) ordering:
// J(alpha_i, beta_i) = 1, J(beta_i, alpha_i) = -1.
ModMatrix symplectic_form(int g, std::int64_t n);
bool preserves_symplectic_form(const ModMatrix& m);

// x -> L x + t over Z/nZ.
class AffineMap {
 public:
  AffineMap() = default;
  AffineMap(ModMatrix linear, std::vector<Residue> translation);
  static AffineMap identity(int d, std::int64_t n);
  static AffineMap translation_by(std::vector<std::int64_t> t, std::int64_t n);

  const ModMatrix& linear() const { return linear_; }
  std::span<const Residue> translation() const { return translation_; }
  int dim() const { return linear_.rows(); }
  std::int64_t modulus() const { return linear_.modulus(); }

  friend bool operator==(const AffineMap&, const AffineMap&) = default;

 private:
  ModMatrix linear_;
  std::vector<Residue> translation_;
};

GnElement apply_affine(const AffineMap& m, const GnElement& x);
// compose(m1, m2) acts as m2 first, then m1.
AffineMap compose(const AffineMap& m1, const AffineMap& m2);
// Throws RangeError if the linear part is not invertible mod n.
AffineMap inverse(const AffineMap& m);
// m^e for any integer e (negative powers go through inverse), by squaring.
AffineMap power(const AffineMap& m, std::int64_t e);

Residue determinant(const ModMatrix& m);
// Inverse mod n via Euclidean row reduction (valid for composite n); throws
// RangeError when the determinant is not a unit.
ModMatrix inverse(const ModMatrix& m);

struct StateIndex {
  std::uint64_t value = 0;
  friend bool operator==(StateIndex, StateIndex) = default;
  friend auto operator<=>(StateIndex, StateIndex) = default;
};

// index = sum_j coords[j] * n^j
StateIndex encode(const GnElement& x);
GnElement decode(StateIndex i, const SpaceParams& p);

}  // namespace gnorb
