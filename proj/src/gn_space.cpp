#include "gnorb/gn_space.hpp"

#include <charconv>
#include <sstream>
#include <utility>

#include "gnorb/errors.hpp"

namespace gnorb {

SpaceParams SpaceParams::make(int g, std::int64_t n, bool strict_euler) {
  if (g < 2) throw ParamError("genus must be at least 2, got " + std::to_string(g));
  if (n < 1 || n > kMaxModulus)
    throw ParamError("covering index must lie in [1, 2^30], got " + std::to_string(n));
  SpaceParams p{g, n, strict_euler};
  if (strict_euler && !p.euler_divisible())
    throw ParamError("n = " + std::to_string(n) + " does not divide 2g-2 = " +
                     std::to_string(2 * g - 2));
  return p;
}

std::uint64_t SpaceParams::state_count() const {
  unsigned __int128 total = 1;
  for (int j = 0; j < dim(); ++j) {
    total *= static_cast<unsigned>(n);
    if (total > UINT64_MAX) return 0;
  }
  return static_cast<std::uint64_t>(total);
}

GnElement::GnElement(std::vector<std::int64_t> values, std::int64_t n)
    : coords_(std::move(values)), n_(n) {
  for (auto& c : coords_) c = mod_reduce(c, n_);
}

GnElement GnElement::zero(const SpaceParams& p) {
  return GnElement(std::vector<std::int64_t>(p.dim(), 0), p.n);
}

GnElement make_element(const SpaceParams& p, std::span<const std::int64_t> values) {
  if (static_cast<int>(values.size()) != p.dim())
    throw DimensionError("element needs " + std::to_string(p.dim()) + " coordinates, got " +
                         std::to_string(values.size()));
  return GnElement(std::vector<std::int64_t>(values.begin(), values.end()), p.n);
}

GnElement make_element(const SpaceParams& p, std::initializer_list<std::int64_t> values) {
  return make_element(p, std::span<const std::int64_t>(values.begin(), values.size()));
}

GnElement parse_element(const SpaceParams& p, std::string_view text) {
  std::vector<std::int64_t> values;
  std::size_t pos = 0;
  while (true) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    std::int64_t v = 0;
    const char* first = text.data() + pos;
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc()) throw ParseError("expected an integer", pos);
    values.push_back(v);
    pos = static_cast<std::size_t>(ptr - text.data());
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos == text.size()) break;
    if (text[pos] != ',') throw ParseError("expected ','", pos);
    ++pos;
  }
  return make_element(p, values);
}

std::string format_element(const GnElement& x) {
  std::ostringstream out;
  for (int j = 0; j < x.dim(); ++j) {
    if (j) out << ',';
    out << x[j];
  }
  return out.str();
}

// ---------------------------------------------------------------------------

ModMatrix::ModMatrix(int rows, int cols, std::int64_t n)
    : rows_(rows), cols_(cols), n_(n), data_(static_cast<std::size_t>(rows) * cols, 0) {}

ModMatrix ModMatrix::identity(int d, std::int64_t n) {
  ModMatrix m(d, d, n);
  for (int i = 0; i < d; ++i) m.set(i, i, 1);
  return m;
}

ModMatrix ModMatrix::operator*(const ModMatrix& rhs) const {
  if (cols_ != rhs.rows_ || n_ != rhs.n_) throw DimensionError("matrix product shape mismatch");
  ModMatrix out(rows_, rhs.cols_, n_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < rhs.cols_; ++j) {
      Residue acc = 0;
      for (int k = 0; k < cols_; ++k) acc = (acc + mod_mul((*this)(i, k), rhs(k, j), n_)) % n_;
      out.data_[i * rhs.cols_ + j] = acc;
    }
  return out;
}

std::vector<Residue> ModMatrix::apply(std::span<const Residue> v) const {
  if (static_cast<int>(v.size()) != cols_) throw DimensionError("matrix-vector shape mismatch");
  std::vector<Residue> out(rows_, 0);
  for (int i = 0; i < rows_; ++i) {
    Residue acc = 0;
    for (int k = 0; k < cols_; ++k) acc = (acc + mod_mul((*this)(i, k), v[k], n_)) % n_;
    out[i] = acc;
  }
  return out;
}

ModMatrix ModMatrix::transpose() const {
  ModMatrix t(cols_, rows_, n_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.data_[j * rows_ + i] = (*this)(i, j);
  return t;
}

ModMatrix symplectic_form(int g, std::int64_t n) {
  ModMatrix j(2 * g, 2 * g, n);
  for (int i = 0; i < g; ++i) {
    j.set(2 * i, 2 * i + 1, 1);
    j.set(2 * i + 1, 2 * i, -1);
  }
  return j;
}

bool preserves_symplectic_form(const ModMatrix& m) {
  if (m.rows() != m.cols() || m.rows() % 2) return false;
  const ModMatrix j = symplectic_form(m.rows() / 2, m.modulus());
  return m.transpose() * j * m == j;
}

namespace {

// Row reduction over Z/nZ using Euclidean row steps, so it works for
// composite n. Reduces `m` to upper triangular form while applying the same
// operations to `aug` (if non-null). Returns the sign of the row permutation.
int euclid_triangularize(std::vector<Residue>& m, std::vector<Residue>* aug, int d,
                         std::int64_t n) {
  auto row_axpy = [&](std::vector<Residue>& a, int dst, int src, Residue q) {
    // row dst -= q * row src
    for (int k = 0; k < d; ++k)
      a[dst * d + k] = mod_reduce(a[dst * d + k] - mod_mul(q, a[src * d + k], n), n);
  };
  auto row_swap = [&](std::vector<Residue>& a, int r1, int r2) {
    for (int k = 0; k < d; ++k) std::swap(a[r1 * d + k], a[r2 * d + k]);
  };
  int sign = 1;
  for (int c = 0; c < d; ++c) {
    for (int r = c + 1; r < d; ++r) {
      while (m[r * d + c] != 0) {
        const Residue q = m[c * d + c] / m[r * d + c];
        row_axpy(m, c, r, q);
        if (aug) row_axpy(*aug, c, r, q);
        row_swap(m, c, r);
        if (aug) row_swap(*aug, c, r);
        sign = -sign;
      }
    }
  }
  return sign;
}

}  // namespace

Residue determinant(const ModMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("determinant of a non-square matrix");
  const int d = m.rows();
  const std::int64_t n = m.modulus();
  std::vector<Residue> a(m.data().begin(), m.data().end());
  Residue det = mod_reduce(euclid_triangularize(a, nullptr, d, n), n);
  for (int i = 0; i < d; ++i) det = mod_mul(det, a[i * d + i], n);
  return det;
}

ModMatrix inverse(const ModMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("inverse of a non-square matrix");
  const int d = m.rows();
  const std::int64_t n = m.modulus();
  std::vector<Residue> a(m.data().begin(), m.data().end());
  const ModMatrix id = ModMatrix::identity(d, n);
  std::vector<Residue> aug(id.data().begin(), id.data().end());
  euclid_triangularize(a, &aug, d, n);
  // Back substitution: every pivot must be a unit.
  for (int c = d - 1; c >= 0; --c) {
    const std::int64_t inv = mod_inverse(a[c * d + c], n);
    if (inv < 0) throw RangeError("matrix is not invertible mod " + std::to_string(n));
    for (int k = 0; k < d; ++k) {
      a[c * d + k] = mod_mul(a[c * d + k], inv, n);
      aug[c * d + k] = mod_mul(aug[c * d + k], inv, n);
    }
    for (int r = 0; r < c; ++r) {
      const Residue q = a[r * d + c];
      if (q == 0) continue;
      for (int k = 0; k < d; ++k) {
        a[r * d + k] = mod_reduce(a[r * d + k] - mod_mul(q, a[c * d + k], n), n);
        aug[r * d + k] = mod_reduce(aug[r * d + k] - mod_mul(q, aug[c * d + k], n), n);
      }
    }
  }
  ModMatrix out(d, d, n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out.set(i, j, aug[i * d + j]);
  return out;
}

// ---------------------------------------------------------------------------

AffineMap::AffineMap(ModMatrix linear, std::vector<Residue> translation)
    : linear_(std::move(linear)), translation_(std::move(translation)) {
  if (linear_.rows() != linear_.cols() ||
      static_cast<int>(translation_.size()) != linear_.rows())
    throw DimensionError("affine map shape mismatch");
  for (auto& t : translation_) t = mod_reduce(t, linear_.modulus());
}

AffineMap AffineMap::identity(int d, std::int64_t n) {
  return AffineMap(ModMatrix::identity(d, n), std::vector<Residue>(d, 0));
}

AffineMap AffineMap::translation_by(std::vector<std::int64_t> t, std::int64_t n) {
  const int d = static_cast<int>(t.size());
  return AffineMap(ModMatrix::identity(d, n), std::move(t));
}

GnElement apply_affine(const AffineMap& m, const GnElement& x) {
  if (m.dim() != x.dim() || m.modulus() != x.modulus())
    throw DimensionError("affine map and element dimensions differ");
  std::vector<Residue> y = m.linear().apply(x.coords());
  for (int j = 0; j < m.dim(); ++j) y[j] += m.translation()[j];
  return GnElement(std::move(y), m.modulus());
}

AffineMap compose(const AffineMap& m1, const AffineMap& m2) {
  if (m1.dim() != m2.dim() || m1.modulus() != m2.modulus())
    throw DimensionError("cannot compose affine maps of different shapes");
  std::vector<Residue> t = m1.linear().apply(m2.translation());
  for (int j = 0; j < m1.dim(); ++j) t[j] += m1.translation()[j];
  return AffineMap(m1.linear() * m2.linear(), std::move(t));
}

AffineMap inverse(const AffineMap& m) {
  ModMatrix inv = inverse(m.linear());
  std::vector<Residue> t = inv.apply(m.translation());
  for (auto& v : t) v = -v;
  return AffineMap(std::move(inv), std::move(t));
}

AffineMap power(const AffineMap& m, std::int64_t e) {
  AffineMap base = e < 0 ? inverse(m) : m;
  std::uint64_t k = e < 0 ? static_cast<std::uint64_t>(-(e + 1)) + 1 : static_cast<std::uint64_t>(e);
  AffineMap result = AffineMap::identity(m.dim(), m.modulus());
  while (k) {
    if (k & 1) result = compose(result, base);
    base = compose(base, base);
    k >>= 1;
  }
  return result;
}

StateIndex encode(const GnElement& x) {
  std::uint64_t idx = 0;
  for (int j = x.dim() - 1; j >= 0; --j)
    idx = idx * static_cast<std::uint64_t>(x.modulus()) + static_cast<std::uint64_t>(x[j]);
  return {idx};
}

GnElement decode(StateIndex i, const SpaceParams& p) {
  const std::uint64_t total = p.state_count();
  if (total != 0 && i.value >= total)
    throw RangeError("state index " + std::to_string(i.value) + " out of range [0, " +
                     std::to_string(total) + ")");
  std::vector<std::int64_t> coords(p.dim());
  std::uint64_t v = i.value;
  const auto n = static_cast<std::uint64_t>(p.n);
  for (int j = 0; j < p.dim(); ++j) {
    coords[j] = static_cast<std::int64_t>(v % n);
    v /= n;
  }
  return GnElement(std::move(coords), p.n);
}

}  // namespace gnorb
