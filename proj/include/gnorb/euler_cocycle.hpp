#pragma once

// Numerical Euler cocycle of a closed surface group realized in PSL(2, R).
//
// The boundary circle is modelled as lines through the origin of R^2,
// parameterized by the angle theta in R / pi Z. Lifts of circle maps to the
// line commute with the deck shift delta: theta -> theta + pi. sigma0 picks
// the lift of a hyperbolic element that has fixed points, and
//
//   sigma0(g1 g2) = delta^{c(g1, g2)} sigma0(g1) sigma0(g2).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gnorb/gn_space.hpp"

namespace gnorb {

struct Mat2 {
  double a = 1, b = 0, c = 0, d = 1;

  static Mat2 identity() { return {}; }
  double trace() const { return a + d; }
  double det() const { return a * d - b * c; }
  // Inverse of a determinant-one matrix.
  Mat2 inverse() const { return {d, -b, -c, a}; }
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Mat2 operator-() const { return {-a, -b, -c, -d}; }
  // Max-norm distance to +I or -I, whichever is closer.
  double distance_to_identity() const;
};

inline constexpr double kDefaultTolerance = 1e-6;

struct FuchsianGroup {
  int genus = 2;
  std::vector<Mat2> a;  // a_1..a_g (index 0-based)
  std::vector<Mat2> b;
  double tolerance = kDefaultTolerance;
  double relator_residual = 0;
};

// Regular 4g-gon with all vertex angles pi/(2g), sides glued in the pattern
// a_1 b_1 a_1^-1 b_1^-1 ... ; orientation chosen so the relator Euler number
// is +(2g-2). Throws ParamError for g < 2 and IllConditioned when the
// relator or the hyperbolicity checks miss the tolerance.
FuchsianGroup standard_group(int g, double tolerance = kDefaultTolerance);

// Conjugate every generator by diag(1, -1).
FuchsianGroup reverse_orientation(const FuchsianGroup& group);

// Product [a_1, b_1] ... [a_g, b_g].
Mat2 relator_product(const FuchsianGroup& group);

struct SurfaceLetter {
  bool is_b = false;
  int index = 1;  // 1-based
  int exponent = 1;
  friend bool operator==(const SurfaceLetter&, const SurfaceLetter&) = default;
};

// Group word; evaluates to the product of its letters in written order.
struct SurfaceWord {
  std::vector<SurfaceLetter> letters;
  SurfaceWord inverse() const;
  SurfaceWord operator*(const SurfaceWord& o) const;
  std::size_t length() const;
};

// "a1 b2^-1 a1"; the empty string is the identity.
SurfaceWord parse_surface_word(std::string_view text);
std::string format_surface_word(const SurfaceWord& w);

Mat2 evaluate(const FuchsianGroup& group, const SurfaceWord& w);

// A lift of a projective circle map to the line:
//   f(theta) = theta + angle(v(theta), M v(theta)) + shift * pi,
// with v(theta) = (cos theta, sin theta) and M scaled so trace(M) >= 0, so
// the angle term is continuous and pi-periodic.
class LiftedCircleMap {
 public:
  LiftedCircleMap() = default;
  // The base lift (shift 0) of the projective class of m.
  explicit LiftedCircleMap(const Mat2& m, std::int64_t shift = 0);

  static LiftedCircleMap deck_shift(std::int64_t k = 1) { return LiftedCircleMap(Mat2{}, k); }

  const Mat2& matrix() const { return m_; }
  std::int64_t shift() const { return shift_; }
  double operator()(double theta) const;

  // (this o other)(theta) = this(other(theta)). The shift of the result is
  // recovered by rounding; the rounding residual is written to *residual.
  LiftedCircleMap compose(const LiftedCircleMap& other, double* residual = nullptr) const;
  LiftedCircleMap inverse() const;
  LiftedCircleMap shifted(std::int64_t k) const { return LiftedCircleMap(m_, shift_ + k); }

 private:
  Mat2 m_;
  std::int64_t shift_ = 0;
};

struct TranslationNumber {
  double value = 0;  // in units of pi
  double residual = 0;  // distance to the nearest integer
};

// Poincare average over `iterations` steps, refined by differencing the
// second block of iterations against the first.
TranslationNumber translation_number(const LiftedCircleMap& f, int iterations = 64);

// Fixed-point lift of a hyperbolic element. Throws IllConditioned for
// elliptic, parabolic or near-identity elements, or when the translation
// number misses an integer by more than `tolerance`.
LiftedCircleMap sigma0_lift(const Mat2& m, double tolerance = kDefaultTolerance);
LiftedCircleMap sigma0_lift(const FuchsianGroup& group, const SurfaceWord& w);

struct CocycleValue {
  int value = 0;
  double residual = 0;
};

// c(g1, g2). The product may be the identity (sigma0(1) = 1); g1 and g2
// must be hyperbolic.
CocycleValue cocycle(const Mat2& g1, const Mat2& g2, double tolerance = kDefaultTolerance);
CocycleValue cocycle(const FuchsianGroup& group, const SurfaceWord& w1, const SurfaceWord& w2);

// True when the axes of two hyperbolic elements cross transversely (their
// boundary fixed points interleave); nullopt when fixed points are too
// close to decide.
std::optional<bool> axes_cross(const Mat2& g1, const Mat2& g2);

// The loop a'_{i+1} = b_{i+1} a_{i+1} b_{i+1}^-1 (1-based i, 1 <= i < g),
// so that a_i a'_{i+1}^-1 = a_i b_{i+1} a_{i+1}^-1 b_{i+1}^-1.
SurfaceWord conjugated_a(int i_plus_1);

// Sum of c(prefix_{k-1}, letter_k) over the relator word, cross-checked
// against the direct product of the letters' sigma0 lifts.
int relator_euler_number(const FuchsianGroup& group);

struct NuConsistency {
  std::int64_t cocycle_sum = 0;     // sum of c along the relator
  std::int64_t relator_value = 0;   // extended nu of the relator, mod n
  bool pass = false;
};

// Extends nu from the generator values in x along the relator using
// nu(g1 g2) = nu(g1) + nu(g2) - c(g1, g2); consistent iff the result is 0.
NuConsistency nu_consistency(const FuchsianGroup& group, const GnElement& x, const SpaceParams& p);

struct CocycleSample {
  SurfaceWord w1;
  SurfaceWord w2;
  int c = 0;
  double residual = 0;
  std::optional<bool> axes_cross;
};

// Seeded random freely reduced words of length 1..max_length.
std::vector<CocycleSample> sample_cocycles(const FuchsianGroup& group, int count, int max_length,
                                           std::uint64_t seed);

}  // namespace gnorb
