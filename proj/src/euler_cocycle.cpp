#include "gnorb/euler_cocycle.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <random>

#include "gnorb/errors.hpp"

namespace gnorb {

namespace {

constexpr double kPi = std::numbers::pi;
// |trace| must exceed 2 by this much to count as hyperbolic.
constexpr double kHyperbolicMargin = 1e-9;
constexpr double kIdentityTolerance = 1e-9;

Mat2 rotation_half(double phi) {
  const double c = std::cos(phi / 2), s = std::sin(phi / 2);
  return {c, s, -s, c};
}

Mat2 dilation(double t) { return {std::exp(t / 2), 0, 0, std::exp(-t / 2)}; }

Mat2 normalize_sign(const Mat2& m) { return m.trace() < 0 ? -m : m; }

double max_abs_diff(const Mat2& x, const Mat2& y) {
  return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c - y.c), std::abs(x.d - y.d)});
}

bool near_identity(const Mat2& m) { return m.distance_to_identity() < kIdentityTolerance; }

void require_hyperbolic(const Mat2& m, const char* what) {
  if (near_identity(m)) throw IllConditioned(std::string(what) + ": element is (numerically) the identity");
  if (std::abs(m.trace()) <= 2 + kHyperbolicMargin)
    throw IllConditioned(std::string(what) + ": element is not hyperbolic (|trace| = " +
                         std::to_string(std::abs(m.trace())) + ")");
}

Mat2 letter_matrix(const FuchsianGroup& group, const SurfaceLetter& l) {
  if (l.index < 1 || l.index > group.genus)
    throw RangeError("surface letter index " + std::to_string(l.index) + " outside 1.." +
                     std::to_string(group.genus));
  const Mat2 base = l.is_b ? group.b[l.index - 1] : group.a[l.index - 1];
  const Mat2 step = l.exponent < 0 ? base.inverse() : base;
  Mat2 out;
  for (int k = 0; k < std::abs(l.exponent); ++k) out = out * step;
  return out;
}

SurfaceWord relator_word(int g) {
  SurfaceWord w;
  for (int i = 1; i <= g; ++i) {
    w.letters.push_back({false, i, 1});
    w.letters.push_back({true, i, 1});
    w.letters.push_back({false, i, -1});
    w.letters.push_back({true, i, -1});
  }
  return w;
}

// Boundary fixed points (line angles in [0, pi)) of a hyperbolic matrix.
std::array<double, 2> fixed_angles(const Mat2& m) {
  const double tr = m.trace();
  const double disc = std::sqrt(tr * tr - 4);
  std::array<double, 2> out{};
  for (int k = 0; k < 2; ++k) {
    const double lambda = (tr + (k == 0 ? disc : -disc)) / 2;
    // (M - lambda) v = 0; use the larger row for stability.
    double x, y;
    if (std::abs(m.b) + std::abs(m.a - lambda) >= std::abs(m.c) + std::abs(m.d - lambda)) {
      x = m.b;
      y = lambda - m.a;
    } else {
      x = lambda - m.d;
      y = m.c;
    }
    double t = std::atan2(y, x);
    t = std::fmod(t, kPi);
    if (t < 0) t += kPi;
    out[k] = t;
  }
  return out;
}

}  // namespace

double Mat2::distance_to_identity() const {
  const Mat2 id{};
  return std::min(max_abs_diff(*this, id), max_abs_diff(*this, -id));
}

FuchsianGroup standard_group(int g, double tolerance) {
  if (g < 2) throw ParamError("standard_group needs genus >= 2, got " + std::to_string(g));
  if (!(tolerance > 0)) throw ParamError("tolerance must be positive");
  const int sides = 4 * g;
  const double d = std::acosh(1 / std::tan(kPi / sides));
  auto side_angle = [&](int k) { return 2 * kPi * k / sides; };
  // Isometry carrying side j of the regular polygon onto side k, reversed.
  auto pairing = [&](int j, int k) {
    return rotation_half(side_angle(k)) * dilation(2 * d) * rotation_half(kPi - side_angle(j));
  };

  FuchsianGroup group;
  group.genus = g;
  group.tolerance = tolerance;
  for (int j = 0; j < g; ++j) {
    group.a.push_back(pairing(4 * j + 2, 4 * j));
    group.b.push_back(pairing(4 * j + 1, 4 * j + 3));
  }
  group.relator_residual = relator_product(group).distance_to_identity();
  if (group.relator_residual > tolerance)
    throw IllConditioned("relator residual " + std::to_string(group.relator_residual) +
                         " exceeds tolerance");

  // Every freely reduced word of length <= 3 must be hyperbolic.
  std::vector<Mat2> letters;
  for (int j = 0; j < g; ++j)
    for (const Mat2& m : {group.a[j], group.b[j], group.a[j].inverse(), group.b[j].inverse()})
      letters.push_back(m);
  const int L = static_cast<int>(letters.size());
  auto inverse_of = [](int x) { return x ^ 2; };  // a, b, a^-1, b^-1 within each group of four
  std::vector<std::pair<Mat2, int>> layer;
  for (int x = 0; x < L; ++x) layer.push_back({letters[x], x});
  for (int len = 1; len <= 3; ++len) {
    std::vector<std::pair<Mat2, int>> next;
    for (const auto& [m, last] : layer) {
      if (std::abs(m.trace()) <= 2 + kHyperbolicMargin)
        throw IllConditioned("construction produced a non-hyperbolic short word");
      if (len == 3) continue;
      for (int x = 0; x < L; ++x)
        if (x != inverse_of(last)) next.push_back({m * letters[x], x});
    }
    layer = std::move(next);
  }

  if (relator_euler_number(group) < 0) group = reverse_orientation(group);
  return group;
}

FuchsianGroup reverse_orientation(const FuchsianGroup& group) {
  FuchsianGroup out = group;
  auto flip = [](const Mat2& m) { return Mat2{m.a, -m.b, -m.c, m.d}; };
  for (auto& m : out.a) m = flip(m);
  for (auto& m : out.b) m = flip(m);
  return out;
}

Mat2 relator_product(const FuchsianGroup& group) { return evaluate(group, relator_word(group.genus)); }

SurfaceWord SurfaceWord::inverse() const {
  SurfaceWord out;
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) out.letters.push_back({it->is_b, it->index, -it->exponent});
  return out;
}

SurfaceWord SurfaceWord::operator*(const SurfaceWord& o) const {
  SurfaceWord out = *this;
  for (const auto& l : o.letters) {
    if (!out.letters.empty() && out.letters.back().is_b == l.is_b && out.letters.back().index == l.index) {
      out.letters.back().exponent += l.exponent;
      if (out.letters.back().exponent == 0) out.letters.pop_back();
    } else {
      out.letters.push_back(l);
    }
  }
  return out;
}

std::size_t SurfaceWord::length() const {
  std::size_t n = 0;
  for (const auto& l : letters) n += static_cast<std::size_t>(std::abs(l.exponent));
  return n;
}

SurfaceWord parse_surface_word(std::string_view text) {
  SurfaceWord w;
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto read_int = [&](bool allow_sign) -> int {
    const std::size_t start = pos;
    bool neg = false;
    if (allow_sign && pos < text.size() && (text[pos] == '-' || text[pos] == '+')) neg = text[pos++] == '-';
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      throw ParseError("expected a number", start);
    long v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + (text[pos++] - '0');
      if (v > 1'000'000) throw ParseError("number too large", start);
    }
    return static_cast<int>(neg ? -v : v);
  };
  skip_space();
  while (pos < text.size()) {
    const char ch = text[pos];
    if (ch != 'a' && ch != 'b') throw ParseError(std::string("unexpected character '") + ch + "'", pos);
    ++pos;
    SurfaceLetter l;
    l.is_b = ch == 'b';
    const std::size_t idx_pos = pos;
    l.index = read_int(false);
    if (l.index < 1) throw ParseError("letter index must be positive", idx_pos);
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      const std::size_t exp_pos = pos;
      l.exponent = read_int(true);
      if (l.exponent == 0) throw ParseError("exponent must be nonzero", exp_pos);
    }
    if (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])))
      throw ParseError("expected whitespace between letters", pos);
    w.letters.push_back(l);
    skip_space();
  }
  return w;
}

std::string format_surface_word(const SurfaceWord& w) {
  std::string out;
  for (const auto& l : w.letters) {
    if (!out.empty()) out += ' ';
    out += l.is_b ? 'b' : 'a';
    out += std::to_string(l.index);
    if (l.exponent != 1) out += "^" + std::to_string(l.exponent);
  }
  return out;
}

Mat2 evaluate(const FuchsianGroup& group, const SurfaceWord& w) {
  Mat2 out;
  for (const auto& l : w.letters) out = out * letter_matrix(group, l);
  return out;
}

LiftedCircleMap::LiftedCircleMap(const Mat2& m, std::int64_t shift) : m_(normalize_sign(m)), shift_(shift) {}

double LiftedCircleMap::operator()(double theta) const {
  const double c = std::cos(theta), s = std::sin(theta);
  const double x = m_.a * c + m_.b * s;
  const double y = m_.c * c + m_.d * s;
  return theta + std::atan2(c * y - s * x, c * x + s * y) + static_cast<double>(shift_) * kPi;
}

LiftedCircleMap LiftedCircleMap::compose(const LiftedCircleMap& other, double* residual) const {
  LiftedCircleMap out(m_ * other.m_, 0);
  const double raw = ((*this)(other(0.0)) - out(0.0)) / kPi;
  const double j = std::round(raw);
  if (residual) *residual = std::abs(raw - j);
  out.shift_ = static_cast<std::int64_t>(j);
  return out;
}

LiftedCircleMap LiftedCircleMap::inverse() const {
  LiftedCircleMap base(m_.inverse(), 0);
  const LiftedCircleMap probe = base.compose(LiftedCircleMap(m_, 0));
  // base o F_M = delta^j, so the inverse of F_M delta^shift is base delta^{-j-shift}.
  return base.shifted(-probe.shift() - shift_);
}

TranslationNumber translation_number(const LiftedCircleMap& f, int iterations) {
  if (iterations < 1) throw ParamError("iterations must be positive");
  double x = 0;
  for (int k = 0; k < iterations; ++k) x = f(x);
  double y = x;
  for (int k = 0; k < iterations; ++k) y = f(y);
  TranslationNumber t;
  t.value = (y - x) / (iterations * kPi);
  t.residual = std::abs(t.value - std::round(t.value));
  return t;
}

LiftedCircleMap sigma0_lift(const Mat2& m, double tolerance) {
  require_hyperbolic(m, "sigma0");
  const LiftedCircleMap base(m, 0);
  const TranslationNumber t = translation_number(base);
  if (t.residual > tolerance)
    throw IllConditioned("translation number " + std::to_string(t.value) + " is not within tolerance of an integer");
  return base.shifted(-static_cast<std::int64_t>(std::round(t.value)));
}

LiftedCircleMap sigma0_lift(const FuchsianGroup& group, const SurfaceWord& w) {
  return sigma0_lift(evaluate(group, w), group.tolerance);
}

CocycleValue cocycle(const Mat2& g1, const Mat2& g2, double tolerance) {
  const LiftedCircleMap s1 = sigma0_lift(g1, tolerance);
  const LiftedCircleMap s2 = sigma0_lift(g2, tolerance);
  const Mat2 prod = g1 * g2;
  const LiftedCircleMap s12 = near_identity(prod) ? LiftedCircleMap(Mat2{}, 0) : sigma0_lift(prod, tolerance);
  double residual = 0;
  const LiftedCircleMap composed = s1.compose(s2, &residual);
  // Both are lifts of the same projective map; compare them at one point.
  const double raw = (s12(0.0) - composed(0.0)) / kPi;
  CocycleValue out;
  out.value = static_cast<int>(std::round(raw));
  out.residual = std::max(residual, std::abs(raw - out.value));
  if (out.residual > tolerance)
    throw IllConditioned("cocycle residual " + std::to_string(out.residual) + " exceeds tolerance");
  return out;
}

CocycleValue cocycle(const FuchsianGroup& group, const SurfaceWord& w1, const SurfaceWord& w2) {
  return cocycle(evaluate(group, w1), evaluate(group, w2), group.tolerance);
}

std::optional<bool> axes_cross(const Mat2& g1, const Mat2& g2) {
  require_hyperbolic(g1, "axes_cross");
  require_hyperbolic(g2, "axes_cross");
  auto [p, q] = fixed_angles(g1);
  const auto [r, s] = fixed_angles(g2);
  if (p > q) std::swap(p, q);
  constexpr double eps = 1e-9;
  for (double u : {r, s})
    for (double v : {p, q}) {
      const double gap = std::abs(u - v);
      if (std::min(gap, kPi - gap) < eps) return std::nullopt;
    }
  const bool r_in = p < r && r < q;
  const bool s_in = p < s && s < q;
  return r_in != s_in;
}

SurfaceWord conjugated_a(int i_plus_1) {
  SurfaceWord w;
  w.letters = {{true, i_plus_1, 1}, {false, i_plus_1, 1}, {true, i_plus_1, -1}};
  return w;
}

namespace {

struct RelatorWalk {
  std::int64_t cocycle_sum = 0;
  std::vector<int> values;
};

RelatorWalk walk_relator(const FuchsianGroup& group) {
  const SurfaceWord rel = relator_word(group.genus);
  RelatorWalk out;
  Mat2 prefix = letter_matrix(group, rel.letters.front());
  LiftedCircleMap product = sigma0_lift(prefix, group.tolerance);
  for (std::size_t k = 1; k < rel.letters.size(); ++k) {
    const Mat2 letter = letter_matrix(group, rel.letters[k]);
    const CocycleValue c = cocycle(prefix, letter, group.tolerance);
    out.values.push_back(c.value);
    out.cocycle_sum += c.value;
    prefix = prefix * letter;
    double residual = 0;
    product = product.compose(sigma0_lift(letter, group.tolerance), &residual);
    if (residual > group.tolerance) throw IllConditioned("relator lift composition is ill-conditioned");
  }
  // sigma0(relator) = 1 = delta^{sum c} * prod sigma0(letters).
  if (product.shift() != -out.cocycle_sum || product.matrix().distance_to_identity() > group.tolerance)
    throw IllConditioned("relator cocycle sum disagrees with the lifted product");
  return out;
}

}  // namespace

int relator_euler_number(const FuchsianGroup& group) {
  return static_cast<int>(walk_relator(group).cocycle_sum);
}

NuConsistency nu_consistency(const FuchsianGroup& group, const GnElement& x, const SpaceParams& p) {
  if (p.g != group.genus) throw DimensionError("group genus differs from the space genus");
  if (x.dim() != p.dim() || x.modulus() != p.n) throw DimensionError("element does not belong to this space");
  const SurfaceWord rel = relator_word(group.genus);
  const RelatorWalk walk = walk_relator(group);
  auto nu_of = [&](const SurfaceLetter& l) {
    const std::int64_t base = l.is_b ? x.beta(l.index) : x.alpha(l.index);
    return mod_reduce(base * l.exponent, p.n);
  };
  std::int64_t nu = nu_of(rel.letters.front());
  for (std::size_t k = 1; k < rel.letters.size(); ++k)
    nu = mod_reduce(nu + nu_of(rel.letters[k]) - walk.values[k - 1], p.n);
  NuConsistency out;
  out.cocycle_sum = walk.cocycle_sum;
  out.relator_value = nu;
  out.pass = nu == 0;
  return out;
}

std::vector<CocycleSample> sample_cocycles(const FuchsianGroup& group, int count, int max_length,
                                           std::uint64_t seed) {
  if (count < 0 || max_length < 1) throw ParamError("sample count must be >= 0 and max length >= 1");
  std::mt19937_64 rng(seed);
  const int g = group.genus;
  std::uniform_int_distribution<int> len_dist(1, max_length);
  std::uniform_int_distribution<int> letter_dist(0, 4 * g - 1);
  auto letter_of = [](int code) {
    return SurfaceLetter{(code & 1) != 0, code / 4 + 1, (code & 2) ? -1 : 1};
  };
  auto random_word = [&] {
    SurfaceWord w;
    const int len = len_dist(rng);
    int last = -1;
    while (static_cast<int>(w.length()) < len) {
      const int code = letter_dist(rng);
      if (last >= 0 && code == (last ^ 2)) continue;
      w = w * SurfaceWord{{letter_of(code)}};
      last = code;
    }
    return w;
  };

  std::vector<CocycleSample> out;
  out.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    CocycleSample s;
    s.w1 = random_word();
    s.w2 = random_word();
    const Mat2 m1 = evaluate(group, s.w1), m2 = evaluate(group, s.w2);
    // Skip pairs whose product is trivial in the group; c is 0 there by definition.
    if ((s.w1 * s.w2).letters.empty()) continue;
    const CocycleValue c = cocycle(m1, m2, group.tolerance);
    s.c = c.value;
    s.residual = c.residual;
    s.axes_cross = axes_cross(m1, m2);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace gnorb
