#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gnorb/errors.hpp"
#include "gnorb/euler_cocycle.hpp"

using namespace gnorb;

namespace {

constexpr double kPi = std::numbers::pi;

double line_angle(double x, double y) {
  double t = std::atan2(y, x);
  t = std::fmod(t, kPi);
  return t < 0 ? t + kPi : t;
}

// Angle of the expanding eigendirection, computed from the characteristic
// polynomial.
double attracting_angle(const Mat2& m) {
  const double tr = m.trace();
  const double lam = (tr + (tr > 0 ? 1 : -1) * std::sqrt(tr * tr - 4)) / 2;
  if (std::abs(m.b) > std::abs(m.c)) return line_angle(m.b, lam - m.a);
  return line_angle(lam - m.d, m.c);
}

double projective_angle(const Mat2& m, double t) {
  return line_angle(m.a * std::cos(t) + m.b * std::sin(t), m.c * std::cos(t) + m.d * std::sin(t));
}

// Continue the lift from (t0, v0) to t1. The projective map is increasing
// and moves any interval shorter than pi by less than pi, so the step is
// the representative of the angle change in [0, pi) (or (-pi, 0] going
// backwards).
double continue_lift(const Mat2& m, double t0, double v0, double t1) {
  const double jump = projective_angle(m, t1) - v0;
  double step = jump - kPi * std::floor(jump / kPi);
  if (step > kPi - 1e-9) step -= kPi;  // rounding just below a zero move
  if (t1 < t0 && step > 0) step -= kPi;
  return v0 + step;
}

// Independent sigma0: the lift fixing the attracting direction, continued
// to theta along a subdivided path.
double oracle_sigma0(const Mat2& m, double theta) {
  const double phi = attracting_angle(m);
  const int steps = 64;
  double value = phi;
  for (int k = 1; k <= steps; ++k)
    value = continue_lift(m, phi + (theta - phi) * (k - 1) / steps, value, phi + (theta - phi) * k / steps);
  return value;
}

int oracle_cocycle(const Mat2& g1, const Mat2& g2) {
  const Mat2 prod = g1 * g2;
  const double theta = 0.3;
  const double lhs = prod.distance_to_identity() < 1e-9 ? theta : oracle_sigma0(prod, theta);
  const double rhs = oracle_sigma0(g1, oracle_sigma0(g2, theta));
  return static_cast<int>(std::lround((lhs - rhs) / kPi));
}

SurfaceWord w(std::string_view s) { return parse_surface_word(s); }

}  // namespace

TEST_CASE("standard group construction") {
  const FuchsianGroup g2 = standard_group(2);
  CHECK(g2.relator_residual < 1e-9);
  const FuchsianGroup g3 = standard_group(3);
  CHECK(g3.relator_residual < 1e-6);
  for (const auto* grp : {&g2, &g3})
    for (int i = 0; i < grp->genus; ++i) {
      CHECK(std::abs(grp->a[i].det() - 1) < 1e-12);
      CHECK(std::abs(grp->b[i].det() - 1) < 1e-12);
      CHECK(std::abs(grp->a[i].trace()) > 2);
    }
  CHECK_THROWS_AS(standard_group(1), ParamError);
  CHECK_NOTHROW(standard_group(4));
}

TEST_CASE("surface word parsing") {
  const SurfaceWord x = w("a1 b2^-1 a1^3");
  REQUIRE(x.letters.size() == 3);
  CHECK(x.letters[1] == SurfaceLetter{true, 2, -1});
  CHECK(x.length() == 5);
  CHECK(format_surface_word(x) == "a1 b2^-1 a1^3");
  CHECK(w("").letters.empty());
  CHECK_THROWS_AS(w("c1"), ParseError);
  CHECK_THROWS_AS(w("a0"), ParseError);
  CHECK_THROWS_AS(w("a1b1"), ParseError);
  CHECK((x * x.inverse()).letters.empty());
}

TEST_CASE("lifts commute with the deck shift") {
  const FuchsianGroup grp = standard_group(2);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-10, 10);
  for (const auto& word : {"a1", "b1 a2^-1", "a1 b1 a2 b2^-1 a1", ""}) {
    const LiftedCircleMap f(evaluate(grp, w(word)), 3);
    for (int k = 0; k < 50; ++k) {
      const double t = u(rng);
      CHECK(std::abs(f(t + kPi) - f(t) - kPi) < 1e-12);
      CHECK(std::abs(LiftedCircleMap::deck_shift()(t) - t - kPi) < 1e-12);
    }
  }
}

TEST_CASE("sigma0 fixes the axis endpoints") {
  const FuchsianGroup grp = standard_group(2);
  for (const auto& word : {"a1", "b1", "a2^-1", "a1 b2", "b1 a1 b1^-1 a2"}) {
    const Mat2 m = evaluate(grp, w(word));
    const LiftedCircleMap s = sigma0_lift(m);
    const double phi = attracting_angle(m);
    CHECK(std::abs(s(phi) - phi) < 1e-9);
    CHECK(std::abs(s(phi + 5 * kPi) - phi - 5 * kPi) < 1e-9);
    CHECK(std::abs(translation_number(s).value) < 1e-9);
    for (double t : {0.0, 0.7, 2.0, -4.0}) CHECK(std::abs(s(t) - oracle_sigma0(m, t)) < 1e-7);
  }
}

TEST_CASE("sigma0 rejects non-hyperbolic input") {
  CHECK_THROWS_AS(sigma0_lift(Mat2{}), IllConditioned);
  CHECK_THROWS_AS(sigma0_lift(Mat2{0, 1, -1, 0}), IllConditioned);  // elliptic
  CHECK_THROWS_AS(sigma0_lift(Mat2{1, 1, 0, 1}), IllConditioned);   // parabolic
  CHECK_NOTHROW(sigma0_lift(Mat2{-2, 0, 0, -0.5}));
}

TEST_CASE("sigma0 of inverse and of conjugates") {
  const FuchsianGroup grp = standard_group(2);
  std::mt19937_64 rng(2);
  const char* words[] = {"a1", "b2", "a1 b1", "a2 b1^-1 a1", "b2 b2 a1^-1"};
  for (const char* s : words) {
    const SurfaceWord x = w(s);
    const LiftedCircleMap f = sigma0_lift(grp, x);
    const LiftedCircleMap finv = sigma0_lift(grp, x.inverse());
    const LiftedCircleMap expected = f.inverse();
    for (double t : {0.1, 1.3, -2.2}) CHECK(std::abs(finv(t) - expected(t)) < 1e-9);
    for (const char* h : words) {
      const SurfaceWord y = w(h);
      const LiftedCircleMap conj = sigma0_lift(grp, y * x * y.inverse());
      const LiftedCircleMap hy = sigma0_lift(grp, y);
      const LiftedCircleMap rhs = hy.compose(f).compose(hy.inverse());
      for (double t : {0.1, 1.3, -2.2}) CHECK(std::abs(conj(t) - rhs(t)) < 1e-8);
    }
  }
}

TEST_CASE("composition and inverse of lifts") {
  const FuchsianGroup grp = standard_group(3);
  const LiftedCircleMap f(evaluate(grp, w("a1 b3")), 2);
  const LiftedCircleMap g(evaluate(grp, w("b2^-1")), -1);
  const LiftedCircleMap fg = f.compose(g);
  for (double t : {0.0, 0.5, 3.0}) {
    CHECK(std::abs(fg(t) - f(g(t))) < 1e-10);
    CHECK(std::abs(f.inverse()(f(t)) - t) < 1e-10);
  }
}

TEST_CASE("cocycle examples") {
  const FuchsianGroup grp = standard_group(2);
  for (const char* s : {"a1", "b1 a2", "a2^-1 b1 b1"}) {
    const CocycleValue c = cocycle(grp, w(s), w(s).inverse());
    CHECK(c.value == 0);
    CHECK(c.residual < 1e-6);
  }
  CHECK(cocycle(grp, w("a1"), w("b1")).value == 0);
  CHECK(axes_cross(evaluate(grp, w("a1")), evaluate(grp, w("b1"))) == std::optional<bool>(true));
  const CocycleValue pants = cocycle(grp, w("a1"), conjugated_a(2).inverse());
  CHECK(pants.value == 1);
  CHECK(pants.residual < 1e-6);
  const FuchsianGroup grp3 = standard_group(3);
  CHECK(cocycle(grp3, w("a1"), conjugated_a(2).inverse()).value == 1);
  CHECK(cocycle(grp3, w("a2"), conjugated_a(3).inverse()).value == 1);
}

TEST_CASE("cocycle agrees with the continuation oracle") {
  const FuchsianGroup grp = standard_group(2);
  const auto samples = sample_cocycles(grp, 60, 4, 99);
  for (const auto& s : samples)
    CHECK(s.c == oracle_cocycle(evaluate(grp, s.w1), evaluate(grp, s.w2)));
}

TEST_CASE("cocycle range and crossing axes") {
  const FuchsianGroup grp = standard_group(2);
  const auto samples = sample_cocycles(grp, 300, 6, 7);
  int crossing = 0;
  for (const auto& s : samples) {
    CHECK(s.residual < 1e-6);
    CHECK(s.c >= -1);
    CHECK(s.c <= 1);
    if (s.axes_cross == std::optional<bool>(true)) {
      ++crossing;
      CHECK(s.c == 0);
    }
  }
  CHECK(crossing > 10);
}

TEST_CASE("sampling is deterministic per seed") {
  const FuchsianGroup grp = standard_group(2);
  const auto a = sample_cocycles(grp, 20, 6, 5);
  const auto b = sample_cocycles(grp, 20, 6, 5);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(format_surface_word(a[k].w1) == format_surface_word(b[k].w1));
    CHECK(a[k].c == b[k].c);
  }
}

TEST_CASE("cocycle identity on random triples") {
  const FuchsianGroup grp = standard_group(2);
  std::mt19937_64 rng(13);
  auto random_word = [&] {
    SurfaceWord out;
    const int len = 1 + static_cast<int>(rng() % 4);
    while (static_cast<int>(out.letters.size()) < len) {
      const SurfaceWord step{{SurfaceLetter{rng() % 2 == 1, 1 + static_cast<int>(rng() % 2), rng() % 2 ? 1 : -1}}};
      const SurfaceWord next = out * step;
      if (next.letters.size() > out.letters.size()) out = next;
    }
    return out;
  };
  int checked = 0;
  while (checked < 100) {
    const SurfaceWord x = random_word(), y = random_word(), z = random_word();
    if ((x * y).letters.empty() || (y * z).letters.empty()) continue;
    const int lhs = cocycle(grp, x, y).value + cocycle(grp, x * y, z).value;
    const int rhs = cocycle(grp, y, z).value + cocycle(grp, x, y * z).value;
    CHECK(lhs == rhs);
    ++checked;
  }
}

TEST_CASE("relator Euler number") {
  CHECK(relator_euler_number(standard_group(2)) == 2);
  CHECK(relator_euler_number(standard_group(3)) == 4);
  CHECK(relator_euler_number(reverse_orientation(standard_group(2))) == -2);
  CHECK(relator_euler_number(reverse_orientation(standard_group(3))) == -4);
  const FuchsianGroup rev = reverse_orientation(standard_group(2));
  CHECK(cocycle(rev, w("a1"), conjugated_a(2).inverse()).value == -1);
}

TEST_CASE("nu consistency") {
  const FuchsianGroup g2 = standard_group(2);
  const auto p22 = SpaceParams::make(2, 2);
  for (std::uint64_t i = 0; i < p22.state_count(); ++i) {
    const auto r = nu_consistency(g2, decode(StateIndex{i}, p22), p22);
    CHECK(r.pass);
    CHECK(r.cocycle_sum == 2);
  }
  const FuchsianGroup g4 = standard_group(4);
  const auto p43 = SpaceParams::make(4, 3);
  const auto r43 = nu_consistency(g4, make_element(p43, {1, 2, 0, 1, 2, 2, 0, 1}), p43);
  CHECK(r43.pass);
  CHECK(r43.cocycle_sum == 6);
  const auto p24 = SpaceParams::make(2, 4, false);
  const auto bad = nu_consistency(g2, GnElement::zero(p24), p24);
  CHECK_FALSE(bad.pass);
  CHECK(bad.cocycle_sum == 2);
  CHECK(bad.relator_value == 2);
}
