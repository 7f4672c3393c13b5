#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gnorb/invariants.hpp"
#include "gnorb/normalizer.hpp"

using namespace gnorb;

namespace {

GnElement last_beta(const SpaceParams& p, std::int64_t beta) {
  std::vector<std::int64_t> v(p.dim(), 0);
  v.back() = beta;
  return GnElement(v, p.n);
}

}  // namespace

TEST_CASE("normalize examples") {
  const auto p22 = SpaceParams::make(2, 2);
  const auto zero = normalize(GnElement::zero(p22), p22);
  CHECK(zero.form.representative == GnElement::zero(p22));
  CHECK(replays(zero.certificate, p22));

  const auto r = normalize(make_element(p22, {0, 1, 0, 1}), p22);
  CHECK(r.form.representative == GnElement::zero(p22));
  CHECK(r.form.parity_class == 0);
  CHECK(replays(r.certificate, p22));

  const auto one = normalize(make_element(p22, {0, 0, 0, 1}), p22);
  CHECK(one.form.parity_class == 1);
  CHECK(one.form.representative == make_element(p22, {0, 0, 0, 1}));

  const auto p43 = SpaceParams::make(4, 3);
  std::mt19937_64 rng(41);
  for (int k = 0; k < 200; ++k) {
    const GnElement x = decode(StateIndex{rng() % p43.state_count()}, p43);
    const auto res = normalize(x, p43);
    CHECK(res.form.representative == GnElement::zero(p43));
    CHECK(replays(res.certificate, p43));
  }
}

TEST_CASE("n = 1 is the one-point space") {
  const auto p = SpaceParams::make(3, 1);
  const auto res = normalize(GnElement::zero(p), p);
  CHECK(res.certificate.word.empty());
  CHECK(res.form.parity_class == 0);
}

TEST_CASE("parity macro moves beta by two") {
  for (std::int64_t n = 1; n <= 12; ++n) {
    for (int g : {2, 3}) {
      const auto p = SpaceParams::make(g, n, false);
      const Normalizer norm(p);
      for (std::int64_t beta = 0; beta < n; ++beta) {
        const GeneratorWord& w = norm.parity_macro(beta);
        CHECK(apply_word(w, last_beta(p, beta), p) == last_beta(p, beta + 2));
      }
    }
  }
}

TEST_CASE("stage outputs") {
  std::mt19937_64 rng(43);
  for (auto [g, n] : {std::pair{3, 4}, {4, 6}, {5, 4}, {7, 3}}) {
    const auto p = SpaceParams::make(g, n);
    const Normalizer norm(p);
    for (int k = 0; k < 100; ++k) {
      std::vector<std::int64_t> v(p.dim());
      for (auto& e : v) e = static_cast<std::int64_t>(rng() % n);
      const GnElement x(v, n);
      NormalizeTrace trace;
      const auto res = norm.normalize(x, &trace);
      Residue sum = 0;
      for (int i = 1; i <= g; ++i) {
        CHECK(trace.after_clear.alpha(i) == 0);
        sum += trace.after_clear.beta(i);
      }
      CHECK(trace.after_collect == last_beta(p, sum));
      CHECK(replays(res.certificate, p));
      CHECK(res.form == norm.canonical_form(x));
      if (n % 2 == 0) {
        const int expected = vanishing_number(x, p) ^ vanishing_number(GnElement::zero(p), p);
        CHECK(res.form.parity_class == expected);
      } else {
        CHECK(res.form.parity_class == 0);
      }
    }
  }
}

TEST_CASE("certificates replay exhaustively on small spaces") {
  for (auto [g, n] : {std::pair{2, 2}, {3, 2}, {3, 4}, {4, 3}, {2, 1}}) {
    const auto p = SpaceParams::make(g, n);
    const Normalizer norm(p);
    for (std::uint64_t i = 0; i < p.state_count(); ++i) {
      const auto res = norm.normalize(decode(StateIndex{i}, p));
      if (!replays(res.certificate, p)) FAIL("certificate failed at index " << i);
    }
  }
}

TEST_CASE("same_orbit") {
  const auto p = SpaceParams::make(2, 2);
  const auto x = make_element(p, {1, 0, 1, 1});
  const auto self = same_orbit(x, x, p);
  CHECK(self.same);
  REQUIRE(self.certificate);
  CHECK(apply_word(self.certificate->word, x, p) == x);
  CHECK_FALSE(same_orbit(GnElement::zero(p), make_element(p, {0, 0, 0, 1}), p).same);
  const auto yes = same_orbit(GnElement::zero(p), make_element(p, {1, 1, 1, 1}), p);
  CHECK(yes.same);
  REQUIRE(yes.certificate);
  CHECK(replays(*yes.certificate, p));
}
