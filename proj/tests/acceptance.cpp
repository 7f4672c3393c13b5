// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run criteria 1-11
//   acceptance --quick    skip the (g=7, n=4) stress run (criterion 11)

#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "gnorb/errors.hpp"
#include "gnorb/euler_cocycle.hpp"
#include "gnorb/invariants.hpp"
#include "gnorb/mcg_action.hpp"
#include "gnorb/normalizer.hpp"
#include "gnorb/orbit_engine.hpp"
#include "gnorb/sl2_words.hpp"

using namespace gnorb;

namespace {

// Pinned tolerances and limits.
constexpr double kResidualTolerance = 1e-6;
constexpr int kCocycleSamples = 200;
constexpr int kCocycleMaxLength = 6;
constexpr std::uint64_t kCocycleSeed = 20240601;
constexpr std::uint64_t kBetaSumStateLimit = 100'000;
constexpr int kMultiTwistBound = 2;
constexpr std::int64_t kMacroMaxModulus = 12;
constexpr std::int64_t kSl2MaxModulus = 12;
constexpr std::uint64_t kSp4Order = 720;
constexpr std::int64_t kStressLimitMs = 10 * 60 * 1000;

const std::vector<std::pair<int, std::int64_t>> kOddCases = {{2, 1}, {3, 1}, {4, 3}, {7, 3}};
const std::vector<std::pair<int, std::int64_t>> kEvenCases = {{2, 2}, {3, 2}, {3, 4}, {4, 2},
                                                              {4, 6}, {5, 2}, {5, 4}};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string case_name(const SpaceParams& p) {
  return "(" + std::to_string(p.g) + "," + std::to_string(p.n) + ")";
}

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

OrbitEnumeration labelled(const SpaceParams& p, GeneratorSet gs) {
  EnumerationOptions opt;
  opt.generators = gs;
  opt.threads = worker_count();
  opt.record_parents = false;
  opt.record_labels = true;
  return enumerate(p, opt);
}

Outcome orbit_counts(const std::vector<std::pair<int, std::int64_t>>& cases, std::size_t expected) {
  Outcome out{true, ""};
  for (auto [g, n] : cases) {
    const auto p = SpaceParams::make(g, n);
    const auto r = enumerate_orbits(p, GeneratorSet::Mod, worker_count());
    out.pass &= r.orbit_count() == expected;
    out.detail += case_name(p) + "=" + std::to_string(r.orbit_count()) + " ";
  }
  return out;
}

Outcome criterion_sizes() {
  Outcome out{true, ""};
  for (auto [g, small, large] : {std::tuple{2, 6ull, 10ull}, {3, 28ull, 36ull}}) {
    const auto p = SpaceParams::make(g, 2);
    const auto r = enumerate_orbits(p, GeneratorSet::Mod);
    std::multiset<std::uint64_t> sizes;
    for (const auto& o : r.orbits) sizes.insert(o.size);
    // Class counts of the vanishing number, by direct count over all states.
    std::map<int, std::uint64_t> classes;
    for (std::uint64_t i = 0; i < p.state_count(); ++i) ++classes[vanishing_number(decode(StateIndex{i}, p), p)];
    const std::multiset<std::uint64_t> class_sizes{classes[0], classes[1]};
    const bool ok = sizes == std::multiset<std::uint64_t>{small, large} && sizes == class_sizes;
    out.pass &= ok;
    out.detail += case_name(p) + " sizes {";
    for (auto s : sizes) out.detail += std::to_string(s) + " ";
    out.detail += "} classes {" + std::to_string(classes[0]) + " " + std::to_string(classes[1]) + "} ";
  }
  return out;
}

Outcome criterion_vanishing() {
  Outcome out{true, ""};
  for (auto [g, n] : kEvenCases) {
    const auto p = SpaceParams::make(g, n);
    for (auto gs : {GeneratorSet::Mod, GeneratorSet::ModPm}) {
      const auto e = labelled(p, gs);
      std::vector<std::set<int>> values(e.report().orbit_count());
      for (std::uint64_t i = 0; i < p.state_count(); ++i)
        values[e.orbit_of(StateIndex{i})].insert(vanishing_number(decode(StateIndex{i}, p), p));
      bool constant = true;
      std::set<int> distinct;
      for (const auto& v : values) {
        constant &= v.size() == 1;
        if (!v.empty()) distinct.insert(*v.begin());
      }
      const bool ok = constant && distinct.size() == values.size();
      out.pass &= ok;
      if (!ok) out.detail += case_name(p) + " " + to_string(gs) + " violated ";
    }
  }
  if (out.pass) out.detail = std::to_string(kEvenCases.size()) + " cases x {mod, mod_pm}: constant and separating";
  return out;
}

Outcome criterion_normalizer() {
  Outcome out{true, ""};
  std::uint64_t certificates = 0, replayed = 0;
  std::vector<std::pair<int, std::int64_t>> cases = kOddCases;
  cases.insert(cases.end(), kEvenCases.begin(), kEvenCases.end());
  for (auto [g, n] : cases) {
    const auto p = SpaceParams::make(g, n);
    const auto e = labelled(p, GeneratorSet::Mod);
    const Normalizer norm(p);
    // Partition equality: orbit label <-> canonical representative is a bijection.
    std::map<std::uint32_t, GnElement> form_of_orbit;
    std::map<GnElement, std::uint32_t> orbit_of_form;
    bool ok = true;
    for (std::uint64_t i = 0; i < p.state_count(); ++i) {
      const GnElement x = decode(StateIndex{i}, p);
      const NormalizeResult res = norm.normalize(x);
      ++certificates;
      if (replays(res.certificate, p) && res.certificate.source == x) ++replayed;
      const std::uint32_t label = e.orbit_of(StateIndex{i});
      const auto [a, fresh_a] = form_of_orbit.emplace(label, res.form.representative);
      const auto [b, fresh_b] = orbit_of_form.emplace(res.form.representative, label);
      ok &= (fresh_a || a->second == res.form.representative) && (fresh_b || b->second == label);
    }
    ok &= form_of_orbit.size() == e.report().orbit_count();
    out.pass &= ok;
    if (!ok) out.detail += case_name(p) + " partition differs ";
  }
  out.pass &= replayed == certificates;
  out.detail += std::to_string(cases.size()) + " spaces, partitions equal; " + std::to_string(replayed) + "/" +
                std::to_string(certificates) + " certificates replay";
  return out;
}

Outcome criterion_macro() {
  Outcome out{true, ""};
  int checked = 0;
  for (std::int64_t n = 1; n <= kMacroMaxModulus; ++n)
    for (int g : {2, 3, 4}) {
      const auto p = SpaceParams::make(g, n, false);
      const Normalizer norm(p);
      for (std::int64_t beta = 0; beta < n; ++beta) {
        std::vector<std::int64_t> from(p.dim(), 0), to(p.dim(), 0);
        from.back() = beta;
        to.back() = beta + 2;
        const GeneratorWord& w = norm.parity_macro(beta);
        // Five stages: C, w1, C, w2, C^{-1-beta}; simplification may merge adjacent tokens.
        const bool ok = apply_word(w, GnElement(from, n), p) == GnElement(to, n);
        out.pass &= ok;
        ++checked;
        if (!ok) out.detail += "n=" + std::to_string(n) + " beta=" + std::to_string(beta) + " failed ";
      }
    }
  out.detail += std::to_string(checked) + " (g, n, beta) triples, n <= " + std::to_string(kMacroMaxModulus);
  return out;
}

Outcome criterion_beta_sum() {
  Outcome out{true, ""};
  std::uint64_t pairs = 0;
  int spaces = 0;
  for (int g = 2; g <= 7; ++g)
    for (std::int64_t n = 1;; ++n) {
      const auto p = SpaceParams::make(g, n, false);
      if (p.state_count() > kBetaSumStateLimit) break;
      ++spaces;
      std::vector<std::int64_t> k(g - 1, -kMultiTwistBound);
      std::vector<Residue> x(p.dim());
      while (true) {
        // sum_i beta_i(L x + t) = w . x + tau, with w the sum of the beta rows of L.
        const AffineMap m = multi_twist_action(MultiTwist{k}, p);
        std::vector<Residue> w(p.dim(), 0);
        Residue tau = 0;
        for (int j = 1; j <= g; ++j) {
          for (int c = 0; c < p.dim(); ++c) w[c] += m.linear()(2 * j - 1, c);
          tau += m.translation()[2 * j - 1];
        }
        std::fill(x.begin(), x.end(), 0);
        Residue before = 0;  // beta sum of x, kept incrementally
        for (std::uint64_t i = 0; i < p.state_count(); ++i) {
          Residue after = tau;
          for (int c = 0; c < p.dim(); ++c) after += w[c] * x[c];
          if (mod_reduce(after, n) != mod_reduce(before, n)) out.pass = false;
          ++pairs;
          for (int c = 0; c < p.dim(); ++c) {
            const bool carry = ++x[c] == n;
            if (c % 2 == 1) before += carry ? 1 - n : 1;
            if (!carry) break;
            x[c] = 0;
          }
        }
        std::size_t pos = 0;
        while (pos < k.size() && k[pos] == kMultiTwistBound) k[pos++] = -kMultiTwistBound;
        if (pos == k.size()) break;
        ++k[pos];
      }
    }
  out.detail = std::to_string(spaces) + " spaces with n^{2g} <= 1e5, " + std::to_string(pairs) +
               " (state, multi-twist) pairs, |k_i| <= " + std::to_string(kMultiTwistBound);
  return out;
}

std::uint64_t brute_force_sl2(std::int64_t n) {
  std::uint64_t count = 0;
  for (std::int64_t a = 0; a < n; ++a)
    for (std::int64_t b = 0; b < n; ++b)
      for (std::int64_t c = 0; c < n; ++c)
        for (std::int64_t d = 0; d < n; ++d) count += mod_reduce(a * d - b * c, n) == 1 % n;
  return count;
}

Outcome criterion_sl2() {
  Outcome out{true, ""};
  for (std::int64_t n = 2; n <= kSl2MaxModulus; ++n) {
    const std::uint64_t closure = generate_sl2(n).size();
    const std::uint64_t brute = brute_force_sl2(n);
    const std::uint64_t formula = sl2_order_formula(n);
    out.pass &= closure == brute && brute == formula;
    out.detail += std::to_string(n) + ":" + std::to_string(closure) + (closure == formula ? "" : "!") + " ";
  }
  return out;
}

Outcome criterion_symplectic() {
  const auto p = SpaceParams::make(2, 2);
  // 4x4 matrices over Z/2 packed into 16 bits, row-major.
  auto pack = [](const ModMatrix& m) {
    std::uint16_t bits = 0;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        if (m(r, c)) bits |= static_cast<std::uint16_t>(1u << (4 * r + c));
    return bits;
  };
  auto unpack = [](std::uint16_t bits) {
    ModMatrix m(4, 4, 2);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) m.set(r, c, (bits >> (4 * r + c)) & 1);
    return m;
  };
  std::vector<ModMatrix> gens;
  bool all_symplectic = true;
  for (const auto& gen : generator_list(GeneratorSet::Mod, p)) {
    gens.push_back(generator_action(gen, p).linear());
    all_symplectic &= preserves_symplectic_form(gens.back());
  }
  std::unordered_set<std::uint16_t> seen{pack(ModMatrix::identity(4, 2))};
  std::vector<std::uint16_t> frontier(seen.begin(), seen.end());
  while (!frontier.empty()) {
    std::vector<std::uint16_t> next;
    for (auto bits : frontier) {
      const ModMatrix m = unpack(bits);
      for (const auto& gm : gens) {
        const std::uint16_t prod = pack(gm * m);
        if (seen.insert(prod).second) next.push_back(prod);
      }
    }
    frontier = std::move(next);
  }
  bool closure_symplectic = true;
  for (auto bits : seen) closure_symplectic &= preserves_symplectic_form(unpack(bits));
  // |Sp(4, F_2)| = 2^4 (2^2 - 1)(2^4 - 1).
  const std::uint64_t formula = 16 * 3 * 15;
  Outcome out;
  out.pass = seen.size() == kSp4Order && formula == kSp4Order && all_symplectic && closure_symplectic;
  out.detail = "closure order " + std::to_string(seen.size()) + ", |Sp(4,2)| = " + std::to_string(formula) +
               (closure_symplectic ? ", all symplectic" : ", non-symplectic element found");
  return out;
}

Outcome criterion_cocycle() {
  Outcome out{true, ""};
  const FuchsianGroup g2 = standard_group(2, kResidualTolerance);
  const auto samples = sample_cocycles(g2, kCocycleSamples, kCocycleMaxLength, kCocycleSeed);
  int good = 0, crossing = 0, crossing_zero = 0;
  double worst = 0;
  for (const auto& s : samples) {
    good += s.residual < kResidualTolerance && s.c >= -1 && s.c <= 1;
    worst = std::max(worst, s.residual);
    if (s.axes_cross == std::optional<bool>(true)) {
      ++crossing;
      crossing_zero += s.c == 0;
    }
  }
  const int pants = cocycle(g2, parse_surface_word("a1"), conjugated_a(2).inverse()).value;
  const int e2 = relator_euler_number(g2);
  const int e3 = relator_euler_number(standard_group(3, kResidualTolerance));
  out.pass = good == kCocycleSamples && crossing > 0 && crossing_zero == crossing && pants == 1 && e2 == 2 && e3 == 4;
  std::ostringstream d;
  d << good << "/" << kCocycleSamples << " in {-1,0,1} (max residual " << worst << "); crossing " << crossing_zero
    << "/" << crossing << " zero; c(a1,a2'^-1)=" << pants << "; euler g2=" << e2 << " g3=" << e3;
  out.detail = d.str();
  return out;
}

Outcome criterion_stress() {
  const auto p = SpaceParams::make(7, 4);
  EnumerationOptions opt;
  opt.threads = worker_count();
  opt.record_parents = false;
  const std::uint64_t visited_bytes = p.state_count() / 8;
  const auto r = enumerate(p, opt).report();
  Outcome out;
  out.pass = r.orbit_count() == 2 && r.elapsed_ms < kStressLimitMs;
  std::ostringstream d;
  d << "orbit_count " << r.orbit_count() << ", " << r.elapsed_ms / 1000.0 << " s on " << r.threads
    << " thread(s), visited bitmap " << visited_bytes / 1e6 << " MB, total " << required_memory(p, opt) / 1e6
    << " MB";
  out.detail = d.str();
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"odd n: one orbit", [] { return orbit_counts(kOddCases, 1); }},
      {"even n: two orbits", [] { return orbit_counts(kEvenCases, 2); }},
      {"orbit sizes (2,2) and (3,2)", criterion_sizes},
      {"vanishing number constant and separating", criterion_vanishing},
      {"normalizer partition equals BFS; certificates replay", criterion_normalizer},
      {"parity macro (0,..,b) -> (0,..,b+2)", criterion_macro},
      {"beta-sum invariance under multi-twists", criterion_beta_sum},
      {"SL(2,Z/n) closure sizes", criterion_sl2},
      {"symplectic image order at (2,2)", criterion_symplectic},
      {"Euler cocycle", criterion_cocycle},
      {"stress (7,4)", criterion_stress},
  };

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (quick && id == 11) {
      std::cout << "SKIP " << id << "  " << criteria[k].first << "  (--quick)\n";
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << id << "  " << criteria[k].first << "  [" << o.detail << "]  ("
              << secs << " s)\n"
              << std::flush;
  }
  return failures == 0 ? 0 : 1;
}
