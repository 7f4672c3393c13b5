// gnorb: orbit classification of fiberwise coverings under the mapping
// class group action, with certificates and cocycle checks.

#include <CLI11.hpp>

#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "gnorb/errors.hpp"
#include "gnorb/euler_cocycle.hpp"
#include "gnorb/invariants.hpp"
#include "gnorb/mcg_action.hpp"
#include "gnorb/normalizer.hpp"
#include "gnorb/orbit_engine.hpp"
#include "gnorb/report_io.hpp"
#include "gnorb/sl2_words.hpp"

using namespace gnorb;
using json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240601;

struct SpaceFlags {
  int g = 2;
  std::int64_t n = 2;
  bool allow_invalid_euler = false;

  void attach(CLI::App* app) {
    app->add_option("--g", g, "genus (>= 2)")->required();
    app->add_option("--n", n, "covering index (>= 1)")->required();
    app->add_flag("--allow-invalid-euler", allow_invalid_euler, "permit n not dividing 2g-2");
  }
  SpaceParams params() const {
    if (!allow_invalid_euler && n >= 1 && g >= 2 && (2 * g - 2) % n != 0)
      throw ParamError("refused: n = " + std::to_string(n) + " does not divide 2g-2 = " + std::to_string(2 * g - 2) +
                       "; pass --allow-invalid-euler to explore anyway");
    return SpaceParams::make(g, n, !allow_invalid_euler);
  }
};

// Checks for the verify subcommand; each records expected/actual.
class Checklist {
 public:
  void check(const std::string& name, bool ok, const std::string& expected, const std::string& actual) {
    ++total_;
    if (!ok) ++failed_;
    std::cout << (ok ? "PASS " : "FAIL ") << name << "  expected " << expected << "  actual " << actual << '\n';
  }
  bool ok() const { return failed_ == 0; }
  void summary() const { std::cout << (total_ - failed_) << '/' << total_ << " checks passed\n"; }

 private:
  int total_ = 0;
  int failed_ = 0;
};

std::uint64_t parse_count(const std::string& text) {
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size() || !(v >= 0) || v > 1e18 || v != std::floor(v))
    throw ParseError("expected a non-negative integer count, got '" + text + "'", 0);
  return static_cast<std::uint64_t>(v);
}

// Replays before anything is printed.
const Certificate& verified(const Certificate& cert, const SpaceParams& p) {
  if (!replays(cert, p)) throw std::logic_error("certificate failed replay; refusing to print it");
  return cert;
}

std::string word_text(const GeneratorWord& w) { return w.empty() ? "(empty)" : format_word(w); }

void warn_regime(const SpaceParams& p) {
  if (!p.euler_divisible()) std::cerr << "warning: " << kOutsideRegimeWatermark << '\n';
}

int run_classify(const SpaceFlags& sf, const std::string& element, Format fmt) {
  const SpaceParams p = sf.params();
  const GnElement x = parse_element(p, element);
  const NormalizeResult res = Normalizer(p).normalize(x);
  const Certificate& cert = verified(res.certificate, p);
  const auto vn = vanishing_number_if_defined(x, p);
  if (fmt == Format::Json) {
    json j = {{"g", p.g},
              {"n", p.n},
              {"element", format_element(x)},
              {"class", res.form.parity_class},
              {"representative", format_element(res.form.representative)},
              {"vanishing_number", vn ? json(*vn) : json()},
              {"certificate", format_word(cert.word)}};
    if (!p.euler_divisible()) j["watermark"] = kOutsideRegimeWatermark;
    std::cout << j.dump(2) << '\n';
  } else {
    warn_regime(p);
    std::cout << "class " << res.form.parity_class << '\n'
              << "representative " << format_element(res.form.representative) << '\n';
    if (vn) std::cout << "vanishing_number " << *vn << '\n';
    std::cout << "certificate " << word_text(cert.word) << '\n';
  }
  return 0;
}

int run_normalize(const SpaceFlags& sf, const std::string& element, Format fmt) {
  const SpaceParams p = sf.params();
  const NormalizeResult res = Normalizer(p).normalize(parse_element(p, element));
  const Certificate& cert = verified(res.certificate, p);
  if (fmt == Format::Json) {
    json j = {{"source", format_element(cert.source)},
              {"representative", format_element(cert.target)},
              {"certificate", format_word(cert.word)},
              {"certificate_length", cert.word.size()}};
    if (!p.euler_divisible()) j["watermark"] = kOutsideRegimeWatermark;
    std::cout << j.dump(2) << '\n';
  } else {
    warn_regime(p);
    std::cout << "representative " << format_element(cert.target) << '\n'
              << "certificate " << word_text(cert.word) << '\n';
  }
  return 0;
}

int run_apply(const SpaceFlags& sf, const std::string& element, const std::string& word, Format fmt) {
  const SpaceParams p = sf.params();
  const GnElement x = parse_element(p, element);
  const GeneratorWord w = parse_word(word);
  for (const auto& t : w.tokens) validate(t, p);
  const GnElement y = apply_word(w, x, p);
  if (fmt == Format::Json) {
    std::cout << json{{"source", format_element(x)}, {"word", format_word(w)}, {"result", format_element(y)}}.dump(2)
              << '\n';
  } else {
    warn_regime(p);
    std::cout << format_element(y) << '\n';
  }
  return 0;
}

int run_orbits(const SpaceFlags& sf, const std::string& gens, unsigned threads, Format fmt) {
  const SpaceParams p = sf.params();
  EnumerationOptions opt;
  opt.generators = parse_generator_set(gens);
  opt.threads = threads;
  opt.record_parents = false;
  const OrbitReport r = enumerate(p, opt).report();
  switch (fmt) {
    case Format::Json: std::cout << to_json(r).dump(2) << '\n'; break;
    case Format::Csv: warn_regime(p); std::cout << to_csv(r); break;
    case Format::Text: std::cout << to_text(r); break;
  }
  return 0;
}

int run_cocycle(int genus, int pairs, int max_length, std::uint64_t seed) {
  const FuchsianGroup grp = standard_group(genus);
  const auto samples = sample_cocycles(grp, pairs, max_length, seed);
  std::cout << cocycle_report_json(samples, genus, seed).dump(2) << '\n';
  return 0;
}

// All (g, n) with g <= 7, n | 2g - 2 and n^{2g} <= max_states.
std::vector<SpaceParams> theorem_cases(std::uint64_t max_states) {
  std::vector<SpaceParams> out;
  for (int g = 2; g <= 7; ++g)
    for (std::int64_t n = 1; n <= 2 * g - 2; ++n) {
      if ((2 * g - 2) % n != 0) continue;
      const SpaceParams p = SpaceParams::make(g, n);
      if (p.state_count() != 0 && p.state_count() <= max_states) out.push_back(p);
    }
  return out;
}

std::string case_name(const SpaceParams& p) {
  return "(g=" + std::to_string(p.g) + ",n=" + std::to_string(p.n) + ")";
}

void verify_theorem(Checklist& cl, std::uint64_t max_states, unsigned threads) {
  for (const SpaceParams& p : theorem_cases(max_states)) {
    for (auto gs : {GeneratorSet::Mod, GeneratorSet::ModPm}) {
      const OrbitReport r = enumerate_orbits(p, gs, threads);
      const std::size_t expected = p.n % 2 == 0 ? 2 : 1;
      cl.check("theorem " + case_name(p) + " " + to_string(gs) + " orbit_count", r.orbit_count() == expected,
               std::to_string(expected), std::to_string(r.orbit_count()));
    }
  }
}

void verify_invariants(Checklist& cl, std::uint64_t max_states, unsigned threads) {
  for (const SpaceParams& p : theorem_cases(std::min<std::uint64_t>(max_states, 2'000'000))) {
    EnumerationOptions opt;
    opt.threads = threads;
    opt.record_parents = false;
    opt.record_labels = true;
    const OrbitEnumeration e = enumerate(p, opt);
    const Normalizer norm(p);
    std::map<std::uint32_t, std::set<int>> parity_by_orbit, vanishing_by_orbit;
    for (std::uint64_t i = 0; i < p.state_count(); ++i) {
      const GnElement x = decode(StateIndex{i}, p);
      const std::uint32_t orbit = e.orbit_of(StateIndex{i});
      parity_by_orbit[orbit].insert(norm.canonical_form(x).parity_class);
      if (p.n % 2 == 0) vanishing_by_orbit[orbit].insert(vanishing_number(x, p));
    }
    bool one_each = true;
    std::set<int> seen;
    for (const auto& [o, s] : parity_by_orbit) {
      one_each &= s.size() == 1;
      seen.insert(*s.begin());
    }
    const bool agree = one_each && seen.size() == parity_by_orbit.size();
    cl.check("normalizer partition " + case_name(p), agree, "equal to BFS partition", agree ? "equal" : "differs");
    if (p.n % 2 == 0) {
      bool constant = true;
      std::set<int> values;
      for (const auto& [o, s] : vanishing_by_orbit) {
        constant &= s.size() == 1;
        values.insert(*s.begin());
      }
      const bool separates = constant && values.size() == vanishing_by_orbit.size();
      cl.check("vanishing number " + case_name(p), separates, "constant and separating",
               separates ? "constant and separating" : "violated");
    }
  }
  // beta-sum invariance under multi-twists, |k_i| <= 2, on small spaces.
  for (const SpaceParams& p : theorem_cases(std::min<std::uint64_t>(max_states, 100'000))) {
    const BetaSumAudit a = audit_beta_sum(p, 2);
    cl.check("beta-sum invariance " + case_name(p), a.violations == 0, "0 violations",
             std::to_string(a.violations) + " in " + std::to_string(a.pairs) + " pairs");
  }
}

std::uint64_t brute_force_sl2(std::int64_t n) {
  std::uint64_t count = 0;
  for (std::int64_t a = 0; a < n; ++a)
    for (std::int64_t b = 0; b < n; ++b)
      for (std::int64_t c = 0; c < n; ++c)
        for (std::int64_t d = 0; d < n; ++d) count += mod_reduce(a * d - b * c, n) == 1 % n;
  return count;
}

void verify_sl2(Checklist& cl, const std::vector<std::int64_t>& moduli) {
  for (std::int64_t n : moduli) {
    const std::uint64_t closure = generate_sl2(n).size();
    const std::uint64_t brute = brute_force_sl2(n);
    cl.check("sl2 closure n=" + std::to_string(n), closure == brute && brute == sl2_order_formula(n),
             std::to_string(brute) + " (formula " + std::to_string(sl2_order_formula(n)) + ")",
             std::to_string(closure));
  }
}

void verify_cocycle(Checklist& cl, int genus, int samples, std::uint64_t seed) {
  const FuchsianGroup grp = standard_group(genus);
  const auto list = sample_cocycles(grp, samples, 6, seed);
  int in_range = 0, crossing = 0, crossing_zero = 0;
  double worst = 0;
  for (const auto& s : list) {
    in_range += s.c >= -1 && s.c <= 1 && s.residual < kDefaultTolerance;
    worst = std::max(worst, s.residual);
    if (s.axes_cross == std::optional<bool>(true)) {
      ++crossing;
      crossing_zero += s.c == 0;
    }
  }
  std::ostringstream res;
  res << in_range << '/' << list.size() << " (max residual " << worst << ")";
  cl.check("cocycle values in {-1,0,1} genus " + std::to_string(genus) + " seed " + std::to_string(seed),
           in_range == static_cast<int>(list.size()), std::to_string(list.size()) + "/" + std::to_string(list.size()),
           res.str());
  cl.check("crossing axes give c=0", crossing_zero == crossing, std::to_string(crossing),
           std::to_string(crossing_zero));
  const int pants = cocycle(grp, parse_surface_word("a1"), conjugated_a(2).inverse()).value;
  cl.check("c(a1, (b2 a2 b2^-1)^-1)", pants == 1, "1", std::to_string(pants));
  const int e = relator_euler_number(grp);
  cl.check("relator Euler number genus " + std::to_string(genus), e == 2 * genus - 2, std::to_string(2 * genus - 2),
           std::to_string(e));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gnorb: orbits of fiberwise coverings under the mapping class group"};
  app.require_subcommand(1);
  std::string format = "text";

  SpaceFlags classify_flags, normalize_flags, apply_flags, orbits_flags;
  std::string element, word, gens = "mod", suite = "all", max_states = "1e7";
  unsigned threads = 1;
  int genus = 2, samples = 200, pairs = 50, max_length = 6;
  std::int64_t sl2_n = 0;
  std::uint64_t seed = kDefaultSeed;

  auto* classify = app.add_subcommand("classify", "canonical class of an element, with certificate");
  classify_flags.attach(classify);
  classify->add_option("--element", element, "comma-separated 2g residues")->required();
  classify->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

  auto* normalize_cmd = app.add_subcommand("normalize", "reduce an element to its representative");
  normalize_flags.attach(normalize_cmd);
  normalize_cmd->add_option("--element", element)->required();
  normalize_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

  auto* apply_cmd = app.add_subcommand("apply", "apply a generator word to an element");
  apply_flags.attach(apply_cmd);
  apply_cmd->add_option("--element", element)->required();
  apply_cmd->add_option("--word", word, "e.g. \"A1 B2^-1 C1^3 s\"")->required();
  apply_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

  auto* orbits = app.add_subcommand("orbits", "exhaustive orbit enumeration");
  orbits_flags.attach(orbits);
  orbits->add_option("--gens", gens)->check(CLI::IsMember({"mod", "mod_pm"}));
  orbits->add_option("--threads", threads)->check(CLI::Range(1u, 1024u));
  orbits->add_option("--format", format)->check(CLI::IsMember({"json", "csv", "text"}));

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", suite)->check(CLI::IsMember({"theorem", "invariants", "sl2", "cocycle", "all"}));
  verify->add_option("--max-states", max_states, "largest n^{2g} to enumerate (accepts 1e7)");
  verify->add_option("--threads", threads)->check(CLI::Range(1u, 1024u));
  verify->add_option("--n", sl2_n, "single modulus for the sl2 suite (default 2..12)");
  verify->add_option("--genus", genus)->check(CLI::Range(2, 8));
  verify->add_option("--samples", samples)->check(CLI::Range(0, 1'000'000));
  verify->add_option("--seed", seed);

  auto* cocycle_cmd = app.add_subcommand("cocycle", "sample Euler cocycle values as JSON");
  cocycle_cmd->add_option("--genus", genus)->check(CLI::Range(2, 8));
  cocycle_cmd->add_option("--pairs", pairs)->check(CLI::Range(0, 1'000'000));
  cocycle_cmd->add_option("--max-length", max_length)->check(CLI::Range(1, 32));
  cocycle_cmd->add_option("--seed", seed);

  CLI11_PARSE(app, argc, argv);

  try {
    const Format fmt = parse_format(format);
    if (*classify) return run_classify(classify_flags, element, fmt);
    if (*normalize_cmd) return run_normalize(normalize_flags, element, fmt);
    if (*apply_cmd) return run_apply(apply_flags, element, word, fmt);
    if (*orbits) return run_orbits(orbits_flags, gens, threads, fmt);
    if (*cocycle_cmd) return run_cocycle(genus, pairs, max_length, seed);
    if (*verify) {
      Checklist cl;
      const std::uint64_t limit = parse_count(max_states);
      if (suite == "theorem" || suite == "all") verify_theorem(cl, limit, threads);
      if (suite == "invariants" || suite == "all") verify_invariants(cl, limit, threads);
      if (suite == "sl2" || suite == "all") {
        std::vector<std::int64_t> moduli;
        if (sl2_n > 0) moduli.push_back(sl2_n);
        else
          for (std::int64_t n = 2; n <= 12; ++n) moduli.push_back(n);
        verify_sl2(cl, moduli);
      }
      if (suite == "cocycle" || suite == "all") verify_cocycle(cl, genus, samples, seed);
      cl.summary();
      return cl.ok() ? 0 : 1;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
