#include "gnorb/mcg_action.hpp"

#include <charconv>
#include <sstream>

#include "gnorb/errors.hpp"

namespace gnorb {

Generator Generator::inverse() const {
  if (kind == GenKind::S) return *this;
  return {kind, index, -exponent};
}

GeneratorWord GeneratorWord::inverse() const {
  GeneratorWord out;
  out.tokens.reserve(tokens.size());
  for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) out.tokens.push_back(it->inverse());
  return out;
}

GeneratorWord GeneratorWord::simplified() const {
  GeneratorWord out;
  for (const auto& t : tokens) {
    if (t.kind != GenKind::S && t.exponent == 0) continue;
    if (!out.tokens.empty()) {
      auto& last = out.tokens.back();
      if (last.kind == t.kind && last.index == t.index) {
        if (t.kind == GenKind::S) {
          out.tokens.pop_back();
        } else {
          last.exponent += t.exponent;
          if (last.exponent == 0) out.tokens.pop_back();
        }
        continue;
      }
    }
    out.tokens.push_back(t);
  }
  return out;
}

void validate(const Generator& gen, const SpaceParams& p) {
  auto fail = [&](const std::string& range) {
    throw RangeError("generator " + format_generator(gen) + " needs index in " + range +
                     " for genus " + std::to_string(p.g));
  };
  switch (gen.kind) {
    case GenKind::A:
    case GenKind::B:
      if (gen.index < 1 || gen.index > p.g) fail("[1, g]");
      break;
    case GenKind::C:
    case GenKind::D:
      if (gen.index < 1 || gen.index > p.g - 1) fail("[1, g-1]");
      break;
    case GenKind::S:
      if (gen.exponent != 1 && gen.exponent != -1)
        throw RangeError("reflection s only takes exponent +-1");
      return;
  }
  if (gen.exponent == 0) throw RangeError("generator exponent must be nonzero");
}

namespace {

// Positions of alpha_i and beta_i (1-based block i) in the coordinate vector.
constexpr int alpha_pos(int i) { return 2 * (i - 1); }
constexpr int beta_pos(int i) { return 2 * (i - 1) + 1; }

AffineMap base_action(GenKind kind, int i, const SpaceParams& p) {
  const int d = p.dim();
  ModMatrix lin = ModMatrix::identity(d, p.n);
  std::vector<Residue> t(d, 0);
  switch (kind) {
    case GenKind::A:
      lin.set(beta_pos(i), alpha_pos(i), -1);
      break;
    case GenKind::B:
      lin.set(alpha_pos(i), beta_pos(i), 1);
      break;
    case GenKind::C:
      lin.set(beta_pos(i), alpha_pos(i), -1);
      lin.set(beta_pos(i), alpha_pos(i + 1), 1);
      lin.set(beta_pos(i + 1), alpha_pos(i), 1);
      lin.set(beta_pos(i + 1), alpha_pos(i + 1), -1);
      t[beta_pos(i)] = 1;
      t[beta_pos(i + 1)] = mod_reduce(-1, p.n);
      break;
    case GenKind::D:
      break;
    case GenKind::S:
      for (int j = 1; j <= p.g; ++j) lin.set(alpha_pos(j), alpha_pos(j), -1);
      break;
  }
  return AffineMap(std::move(lin), std::move(t));
}

}  // namespace

AffineMap generator_action(const Generator& gen, const SpaceParams& p) {
  validate(gen, p);
  if (gen.kind == GenKind::D) return AffineMap::identity(p.dim(), p.n);
  return power(base_action(gen.kind, gen.index, p), gen.exponent);
}

AffineMap word_action(const GeneratorWord& w, const SpaceParams& p) {
  AffineMap acc = AffineMap::identity(p.dim(), p.n);
  for (const auto& t : w.tokens) acc = compose(generator_action(t, p), acc);
  return acc;
}

AffineMap multi_twist_action(const MultiTwist& k, const SpaceParams& p) {
  if (static_cast<int>(k.exponents.size()) != p.g - 1)
    throw DimensionError("multi-twist needs g-1 = " + std::to_string(p.g - 1) +
                         " exponents, got " + std::to_string(k.exponents.size()));
  auto kk = [&](int i) -> std::int64_t {
    return (i <= 0 || i >= p.g) ? 0 : mod_reduce(k.exponents[i - 1], p.n);
  };
  ModMatrix lin = ModMatrix::identity(p.dim(), p.n);
  std::vector<Residue> t(p.dim(), 0);
  for (int i = 1; i <= p.g; ++i) {
    const int row = beta_pos(i);
    if (i < p.g) lin.set(row, alpha_pos(i + 1), kk(i));
    lin.set(row, alpha_pos(i), -(kk(i) + kk(i - 1)));
    if (i > 1) lin.set(row, alpha_pos(i - 1), kk(i - 1));
    t[row] = kk(i) - kk(i - 1);
  }
  return AffineMap(std::move(lin), std::move(t));
}

void apply_generator_inplace(const Generator& gen, std::vector<std::int64_t>& x, std::int64_t n) {
  const std::int64_t k = mod_reduce(gen.exponent, n);
  const int i = gen.index;
  switch (gen.kind) {
    case GenKind::A:
      x[beta_pos(i)] = mod_reduce(x[beta_pos(i)] - mod_mul(k, x[alpha_pos(i)], n), n);
      break;
    case GenKind::B:
      x[alpha_pos(i)] = mod_reduce(x[alpha_pos(i)] + mod_mul(k, x[beta_pos(i)], n), n);
      break;
    case GenKind::C: {
      // alpha is fixed by C_i, so the shift is the same at every step.
      const std::int64_t shift =
          mod_mul(k, mod_reduce(x[alpha_pos(i + 1)] - x[alpha_pos(i)] + 1, n), n);
      x[beta_pos(i)] = mod_reduce(x[beta_pos(i)] + shift, n);
      x[beta_pos(i + 1)] = mod_reduce(x[beta_pos(i + 1)] - shift, n);
      break;
    }
    case GenKind::D:
      break;
    case GenKind::S:
      if (gen.exponent % 2 != 0)
        for (std::size_t j = 0; j < x.size(); j += 2) x[j] = mod_reduce(-x[j], n);
      break;
  }
}

GnElement apply_generator(const Generator& gen, const GnElement& x, const SpaceParams& p) {
  validate(gen, p);
  if (x.dim() != p.dim()) throw DimensionError("element dimension does not match genus");
  std::vector<std::int64_t> c(x.coords().begin(), x.coords().end());
  apply_generator_inplace(gen, c, p.n);
  return GnElement(std::move(c), p.n);
}

GnElement apply_word(const GeneratorWord& w, const GnElement& x, const SpaceParams& p) {
  if (x.dim() != p.dim()) throw DimensionError("element dimension does not match genus");
  std::vector<std::int64_t> c(x.coords().begin(), x.coords().end());
  for (const auto& t : w.tokens) {
    validate(t, p);
    apply_generator_inplace(t, c, p.n);
  }
  return GnElement(std::move(c), p.n);
}

LinearTranslation linear_translation_split(const AffineMap& m) {
  return {m.linear(), std::vector<Residue>(m.translation().begin(), m.translation().end())};
}

// ---------------------------------------------------------------------------

GeneratorWord parse_word(std::string_view text) {
  GeneratorWord w;
  std::size_t pos = 0;
  auto at_space = [&] { return pos < text.size() && (text[pos] == ' ' || text[pos] == '\t'); };
  auto read_int = [&](bool allow_sign) -> std::int64_t {
    const std::size_t start = pos;
    const char* first = text.data() + pos;
    const char* last = text.data() + text.size();
    if (allow_sign && first != last && *first == '+') ++first;
    if (!allow_sign && first != last && *first == '-') throw ParseError("expected index", start);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc()) throw ParseError("expected integer", start);
    pos = static_cast<std::size_t>(ptr - text.data());
    return v;
  };
  while (at_space()) ++pos;
  while (pos < text.size()) {
    const std::size_t start = pos;
    const char c = text[pos++];
    Generator g;
    if (c == 's') {
      g = Generator::s();
    } else if (c == 'A' || c == 'B' || c == 'C' || c == 'D') {
      g.kind = c == 'A' ? GenKind::A : c == 'B' ? GenKind::B : c == 'C' ? GenKind::C : GenKind::D;
      if (pos >= text.size() || text[pos] < '0' || text[pos] > '9')
        throw ParseError("expected generator index", pos);
      const std::int64_t idx = read_int(false);
      if (idx < 1 || idx > 1'000'000) throw ParseError("generator index must be positive", start + 1);
      g.index = static_cast<int>(idx);
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        g.exponent = read_int(true);
        if (g.exponent == 0) throw ParseError("exponent must be nonzero", start);
      }
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
    w.tokens.push_back(g);
    if (pos < text.size() && !at_space()) throw ParseError("expected space between tokens", pos);
    while (at_space()) ++pos;
  }
  return w;
}

std::string format_generator(const Generator& gen) {
  if (gen.kind == GenKind::S) return "s";
  static constexpr char names[] = {'A', 'B', 'C', 'D'};
  std::string out(1, names[static_cast<int>(gen.kind)]);
  out += std::to_string(gen.index);
  if (gen.exponent != 1) out += "^" + std::to_string(gen.exponent);
  return out;
}

std::string format_word(const GeneratorWord& w) {
  std::string out;
  for (const auto& t : w.tokens) {
    if (!out.empty()) out += ' ';
    out += format_generator(t);
  }
  return out;
}

}  // namespace gnorb
