#pragma once

// Affine action of the Lickorish Dehn twists A_i, B_i, C_i, the Torelli
// twists D_i and the reflection s on the (alpha, beta) coordinates.
//
//   A_i : beta_i  <- beta_i - alpha_i
//   B_i : alpha_i <- alpha_i + beta_i
//   C_i : beta_i     <- beta_i - alpha_i + alpha_{i+1} + 1
//         beta_{i+1} <- beta_{i+1} + alpha_i - alpha_{i+1} - 1
//   D_i : identity
//   s   : alpha_j <- -alpha_j for all j

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gnorb/gn_space.hpp"

namespace gnorb {

enum class GenKind : std::uint8_t { A, B, C, D, S };

struct Generator {
  GenKind kind = GenKind::A;
  int index = 1;              // 1..g for A, B; 1..g-1 for C, D; 0 for S
  std::int64_t exponent = 1;  // nonzero; +-1 for S

  static Generator a(int i, std::int64_t e = 1) { return {GenKind::A, i, e}; }
  static Generator b(int i, std::int64_t e = 1) { return {GenKind::B, i, e}; }
  static Generator c(int i, std::int64_t e = 1) { return {GenKind::C, i, e}; }
  static Generator d(int i, std::int64_t e = 1) { return {GenKind::D, i, e}; }
  static Generator s() { return {GenKind::S, 0, 1}; }

  Generator inverse() const;
  bool orientation_preserving() const { return kind != GenKind::S; }

  friend bool operator==(const Generator&, const Generator&) = default;
};

// Tokens act left to right: the first token acts first.
struct GeneratorWord {
  std::vector<Generator> tokens;

  bool empty() const { return tokens.empty(); }
  std::size_t size() const { return tokens.size(); }
  void append(const Generator& t) { tokens.push_back(t); }
  void append(const GeneratorWord& w) { tokens.insert(tokens.end(), w.tokens.begin(), w.tokens.end()); }
  GeneratorWord inverse() const;
  // Merges adjacent tokens on the same generator and drops zero exponents
  // (s s cancels).
  GeneratorWord simplified() const;

  friend bool operator==(const GeneratorWord&, const GeneratorWord&) = default;
};

// Exponents k_1..k_{g-1} of C_1^{k_1} ... C_{g-1}^{k_{g-1}}.
struct MultiTwist {
  std::vector<std::int64_t> exponents;
};

// Throws RangeError when the generator index is out of range for p.
void validate(const Generator& gen, const SpaceParams& p);

AffineMap generator_action(const Generator& gen, const SpaceParams& p);
AffineMap word_action(const GeneratorWord& w, const SpaceParams& p);
AffineMap multi_twist_action(const MultiTwist& k, const SpaceParams& p);

// Token-by-token application with the closed forms above; no matrices.
void apply_generator_inplace(const Generator& gen, std::vector<std::int64_t>& coords,
                             std::int64_t n);
GnElement apply_generator(const Generator& gen, const GnElement& x, const SpaceParams& p);
GnElement apply_word(const GeneratorWord& w, const GnElement& x, const SpaceParams& p);

struct LinearTranslation {
  ModMatrix linear;
  std::vector<Residue> translation;
};
LinearTranslation linear_translation_split(const AffineMap& m);

// Grammar: WORD := TOKEN (' '+ TOKEN)* ; TOKEN := [ABCD] INDEX ('^' INT)? | 's'.
// Index ranges against a genus are checked by validate(), not here.
GeneratorWord parse_word(std::string_view text);
std::string format_word(const GeneratorWord& w);
std::string format_generator(const Generator& gen);

}  // namespace gnorb
