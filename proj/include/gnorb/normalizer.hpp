#pragma once

// Constructive reduction of any element to one of the canonical
// representatives (0, ..., 0, 0) or (0, ..., 0, 1), with a replayable
// generator word.
//
//   (i)   clear every alpha_i with an A_i/B_i word on block i
//   (ii)  a product of C_i powers collects sum(beta_i) into beta_g
//   (iii) the macro  C_{g-1} w1 C_{g-1} w2 C_{g-1}^{-1-beta}  moves
//         (0, ..., 0, beta) to (0, ..., 0, beta + 2)

#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "gnorb/gn_space.hpp"
#include "gnorb/mcg_action.hpp"
#include "gnorb/sl2_words.hpp"

namespace gnorb {

struct CanonicalForm {
  GnElement representative;
  int parity_class = 0;  // beta_g of the representative; always 0 for odd n

  friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
};

struct Certificate {
  GeneratorWord word;
  GnElement source;
  GnElement target;
};

bool replays(const Certificate& cert, const SpaceParams& p);

struct NormalizeResult {
  CanonicalForm form;
  Certificate certificate;
};

// Intermediate points of the reduction, exposed for testing.
struct NormalizeTrace {
  GnElement after_clear;    // (0, beta_1, ..., 0, beta_g)
  GnElement after_collect;  // (0, ..., 0, sum beta_i)
  std::int64_t macro_steps = 0;
};

class Normalizer {
 public:
  explicit Normalizer(const SpaceParams& p);

  const SpaceParams& params() const { return params_; }

  NormalizeResult normalize(const GnElement& x, NormalizeTrace* trace = nullptr) const;

  // Word taking (0, ..., 0, beta) to (0, ..., 0, beta + 2). Cached per beta.
  const GeneratorWord& parity_macro(Residue beta) const;

  // Canonical form without building the certificate.
  CanonicalForm canonical_form(const GnElement& x) const;

 private:
  SpaceParams params_;
  std::shared_ptr<const Sl2Solver> solver_;
  mutable std::mutex macro_mu_;
  mutable std::map<Residue, GeneratorWord> macros_;
};

NormalizeResult normalize(const GnElement& x, const SpaceParams& p);

struct SameOrbitResult {
  bool same = false;
  // On success, a word taking x to y.
  std::optional<Certificate> certificate;
};

SameOrbitResult same_orbit(const GnElement& x, const GnElement& y, const SpaceParams& p);

}  // namespace gnorb
