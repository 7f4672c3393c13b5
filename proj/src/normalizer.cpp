#include "gnorb/normalizer.hpp"

#include <stdexcept>

#include "gnorb/errors.hpp"

namespace gnorb {

bool replays(const Certificate& cert, const SpaceParams& p) {
  return apply_word(cert.word, cert.source, p) == cert.target;
}

Normalizer::Normalizer(const SpaceParams& p) : params_(p) {
  if (p.n > kMaxSolverModulus)
    throw ParamError("normalizer supports n up to " + std::to_string(kMaxSolverModulus));
  solver_ = Sl2Solver::shared(p.n);
}

const GeneratorWord& Normalizer::parity_macro(Residue beta) const {
  const std::int64_t n = params_.n;
  beta = mod_reduce(beta, n);
  std::lock_guard<std::mutex> lock(macro_mu_);
  auto it = macros_.find(beta);
  if (it != macros_.end()) return it->second;

  const int g = params_.g;
  const Generator twist = Generator::c(g - 1);
  // (0, beta - 1) -> (beta - 1, 0) on the last block.
  auto w1 = solver_->solve_pair({0, beta - 1}, {beta - 1, 0});
  // (beta - 1, -beta) -> (0, 1); beta - 1 and -beta are coprime.
  auto w2 = solver_->solve_pair({beta - 1, -beta}, {0, 1});
  if (!w1 || !w2) throw std::logic_error("parity macro: block pair unexpectedly unreachable");

  GeneratorWord w;
  w.append(twist);
  w.append(w1->to_generators(g));
  w.append(twist);
  w.append(w2->to_generators(g));
  const std::int64_t back = mod_reduce(-1 - beta, n);
  if (back != 0) w.append(Generator::c(g - 1, back));
  return macros_.emplace(beta, w.simplified()).first->second;
}

NormalizeResult Normalizer::normalize(const GnElement& x, NormalizeTrace* trace) const {
  const SpaceParams& p = params_;
  if (x.dim() != p.dim() || x.modulus() != p.n)
    throw DimensionError("element does not belong to this space");
  const std::int64_t n = p.n;
  const int g = p.g;

  NormalizeResult out;
  out.certificate.source = x;
  if (n == 1) {
    out.form = {x, 0};
    out.certificate.target = x;
    if (trace) *trace = {x, x, 0};
    return out;
  }

  GeneratorWord word;
  std::vector<std::int64_t> cur(x.coords().begin(), x.coords().end());

  // (i) clear alpha block by block.
  for (int i = 1; i <= g; ++i) {
    const BlockPair v{cur[2 * (i - 1)], cur[2 * (i - 1) + 1]};
    const BlockWord bw = solver_->clear_alpha(v);
    const BlockPair w = bw.apply(v, n);
    cur[2 * (i - 1)] = w[0];
    cur[2 * (i - 1) + 1] = w[1];
    word.append(bw.to_generators(i));
  }
  if (trace) trace->after_clear = GnElement(cur, n);

  // (ii) with every alpha zero, C_i^{k} adds k to beta_i and subtracts it
  // from beta_{i+1}; k_i = -(beta_1 + ... + beta_i) empties blocks 1..g-1.
  std::int64_t partial = 0;
  for (int i = 1; i < g; ++i) {
    partial = (partial + cur[2 * (i - 1) + 1]) % n;
    const std::int64_t k = mod_reduce(-partial, n);
    if (k != 0) word.append(Generator::c(i, k));
    cur[2 * (i - 1) + 1] = 0;
  }
  Residue beta = (partial + cur[2 * g - 1]) % n;
  cur[2 * g - 1] = beta;
  if (trace) trace->after_collect = GnElement(cur, n);

  // (iii) beta -> beta + 2 until the target residue.
  std::int64_t steps = 0;
  Residue target = 0;
  if (n % 2 == 0) {
    target = beta % 2;
    steps = mod_reduce(target - beta, n) / 2;
  } else {
    steps = mod_mul(mod_reduce(-beta, n), mod_inverse(2, n), n);
  }
  for (std::int64_t s = 0; s < steps; ++s) {
    word.append(parity_macro(beta));
    beta = (beta + 2) % n;
  }
  if (trace) trace->macro_steps = steps;

  std::vector<std::int64_t> rep(p.dim(), 0);
  rep[2 * g - 1] = target;
  out.form = {GnElement(std::move(rep), n), static_cast<int>(target)};
  out.certificate.word = word.simplified();
  out.certificate.target = out.form.representative;
  return out;
}

CanonicalForm Normalizer::canonical_form(const GnElement& x) const {
  const SpaceParams& p = params_;
  std::vector<std::int64_t> rep(p.dim(), 0);
  if (p.n % 2 != 0) return {GnElement(std::move(rep), p.n), 0};
  // Clearing alpha preserves gcd(alpha, beta, n); with n even the cleared
  // beta is odd exactly when that content is odd.
  int parity = 0;
  for (int i = 1; i <= p.g; ++i) parity ^= static_cast<int>(gcd3(x.alpha(i), x.beta(i), p.n) % 2);
  rep[2 * p.g - 1] = parity;
  return {GnElement(std::move(rep), p.n), parity};
}

NormalizeResult normalize(const GnElement& x, const SpaceParams& p) {
  return Normalizer(p).normalize(x);
}

SameOrbitResult same_orbit(const GnElement& x, const GnElement& y, const SpaceParams& p) {
  const Normalizer norm(p);
  const NormalizeResult nx = norm.normalize(x);
  const NormalizeResult ny = norm.normalize(y);
  SameOrbitResult out;
  if (!(nx.form == ny.form)) return out;
  out.same = true;
  GeneratorWord w = nx.certificate.word;
  w.append(ny.certificate.word.inverse());
  out.certificate = Certificate{w.simplified(), x, y};
  return out;
}

}  // namespace gnorb
