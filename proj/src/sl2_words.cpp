#include "gnorb/sl2_words.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "gnorb/errors.hpp"

namespace gnorb {

namespace {
constexpr std::uint8_t kNone = 0xFF;
}

BlockMatrix BlockMatrix::of(BlockLetter letter, std::int64_t n) {
  switch (letter) {
    case BlockLetter::L: return {{1 % n, 0, mod_reduce(-1, n), 1 % n}, n};
    case BlockLetter::Linv: return {{1 % n, 0, 1 % n, 1 % n}, n};
    case BlockLetter::R: return {{1 % n, 1 % n, 0, 1 % n}, n};
    case BlockLetter::Rinv: return {{1 % n, mod_reduce(-1, n), 0, 1 % n}, n};
  }
  return identity(n);
}

Residue BlockMatrix::det() const {
  return mod_reduce(mod_mul(m[0], m[3], n) - mod_mul(m[1], m[2], n), n);
}

BlockMatrix BlockMatrix::operator*(const BlockMatrix& o) const {
  auto mm = [&](Residue a, Residue b, Residue c, Residue d) {
    return mod_reduce(mod_mul(a, b, n) + mod_mul(c, d, n), n);
  };
  return {{mm(m[0], o.m[0], m[1], o.m[2]), mm(m[0], o.m[1], m[1], o.m[3]),
           mm(m[2], o.m[0], m[3], o.m[2]), mm(m[2], o.m[1], m[3], o.m[3])},
          n};
}

std::array<Residue, 2> BlockMatrix::apply(std::array<Residue, 2> v) const {
  return {mod_reduce(mod_mul(m[0], v[0], n) + mod_mul(m[1], v[1], n), n),
          mod_reduce(mod_mul(m[2], v[0], n) + mod_mul(m[3], v[1], n), n)};
}

BlockLetter inverse_letter(BlockLetter letter) {
  switch (letter) {
    case BlockLetter::L: return BlockLetter::Linv;
    case BlockLetter::Linv: return BlockLetter::L;
    case BlockLetter::R: return BlockLetter::Rinv;
    case BlockLetter::Rinv: return BlockLetter::R;
  }
  return letter;
}

BlockPair apply_letter(BlockLetter letter, BlockPair v, std::int64_t n) {
  switch (letter) {
    case BlockLetter::L: return {v[0], mod_reduce(v[1] - v[0], n)};
    case BlockLetter::Linv: return {v[0], mod_reduce(v[1] + v[0], n)};
    case BlockLetter::R: return {mod_reduce(v[0] + v[1], n), v[1]};
    case BlockLetter::Rinv: return {mod_reduce(v[0] - v[1], n), v[1]};
  }
  return v;
}

BlockMatrix BlockWord::matrix(std::int64_t n) const {
  BlockMatrix acc = BlockMatrix::identity(n);
  for (auto l : letters) acc = BlockMatrix::of(l, n) * acc;
  return acc;
}

BlockPair BlockWord::apply(BlockPair v, std::int64_t n) const {
  for (auto l : letters) v = apply_letter(l, v, n);
  return v;
}

GeneratorWord BlockWord::to_generators(int block) const {
  GeneratorWord w;
  for (auto l : letters) {
    switch (l) {
      case BlockLetter::L: w.append(Generator::a(block)); break;
      case BlockLetter::Linv: w.append(Generator::a(block, -1)); break;
      case BlockLetter::R: w.append(Generator::b(block)); break;
      case BlockLetter::Rinv: w.append(Generator::b(block, -1)); break;
    }
  }
  return w;
}

std::vector<Sl2Element> generate_sl2(std::int64_t n, std::uint64_t cap) {
  if (n < 1) throw ParamError("modulus must be positive");
  const auto un = static_cast<std::uint64_t>(n);
  if (un > 65535 || un * un * un * un > cap)
    throw BudgetError("SL(2, Z/" + std::to_string(n) + "Z) closure needs n^4 table entries above cap",
                      static_cast<std::size_t>(un > 65535 ? SIZE_MAX : un * un * un * un));
  const std::size_t size = static_cast<std::size_t>(un * un * un * un);
  auto encode = [&](const BlockMatrix& b) {
    return static_cast<std::size_t>(((b.m[3] * n + b.m[2]) * n + b.m[1]) * n + b.m[0]);
  };
  std::vector<std::uint8_t> parent(size, kNone);
  std::vector<std::uint8_t> seen(size, 0);
  std::vector<BlockMatrix> order;
  const BlockMatrix id = BlockMatrix::identity(n);
  seen[encode(id)] = 1;
  order.push_back(id);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const BlockMatrix cur = order[head];
    for (auto l : kBlockLetters) {
      const BlockMatrix next = BlockMatrix::of(l, n) * cur;
      const std::size_t c = encode(next);
      if (seen[c]) continue;
      seen[c] = 1;
      parent[c] = static_cast<std::uint8_t>(l);
      order.push_back(next);
    }
  }
  std::vector<Sl2Element> out;
  out.reserve(order.size());
  for (const auto& m : order) {
    BlockWord w;
    BlockMatrix cur = m;
    for (std::uint8_t p = parent[encode(cur)]; p != kNone; p = parent[encode(cur)]) {
      const auto l = static_cast<BlockLetter>(p);
      w.letters.push_back(l);
      cur = BlockMatrix::of(inverse_letter(l), n) * cur;
    }
    std::reverse(w.letters.begin(), w.letters.end());
    out.push_back({m, std::move(w)});
  }
  return out;
}

std::uint64_t sl2_order_formula(std::int64_t n) {
  std::uint64_t order = static_cast<std::uint64_t>(n) * n * n;
  std::int64_t rest = n;
  for (std::int64_t p = 2; p * p <= rest; ++p) {
    if (rest % p) continue;
    while (rest % p == 0) rest /= p;
    order = order / static_cast<std::uint64_t>(p * p) * static_cast<std::uint64_t>(p * p - 1);
  }
  if (rest > 1) order = order / static_cast<std::uint64_t>(rest * rest) * static_cast<std::uint64_t>(rest * rest - 1);
  return order;
}

std::int64_t pair_content(BlockPair v, std::int64_t n) { return gcd3(v[0], v[1], n); }

// ---------------------------------------------------------------------------

Sl2Solver::Sl2Solver(std::int64_t n) : n_(n) {
  if (n < 1 || n > kMaxSolverModulus)
    throw ParamError("block solver modulus must lie in [1, " + std::to_string(kMaxSolverModulus) + "]");
  const std::size_t states = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  clear_step_.assign(states, kNone);
  std::vector<std::uint8_t> seen(states, 0);
  std::vector<std::size_t> queue;
  queue.reserve(states);
  for (std::int64_t beta = 0; beta < n; ++beta) {
    const std::size_t c = code({0, beta});
    seen[c] = 1;
    queue.push_back(c);
  }
  // Backward search: v reaches u in one step when u = letter(v).
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const BlockPair u = pair_of(queue[head]);
    for (auto l : kBlockLetters) {
      const BlockPair v = apply_letter(inverse_letter(l), u, n_);
      const std::size_t c = code(v);
      if (seen[c]) continue;
      seen[c] = 1;
      clear_step_[c] = static_cast<std::uint8_t>(l);
      queue.push_back(c);
    }
  }
}

std::shared_ptr<const Sl2Solver> Sl2Solver::shared(std::int64_t n) {
  static std::mutex mu;
  static std::map<std::int64_t, std::shared_ptr<const Sl2Solver>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto solver = std::make_shared<const Sl2Solver>(n);
  cache.emplace(n, solver);
  return solver;
}

BlockWord Sl2Solver::clear_alpha(BlockPair v) const {
  v = {mod_reduce(v[0], n_), mod_reduce(v[1], n_)};
  BlockWord w;
  for (std::uint8_t step = clear_step_[code(v)]; step != kNone; step = clear_step_[code(v)]) {
    const auto l = static_cast<BlockLetter>(step);
    w.letters.push_back(l);
    v = apply_letter(l, v, n_);
  }
  return w;
}

std::optional<BlockWord> Sl2Solver::solve_pair(BlockPair from, BlockPair to) const {
  from = {mod_reduce(from[0], n_), mod_reduce(from[1], n_)};
  to = {mod_reduce(to[0], n_), mod_reduce(to[1], n_)};
  if (pair_content(from, n_) != pair_content(to, n_)) return std::nullopt;
  const std::size_t states = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
  std::vector<std::uint8_t> parent(states, kNone);
  std::vector<std::uint8_t> seen(states, 0);
  std::vector<std::size_t> queue{code(from)};
  seen[code(from)] = 1;
  const std::size_t goal = code(to);
  for (std::size_t head = 0; head < queue.size() && !seen[goal]; ++head) {
    const BlockPair u = pair_of(queue[head]);
    for (auto l : kBlockLetters) {
      const std::size_t c = code(apply_letter(l, u, n_));
      if (seen[c]) continue;
      seen[c] = 1;
      parent[c] = static_cast<std::uint8_t>(l);
      queue.push_back(c);
    }
  }
  if (!seen[goal]) return std::nullopt;
  BlockWord w;
  BlockPair cur = to;
  for (std::uint8_t p = parent[code(cur)]; p != kNone; p = parent[code(cur)]) {
    const auto l = static_cast<BlockLetter>(p);
    w.letters.push_back(l);
    cur = apply_letter(inverse_letter(l), cur, n_);
  }
  std::reverse(w.letters.begin(), w.letters.end());
  return w;
}

}  // namespace gnorb
