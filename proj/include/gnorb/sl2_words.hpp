#pragma once

// Word calculus inside one (alpha_i, beta_i) block, where A_i and B_i act by
//   L = [[1, 0], [-1, 1]]   and   R = [[1, 1], [0, 1]].

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "gnorb/mcg_action.hpp"
#include "gnorb/modular.hpp"

namespace gnorb {

enum class BlockLetter : std::uint8_t { L, Linv, R, Rinv };

inline constexpr std::array<BlockLetter, 4> kBlockLetters = {BlockLetter::L, BlockLetter::Linv,
                                                             BlockLetter::R, BlockLetter::Rinv};

// Row-major 2x2 matrix over Z/nZ.
struct BlockMatrix {
  std::array<Residue, 4> m{1, 0, 0, 1};
  std::int64_t n = 1;

  static BlockMatrix identity(std::int64_t n) { return {{1 % n, 0, 0, 1 % n}, n}; }
  static BlockMatrix of(BlockLetter letter, std::int64_t n);
  Residue det() const;
  BlockMatrix operator*(const BlockMatrix& o) const;
  std::array<Residue, 2> apply(std::array<Residue, 2> v) const;

  friend bool operator==(const BlockMatrix&, const BlockMatrix&) = default;
};

using BlockPair = std::array<Residue, 2>;

// Letters act left to right, like GeneratorWord tokens.
struct BlockWord {
  std::vector<BlockLetter> letters;

  bool empty() const { return letters.empty(); }
  std::size_t size() const { return letters.size(); }
  BlockMatrix matrix(std::int64_t n) const;
  BlockPair apply(BlockPair v, std::int64_t n) const;
  // L -> A_block, R -> B_block, inverse letters as exponent -1.
  GeneratorWord to_generators(int block) const;
};

BlockPair apply_letter(BlockLetter letter, BlockPair v, std::int64_t n);
BlockLetter inverse_letter(BlockLetter letter);

struct Sl2Element {
  BlockMatrix matrix;
  BlockWord witness;  // a shortest word realizing matrix
};

inline constexpr std::uint64_t kDefaultSl2Cap = std::uint64_t{1} << 24;

// Breadth-first closure of {L, R, L^-1, R^-1} in 2x2 matrices over Z/nZ.
// Throws BudgetError when n^4 exceeds `cap`.
std::vector<Sl2Element> generate_sl2(std::int64_t n, std::uint64_t cap = kDefaultSl2Cap);

// n^3 * prod_{p | n} (1 - p^-2), in exact integer arithmetic.
std::uint64_t sl2_order_formula(std::int64_t n);

// gcd(alpha, beta, n): the SL(2, Z/nZ) orbit invariant of a pair.
std::int64_t pair_content(BlockPair v, std::int64_t n);

// Shortest-word tables over (Z/nZ)^2 for one modulus. Immutable after
// construction; share across threads via Sl2Solver::shared().
class Sl2Solver {
 public:
  explicit Sl2Solver(std::int64_t n);

  static std::shared_ptr<const Sl2Solver> shared(std::int64_t n);

  std::int64_t modulus() const { return n_; }

  // Shortest word taking v to a pair of the form (0, beta').
  BlockWord clear_alpha(BlockPair v) const;

  // Shortest word taking `from` to `to`, or nullopt when their contents
  // differ (no SL(2) word can connect them).
  std::optional<BlockWord> solve_pair(BlockPair from, BlockPair to) const;

 private:
  std::size_t code(BlockPair v) const {
    return static_cast<std::size_t>(v[0]) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(v[1]);
  }
  BlockPair pair_of(std::size_t c) const {
    return {static_cast<Residue>(c / n_), static_cast<Residue>(c % n_)};
  }

  std::int64_t n_;
  // For every pair: the first letter of a shortest word to alpha = 0, or 0xFF
  // when alpha is already 0.
  std::vector<std::uint8_t> clear_step_;
};

inline constexpr std::int64_t kMaxSolverModulus = 1 << 12;

}  // namespace gnorb
