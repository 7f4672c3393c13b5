#include "gnorb/orbit_engine.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <thread>

#include "gnorb/errors.hpp"
#include "gnorb/invariants.hpp"

namespace gnorb {

std::string to_string(GeneratorSet gs) { return gs == GeneratorSet::Mod ? "mod" : "mod_pm"; }

GeneratorSet parse_generator_set(std::string_view text) {
  if (text == "mod") return GeneratorSet::Mod;
  if (text == "mod_pm") return GeneratorSet::ModPm;
  throw ParseError("unknown generator set '" + std::string(text) + "' (expected mod or mod_pm)", 0);
}

std::vector<Generator> generator_list(GeneratorSet gs, const SpaceParams& p) {
  std::vector<Generator> out;
  for (int i = 1; i <= p.g; ++i) {
    out.push_back(Generator::a(i));
    out.push_back(Generator::a(i, -1));
    out.push_back(Generator::b(i));
    out.push_back(Generator::b(i, -1));
  }
  for (int i = 1; i < p.g; ++i) {
    out.push_back(Generator::c(i));
    out.push_back(Generator::c(i, -1));
  }
  if (gs == GeneratorSet::ModPm) out.push_back(Generator::s());
  return out;
}

std::uint64_t default_memory_budget() {
  if (const char* env = std::getenv(kBudgetEnvVar)) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v > 0) return static_cast<std::uint64_t>(v);
  }
  return std::uint64_t{2} << 30;
}

namespace {

constexpr std::uint8_t kUnvisited = 0xFF;
constexpr std::uint8_t kRoot = 0xFE;

bool parents_enabled(const SpaceParams& p, const EnumerationOptions& opt) {
  return opt.record_parents.value_or(p.state_count() <= kParentsDefaultLimit);
}

// A generator compiled to index deltas. For a state whose block codes are
// b_1..b_g (b_i = alpha_i + n beta_i), the image index is idx + delta.
struct CompiledGenerator {
  enum class Shape { Block, Pair, Reflect } shape;
  int block = 0;                   // 0-based
  std::vector<std::int64_t> delta;  // pre-multiplied by n^{2 block}
};

std::vector<CompiledGenerator> compile(const std::vector<Generator>& gens, const SpaceParams& p) {
  const std::int64_t n = p.n;
  const std::int64_t nn = n * n;
  std::vector<std::int64_t> scale(p.g + 1, 1);
  for (int i = 1; i <= p.g; ++i) scale[i] = scale[i - 1] * nn;

  std::vector<CompiledGenerator> out;
  for (const auto& gen : gens) {
    CompiledGenerator cg;
    cg.block = std::max(gen.index, 1) - 1;
    std::vector<std::int64_t> coords(p.dim(), 0);
    auto block_code = [&](int b) { return coords[2 * b] + n * coords[2 * b + 1]; };
    switch (gen.kind) {
      case GenKind::A:
      case GenKind::B:
        cg.shape = CompiledGenerator::Shape::Block;
        cg.delta.resize(nn);
        for (std::int64_t c = 0; c < nn; ++c) {
          std::fill(coords.begin(), coords.end(), 0);
          coords[2 * cg.block] = c % n;
          coords[2 * cg.block + 1] = c / n;
          apply_generator_inplace(gen, coords, n);
          cg.delta[c] = (block_code(cg.block) - c) * scale[cg.block];
        }
        break;
      case GenKind::C:
        cg.shape = CompiledGenerator::Shape::Pair;
        cg.delta.resize(nn * nn);
        for (std::int64_t c = 0; c < nn * nn; ++c) {
          std::fill(coords.begin(), coords.end(), 0);
          const std::int64_t lo = c % nn, hi = c / nn;
          coords[2 * cg.block] = lo % n;
          coords[2 * cg.block + 1] = lo / n;
          coords[2 * cg.block + 2] = hi % n;
          coords[2 * cg.block + 3] = hi / n;
          apply_generator_inplace(gen, coords, n);
          const std::int64_t after = block_code(cg.block) + nn * block_code(cg.block + 1);
          cg.delta[c] = (after - c) * scale[cg.block];
        }
        break;
      case GenKind::S:
        cg.shape = CompiledGenerator::Shape::Reflect;
        cg.block = 0;
        cg.delta.resize(static_cast<std::size_t>(p.g) * nn);
        for (int b = 0; b < p.g; ++b)
          for (std::int64_t c = 0; c < nn; ++c) {
            const std::int64_t alpha = c % n, beta = c / n;
            const std::int64_t after = mod_reduce(-alpha, n) + n * beta;
            cg.delta[b * nn + c] = (after - c) * scale[b];
          }
        break;
      case GenKind::D:
        continue;
    }
    out.push_back(std::move(cg));
  }
  return out;
}

std::uint64_t table_bytes(const SpaceParams& p, const std::vector<Generator>& gens) {
  const std::uint64_t nn = static_cast<std::uint64_t>(p.n) * static_cast<std::uint64_t>(p.n);
  std::uint64_t total = 0;
  for (const auto& g : gens) {
    if (g.kind == GenKind::C) total += nn * nn * 8;
    else if (g.kind == GenKind::S) total += nn * p.g * 8;
    else total += nn * 8;
  }
  return total;
}

class AtomicBitmap {
 public:
  explicit AtomicBitmap(std::uint64_t bits)
      : words_((bits + 63) / 64), data_(new std::atomic<std::uint64_t>[words_]) {
    clear();
  }
  std::uint64_t words() const { return words_; }
  bool test(std::uint64_t i) const {
    return (data_[i >> 6].load(std::memory_order_relaxed) >> (i & 63)) & 1u;
  }
  // True when this call set the bit.
  bool set(std::uint64_t i) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    return !(data_[i >> 6].fetch_or(mask, std::memory_order_relaxed) & mask);
  }
  void reset(std::uint64_t i) {
    data_[i >> 6].fetch_and(~(std::uint64_t{1} << (i & 63)), std::memory_order_relaxed);
  }
  std::uint64_t word(std::uint64_t w) const { return data_[w].load(std::memory_order_relaxed); }
  void clear() {
    for (std::uint64_t w = 0; w < words_; ++w) data_[w].store(0, std::memory_order_relaxed);
  }
  void swap(AtomicBitmap& o) noexcept {
    std::swap(words_, o.words_);
    std::swap(data_, o.data_);
  }

 private:
  std::uint64_t words_;
  std::unique_ptr<std::atomic<std::uint64_t>[]> data_;
};

struct WorkerOut {
  std::vector<std::uint64_t> list;
  std::uint64_t discovered = 0;
  bool overflow = false;
};

class Engine {
 public:
  Engine(const SpaceParams& p, const std::vector<Generator>& gens, unsigned threads,
         std::vector<std::uint8_t>* parents, std::vector<std::uint32_t>* labels)
      : p_(p),
        total_(p.state_count()),
        nn_(static_cast<std::uint64_t>(p.n) * static_cast<std::uint64_t>(p.n)),
        gens_(compile(gens, p)),
        threads_(std::max(1u, threads)),
        visited_(total_),
        frontier_bits_(total_),
        next_bits_(total_),
        parents_(parents),
        labels_(labels) {
    sparse_cap_ = std::max<std::uint64_t>(total_ / 64, 4096);
  }

  // Runs BFS from `seed`; returns the orbit size.
  std::uint64_t explore(std::uint64_t seed, std::uint32_t orbit, int* depth) {
    visited_.set(seed);
    if (parents_) (*parents_)[seed] = kRoot;
    if (labels_) (*labels_)[seed] = orbit;
    orbit_ = orbit;
    std::vector<std::uint64_t> sparse{seed};
    bool dense = false;
    std::uint64_t size = 1;
    int level = 0;
    while (true) {
      std::vector<WorkerOut> outs(threads_);
      const std::uint64_t cap = sparse_cap_ / threads_ + 1;
      auto work = [&](unsigned t) {
        WorkerOut& out = outs[t];
        if (dense) {
          const std::uint64_t w0 = frontier_bits_.words() * t / threads_;
          const std::uint64_t w1 = frontier_bits_.words() * (t + 1) / threads_;
          for (std::uint64_t w = w0; w < w1; ++w) {
            std::uint64_t bits = frontier_bits_.word(w);
            while (bits) {
              const int b = std::countr_zero(bits);
              bits &= bits - 1;
              expand(w * 64 + static_cast<std::uint64_t>(b), out, cap);
            }
          }
        } else {
          const std::size_t i0 = sparse.size() * t / threads_;
          const std::size_t i1 = sparse.size() * (t + 1) / threads_;
          for (std::size_t i = i0; i < i1; ++i) expand(sparse[i], out, cap);
        }
      };
      if (threads_ == 1) {
        work(0);
      } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads_; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
      }

      std::uint64_t found = 0;
      bool overflow = false;
      for (const auto& o : outs) {
        found += o.discovered;
        overflow = overflow || o.overflow;
      }
      if (dense) frontier_bits_.clear();
      if (found == 0) break;
      ++level;
      size += found;
      if (overflow) {
        frontier_bits_.swap(next_bits_);
        dense = true;
      } else {
        sparse.clear();
        for (auto& o : outs) {
          for (auto v : o.list) next_bits_.reset(v);
          sparse.insert(sparse.end(), o.list.begin(), o.list.end());
        }
        dense = false;
      }
    }
    if (depth) *depth = std::max(*depth, level);
    return size;
  }

  // Smallest unvisited index >= from, or total_ if none.
  std::uint64_t next_unvisited(std::uint64_t from) const {
    for (std::uint64_t w = from / 64; w < visited_.words(); ++w) {
      std::uint64_t free_bits = ~visited_.word(w);
      if (w == from / 64) free_bits &= ~std::uint64_t{0} << (from % 64);
      if (free_bits) {
        const std::uint64_t i = w * 64 + static_cast<std::uint64_t>(std::countr_zero(free_bits));
        return std::min(i, total_);
      }
    }
    return total_;
  }

  std::uint64_t total() const { return total_; }

 private:
  void expand(std::uint64_t idx, WorkerOut& out, std::uint64_t cap) {
    std::uint64_t codes[64];
    std::uint64_t v = idx;
    for (int i = 0; i < p_.g; ++i) {
      codes[i] = v % nn_;
      v /= nn_;
    }
    for (std::size_t gi = 0; gi < gens_.size(); ++gi) {
      const CompiledGenerator& cg = gens_[gi];
      std::int64_t delta;
      switch (cg.shape) {
        case CompiledGenerator::Shape::Block:
          delta = cg.delta[codes[cg.block]];
          break;
        case CompiledGenerator::Shape::Pair:
          delta = cg.delta[codes[cg.block] + nn_ * codes[cg.block + 1]];
          break;
        default:
          delta = 0;
          for (int b = 0; b < p_.g; ++b) delta += cg.delta[b * nn_ + codes[b]];
          break;
      }
      const std::uint64_t nb = idx + static_cast<std::uint64_t>(delta);
      if (visited_.test(nb) || !visited_.set(nb)) continue;
      if (parents_) (*parents_)[nb] = static_cast<std::uint8_t>(gi);
      if (labels_) (*labels_)[nb] = orbit_;
      ++out.discovered;
      next_bits_.set(nb);
      if (!out.overflow) {
        if (out.list.size() < cap) out.list.push_back(nb);
        else out.overflow = true;
      }
    }
  }

  SpaceParams p_;
  std::uint64_t total_;
  std::uint64_t nn_;
  std::vector<CompiledGenerator> gens_;
  unsigned threads_;
  AtomicBitmap visited_;
  AtomicBitmap frontier_bits_;
  AtomicBitmap next_bits_;
  std::vector<std::uint8_t>* parents_;
  std::vector<std::uint32_t>* labels_;
  std::uint64_t sparse_cap_ = 0;
  std::uint32_t orbit_ = 0;
};

}  // namespace

std::uint64_t required_memory(const SpaceParams& p, const EnumerationOptions& opt) {
  const std::uint64_t total = p.state_count();
  if (total == 0 || total > (std::uint64_t{1} << 50)) return 0;
  const std::uint64_t bitmap = (total + 63) / 64 * 8;
  std::uint64_t bytes = 3 * bitmap + 2 * std::max<std::uint64_t>(total / 64, 4096) * 8;
  bytes += table_bytes(p, generator_list(opt.generators, p));
  if (parents_enabled(p, opt)) bytes += total;
  if (opt.record_labels) bytes += total * 4;
  return bytes;
}

OrbitEnumeration enumerate(const SpaceParams& p, const EnumerationOptions& opt) {
  const std::uint64_t need = required_memory(p, opt);
  if (need == 0 || need > opt.memory_budget)
    throw BudgetError("enumeration of g=" + std::to_string(p.g) + ", n=" + std::to_string(p.n) +
                          " needs " + (need ? std::to_string(need) : std::string("> 2^53")) +
                          " bytes; budget is " + std::to_string(opt.memory_budget) +
                          " (set " + kBudgetEnvVar + " to raise it)",
                      need ? need : SIZE_MAX);

  const auto start = std::chrono::steady_clock::now();
  OrbitEnumeration out;
  out.gens_ = generator_list(opt.generators, p);
  if (out.gens_.size() >= kRoot) throw ParamError("too many generators for parent links");
  const std::uint64_t total = p.state_count();
  if (parents_enabled(p, opt)) out.parents_.assign(total, kUnvisited);
  if (opt.record_labels) out.labels_.assign(total, 0);

  Engine engine(p, out.gens_, opt.threads, out.parents_.empty() ? nullptr : &out.parents_,
                out.labels_.empty() ? nullptr : &out.labels_);
  OrbitReport& rep = out.report_;
  rep.params = p;
  rep.generators = opt.generators;
  rep.threads = std::max(1u, opt.threads);
  for (std::uint64_t seed = engine.next_unvisited(0); seed < total;
       seed = engine.next_unvisited(seed + 1)) {
    const auto orbit = static_cast<std::uint32_t>(rep.orbits.size());
    OrbitInfo info;
    info.size = engine.explore(seed, orbit, &rep.max_depth);
    info.representative = decode(StateIndex{seed}, p);
    info.vanishing_number = vanishing_number_if_defined(info.representative, p);
    rep.orbits.push_back(std::move(info));
  }
  rep.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return out;
}

OrbitReport enumerate_orbits(const SpaceParams& p, GeneratorSet gens, unsigned threads) {
  EnumerationOptions opt;
  opt.generators = gens;
  opt.threads = threads;
  opt.record_parents = false;
  return enumerate(p, opt).report();
}

std::uint32_t OrbitEnumeration::orbit_of(StateIndex i) const {
  if (labels_.empty()) throw Error("orbit labels were not recorded");
  if (i.value >= labels_.size()) throw RangeError("state index out of range");
  return labels_[i.value];
}

PathCertificate OrbitEnumeration::trace_path(const GnElement& x) const {
  if (parents_.empty()) throw Error("parent links were not recorded for this enumeration");
  const SpaceParams& p = report_.params;
  if (x.dim() != p.dim() || x.modulus() != p.n) throw DimensionError("element does not belong to this space");
  std::vector<Generator> rev;
  GnElement cur = x;
  std::uint64_t idx = encode(cur).value;
  while (parents_[idx] != kRoot) {
    const std::uint8_t gi = parents_[idx];
    if (gi == kUnvisited) throw Error("state was never reached");
    rev.push_back(gens_[gi]);
    cur = apply_generator(gens_[gi].inverse(), cur, p);
    idx = encode(cur).value;
  }
  PathCertificate cert;
  cert.word.tokens.assign(rev.rbegin(), rev.rend());
  cert.representative = cur;
  cert.element = x;
  return cert;
}

std::optional<PathCertificate> OrbitEnumeration::trace_path_from(const GnElement& representative,
                                                                 const GnElement& x) const {
  PathCertificate cert = trace_path(x);
  if (!(cert.representative == representative)) return std::nullopt;
  return cert;
}

}  // namespace gnorb
