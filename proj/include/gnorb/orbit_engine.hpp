#pragma once

// Exhaustive orbit enumeration over all n^{2g} states.
//
// Level-synchronous BFS with a bit-packed visited set updated by atomic
// fetch_or. Small frontiers are kept as index lists, large ones as bitmaps.
// Orbits are seeded in increasing StateIndex order, so every representative
// is the minimal index of its orbit regardless of thread count.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gnorb/gn_space.hpp"
#include "gnorb/mcg_action.hpp"

namespace gnorb {

enum class GeneratorSet { Mod, ModPm };

std::string to_string(GeneratorSet gs);
GeneratorSet parse_generator_set(std::string_view text);

// A_i^{+-1}, B_i^{+-1}, C_i^{+-1}, plus s for ModPm.
std::vector<Generator> generator_list(GeneratorSet gs, const SpaceParams& p);

struct OrbitInfo {
  GnElement representative;
  std::uint64_t size = 0;
  std::optional<int> vanishing_number;
};

struct OrbitReport {
  SpaceParams params;
  GeneratorSet generators = GeneratorSet::Mod;
  std::vector<OrbitInfo> orbits;
  std::int64_t elapsed_ms = 0;
  unsigned threads = 1;
  int max_depth = 0;

  std::size_t orbit_count() const { return orbits.size(); }
};

inline constexpr std::uint64_t kParentsDefaultLimit = 10'000'000;
inline constexpr const char* kBudgetEnvVar = "GNORB_MEMORY_BUDGET";

// Budget from GNORB_MEMORY_BUDGET (bytes), else 2 GiB.
std::uint64_t default_memory_budget();

struct EnumerationOptions {
  GeneratorSet generators = GeneratorSet::Mod;
  unsigned threads = 1;
  // Defaults to on when n^{2g} <= kParentsDefaultLimit.
  std::optional<bool> record_parents;
  // Per-state orbit number (4 bytes per state).
  bool record_labels = false;
  std::uint64_t memory_budget = default_memory_budget();
};

// Bytes the enumeration would allocate for these options; 0 if the state
// count overflows.
std::uint64_t required_memory(const SpaceParams& p, const EnumerationOptions& opt);

struct PathCertificate {
  GeneratorWord word;  // replays representative -> element
  GnElement representative;
  GnElement element;
};

class OrbitEnumeration {
 public:
  const OrbitReport& report() const { return report_; }
  bool has_parents() const { return !parents_.empty(); }
  bool has_labels() const { return !labels_.empty(); }

  // Index into report().orbits. Requires labels.
  std::uint32_t orbit_of(StateIndex i) const;
  std::uint32_t orbit_of(const GnElement& x) const { return orbit_of(encode(x)); }

  // Word from the representative of x's orbit to x. Throws Error when
  // parents were not recorded.
  PathCertificate trace_path(const GnElement& x) const;
  // Word from `representative` to x, or nullopt if x lies in another orbit.
  std::optional<PathCertificate> trace_path_from(const GnElement& representative,
                                                 const GnElement& x) const;

 private:
  friend OrbitEnumeration enumerate(const SpaceParams&, const EnumerationOptions&);

  OrbitReport report_;
  std::vector<Generator> gens_;
  std::vector<std::uint8_t> parents_;
  std::vector<std::uint32_t> labels_;
};

// Throws BudgetError (with the required byte count) when the state space
// does not fit the memory budget.
OrbitEnumeration enumerate(const SpaceParams& p, const EnumerationOptions& opt = {});

OrbitReport enumerate_orbits(const SpaceParams& p, GeneratorSet gens, unsigned threads = 1);

}  // namespace gnorb
