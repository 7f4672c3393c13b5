#pragma once

// JSON / CSV / plain-text rendering of engine and cocycle reports.
//
// Orbit JSON schema:
//   {"g", "n", "generators": "mod"|"mod_pm", "orbit_count",
//    "orbits": [{"representative": [..], "size", "vanishing_number": int|null}],
//    "elapsed_ms", "threads"}
// plus "watermark" when n does not divide 2g - 2.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "gnorb/euler_cocycle.hpp"
#include "gnorb/orbit_engine.hpp"

namespace gnorb {

enum class Format { Json, Csv, Text };

Format parse_format(std::string_view text);

inline constexpr const char* kOutsideRegimeWatermark = "n does not divide 2g-2; outside the covering regime";

nlohmann::ordered_json to_json(const OrbitReport& r);
// Header line, then one row per orbit: index,size,vanishing_number,representative
std::string to_csv(const OrbitReport& r);
std::string to_text(const OrbitReport& r);

nlohmann::ordered_json to_json(const CocycleSample& s);
nlohmann::ordered_json cocycle_report_json(const std::vector<CocycleSample>& samples, int genus, std::uint64_t seed);

}  // namespace gnorb
