#include "gnorb/report_io.hpp"

#include <sstream>

#include "gnorb/errors.hpp"

namespace gnorb {

Format parse_format(std::string_view text) {
  if (text == "json") return Format::Json;
  if (text == "csv") return Format::Csv;
  if (text == "text") return Format::Text;
  throw ParseError("unknown format '" + std::string(text) + "' (json|csv|text)", 0);
}

nlohmann::ordered_json to_json(const OrbitReport& r) {
  nlohmann::ordered_json orbits = nlohmann::ordered_json::array();
  for (const auto& o : r.orbits) {
    nlohmann::ordered_json rep = nlohmann::ordered_json::array();
    for (Residue v : o.representative.coords()) rep.push_back(v);
    orbits.push_back({{"representative", rep},
                      {"size", o.size},
                      {"vanishing_number", o.vanishing_number ? nlohmann::ordered_json(*o.vanishing_number) : nlohmann::ordered_json()}});
  }
  nlohmann::ordered_json j = {{"g", r.params.g},
                      {"n", r.params.n},
                      {"generators", to_string(r.generators)},
                      {"orbit_count", r.orbit_count()},
                      {"orbits", orbits},
                      {"elapsed_ms", r.elapsed_ms},
                      {"threads", r.threads}};
  if (!r.params.euler_divisible()) j["watermark"] = kOutsideRegimeWatermark;
  return j;
}

std::string to_csv(const OrbitReport& r) {
  std::ostringstream out;
  out << "orbit,size,vanishing_number,representative\n";
  for (std::size_t k = 0; k < r.orbits.size(); ++k) {
    const auto& o = r.orbits[k];
    out << k << ',' << o.size << ',';
    if (o.vanishing_number) out << *o.vanishing_number;
    out << ",\"" << format_element(o.representative) << "\"\n";
  }
  return out.str();
}

std::string to_text(const OrbitReport& r) {
  std::ostringstream out;
  out << "g=" << r.params.g << " n=" << r.params.n << " generators=" << to_string(r.generators)
      << " orbits=" << r.orbit_count() << " (" << r.elapsed_ms << " ms, " << r.threads << " threads)\n";
  if (!r.params.euler_divisible()) out << "warning: " << kOutsideRegimeWatermark << '\n';
  for (std::size_t k = 0; k < r.orbits.size(); ++k) {
    const auto& o = r.orbits[k];
    out << "  #" << k << "  size " << o.size << "  rep " << format_element(o.representative);
    if (o.vanishing_number) out << "  vanishing " << *o.vanishing_number;
    out << '\n';
  }
  return out.str();
}

nlohmann::ordered_json to_json(const CocycleSample& s) {
  nlohmann::ordered_json j = {{"w1", format_surface_word(s.w1)},
                      {"w2", format_surface_word(s.w2)},
                      {"c", s.c},
                      {"residual", s.residual}};
  j["axes_cross"] = s.axes_cross ? nlohmann::ordered_json(*s.axes_cross) : nlohmann::ordered_json();
  return j;
}

nlohmann::ordered_json cocycle_report_json(const std::vector<CocycleSample>& samples, int genus, std::uint64_t seed) {
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& s : samples) list.push_back(to_json(s));
  return {{"genus", genus}, {"seed", seed}, {"samples", list}};
}

}  // namespace gnorb
