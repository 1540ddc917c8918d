#pragma once

#include <afy/alpha_cf.hpp>
#include <afy/ergodic.hpp>
#include <afy/farey.hpp>
#include <afy/measure.hpp>
#include <afy/natural_ext.hpp>

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace afy {

inline constexpr const char* kToolName = "alphafarey";
inline constexpr const char* kToolVersion = "0.1.0";

// Run parameters stamped into every emitted file.  Equal metas plus equal
// inputs produce byte-identical output.
struct RunMeta {
    ExactReal alpha = ExactReal::rational(1, 1);
    std::uint64_t seed = 0;
    long precision = 0;  // working precision in bits, 0 for exact arithmetic
};

// "# alphafarey v0.1.0 alpha=<...> seed=<...> precision=<...>\n"
std::string text_header(const RunMeta& meta);
nlohmann::json meta_json(const RunMeta& meta);

// Shortest decimal that round-trips the double; "-inf" for the infinite
// history marker.  Plot data only; exact values travel as canonical text.
std::string double_text(double v);
std::string extended_text(const ExtendedValue& y);

std::string kind_text(EntryKind k);
std::string region_text(RegionKind k);
std::string system_text(PlanarSystem s);
std::string family_text(CylinderFamily f);
// Symbol classes print as a letter and the index: "m2", "p1", "z2".
std::string symbol_text(const DeltaSymbol& s);
// "flat1:m2.z2", "alpha-cf:2.-3", with the window origin appended for
// planar window specs ("gauss-planar:1@-1").
std::string spec_text(const CylinderSpec& spec);

// Digit expansion with its convergents and orbit.  Digits are [eps, a]
// pairs, convergents [p, q] pairs; arbitrary-size integers travel as
// decimal strings.
nlohmann::json expansion_json(const RunMeta& meta, const AlphaExpansion& e);
std::string expansion_csv(const RunMeta& meta, const AlphaExpansion& e);

// Mediant stream, columns k, p, q, kind, n, ell.
nlohmann::json stream_json(const RunMeta& meta, const MediantStream& s);
std::string stream_csv(const RunMeta& meta, const MediantStream& s);

// Plain orbit of a scalar map, columns n, x.
nlohmann::json orbit_json(const RunMeta& meta, const std::vector<ExactReal>& xs);
std::string orbit_csv(const RunMeta& meta, const std::vector<ExactReal>& xs);

// Planar domain cloud, columns x, y, tag.  The SVG is a static scatter
// with reference lines at the system's landmark coordinates.
nlohmann::json cloud_json(const RunMeta& meta, const DomainCloud& c);
std::string cloud_csv(const RunMeta& meta, const DomainCloud& c);
std::string cloud_svg(const RunMeta& meta, const DomainCloud& c);

nlohmann::json measure_json(const RunMeta& meta, const std::string& what,
                            const MeasureEstimate& est);
nlohmann::json normality_json(const RunMeta& meta, const NormalityReport& rep);
nlohmann::json matching_json(const RunMeta& meta, std::size_t max_steps,
                             const std::optional<MatchingResult>& m);
nlohmann::json thin_json(const RunMeta& meta, const ExactReal& eps, std::size_t max_len,
                         const std::optional<ThinCylinder>& t);

// Canonical dump: two-space indent, keys sorted, trailing newline.
std::string json_text(const nlohmann::json& j);

}  // namespace afy
