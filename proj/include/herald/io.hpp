#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "herald/analysis.hpp"
#include "herald/schemes.hpp"
#include "herald/verify.hpp"

namespace herald::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kToolVersion = "0.3.0";

/// "30deg", "0.5236rad" or a bare number (radians).
double parse_angle(std::string_view text);

/// Cutoff from FOCK_CUTOFF when set, otherwise the default.
int default_cutoff();

json config_to_json(const SchemeConfig& cfg);
SchemeConfig config_from_json(const json& j);

json result_to_json(const SchemeConfig& cfg, const SchemeResult& r);

/// 64-bit FNV-1a, printed as 16 hex digits.
std::uint64_t fnv1a64(std::string_view bytes);
std::string config_hash(const json& canonical_config);

/// UTC timestamp; SOURCE_DATE_EPOCH pins it for reproducible output.
std::string timestamp_now();

json make_manifest(std::string kind, const std::vector<std::string>& command, const json& config, json result);

/// Sweep specification file. Axes are either arrays of values or
/// {"start", "stop", "count"} objects; angles take the same units as the CLI.
SweepSpec sweep_from_json(const json& j);
json sweep_to_json(const SweepSpec& spec);

/// CSV with a header row and CRLF line endings.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
/// Whitespace-separated columns with a '#' header, for plotting tools.
void write_sweep_points(std::ostream& out, const std::vector<SweepRow>& rows);

/// Quotes a CSV field when it contains a comma, quote or line break.
std::string csv_field(std::string_view text);

json checks_to_json(const std::vector<verify::CheckResult>& checks);

}  // namespace herald::io
