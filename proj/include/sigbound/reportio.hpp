#pragma once

// File formats shared by every subcommand: matrix CSV (+ JSON sidecar),
// label files, score files and versioned JSON reports. FORMATS.md is the
// normative description.

#include "sigbound/labelspace.hpp"
#include "sigbound/linalg.hpp"
#include "sigbound/metrics.hpp"
#include "sigbound/oracle.hpp"
#include "sigbound/verifier.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sigbound::io {

using nlohmann::json;

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

// ---- matrices -------------------------------------------------------------

/// Parses CSV text: one row per line, comma-separated decimal floats, no
/// header. Blank lines are ignored. Throws ParseError with line/column.
Matrix parse_csv_matrix(std::string_view text, const std::string& source = "<memory>");

std::string matrix_to_csv(const Matrix& m);

/// Sidecar path for a matrix file: "<path>.json".
std::filesystem::path sidecar_path(const std::filesystem::path& matrix_path);

json provenance_to_json(const Provenance& p, std::size_t n, std::size_t d);
Provenance provenance_from_json(const json& j);

/// Reads the CSV and, when present, its sidecar; provenance defaults to Random.
WeightMatrix parse_matrix(const std::filesystem::path& path);

/// Writes the CSV and its sidecar.
void write_matrix(const std::filesystem::path& path, const WeightMatrix& w);

// ---- labels ---------------------------------------------------------------

/// Dense lines ("+--+") or sparse lines of 1-based active indices ("1,4")
/// under a mandatory "n=<int>" header; a line may also carry its own size
/// ("n=4; 1,4"). Lines starting with '#' are comments.
std::vector<LabelAssignment> parse_labels_text(std::string_view text,
                                               const std::string& source = "<memory>");
std::vector<LabelAssignment> parse_labels(const std::filesystem::path& path);

std::string labels_to_dense(std::span<const LabelAssignment> ys);
std::string labels_to_sparse(std::span<const LabelAssignment> ys);

// ---- scores ---------------------------------------------------------------

/// One record per line, same CSV grammar as matrices.
Matrix parse_scores(const std::filesystem::path& path);

/// Pairs score rows with gold assignments; counts and lengths must match.
std::vector<PredictionRecord> make_records(const Matrix& scores,
                                           std::span<const LabelAssignment> gold);

// ---- reports --------------------------------------------------------------

/// Common wrapper for every JSON report. Payload keys sit next to the
/// envelope keys at the top level of the serialized object.
struct ReportEnvelope {
    int schema_version = kSchemaVersion;
    std::string tool_version{kToolVersion};
    std::string command;
    json config = json::object();
    std::optional<std::string> timestamp;  // null when deterministic
    json payload = json::object();

    friend bool operator==(const ReportEnvelope&, const ReportEnvelope&) = default;
};

/// Pretty-printed JSON with sorted keys and a trailing newline.
std::string serialize(const ReportEnvelope& report);

/// Throws ParseError on malformed JSON or missing envelope keys.
ReportEnvelope parse_report(std::string_view text);

/// Current UTC time as ISO-8601.
std::string utc_timestamp();

json lp_config_to_json(const LpConfig& cfg);
json matrix_summary_json(const WeightMatrix& w);
json verify_result_json(std::size_t index, const VerifyResult& r, bool include_timing);
json batch_summary_json(const BatchSummary& s);
json region_set_json(const RegionSet& regions);
json gr_status_json(const GrStatus& status, bool general_position, double tau_det);

}  // namespace sigbound::io
