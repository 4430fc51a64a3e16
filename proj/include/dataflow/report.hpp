#ifndef DATAFLOW_REPORT_HPP
#define DATAFLOW_REPORT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace dataflow {

/// One evaluated record: a dataset, a layer, or one subset size.
struct ReportRecord {
    std::string name;
    double value = 0.0;
    std::optional<std::int64_t> matches;      // separation indices only
    std::optional<std::size_t> size;          // subset curves only
    std::optional<double> test_value;         // overlay from a test manifest
    std::optional<std::int64_t> test_matches;
    std::optional<double> ccr;                // externally supplied, joined for co-plotting
};

/// Canonical run output. JSON is the source of truth; CSV and SVG are derived
/// views of `records`. Everything except `generated_at` is a pure function of
/// inputs and flags, so re-runs are byte-identical up to the timestamp.
struct IndexReport {
    std::string command;             // subcommand name
    std::vector<std::string> argv;   // full invocation, echoed for audit
    std::string generated_at;        // ISO-8601 UTC
    std::string index_kind;          // "si" or "smi"

    std::size_t order = 1;
    double beta = 0.0;               // 0 when not applicable
    std::optional<std::uint64_t> seed;
    int threads = 0;
    bool whitened = false;
    std::optional<std::size_t> quantize_levels;

    std::vector<std::pair<std::string, std::string>> inputs;  // (path, fnv1a64 digest)
    std::vector<ReportRecord> records;

    nlohmann::ordered_json extra;    // command-specific fields (quantization spec, ...)

    double summary_min() const;
    double summary_max() const;
};

std::string current_utc_timestamp();

nlohmann::ordered_json report_to_json(const IndexReport& report);
std::string report_to_csv(const IndexReport& report);
std::string report_to_svg(const IndexReport& report);

/// Writes `<base>.json` plus one derived view per entry of `formats`
/// ("csv" / "svg"; "json" is implied).
void write_report(const IndexReport& report, const std::filesystem::path& base,
                  const std::vector<std::string>& formats);

} // namespace dataflow

#endif
