#ifndef DATAFLOW_IO_HPP
#define DATAFLOW_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "dataflow/matrix.hpp"

namespace dataflow {

enum class FileFormat { csv, tensor };

// Binary tensor layout: magic "DFLW", version byte 0x01, little-endian u32
// rank, rank x u64 dims, then row-major IEEE-754 f64 payload. No padding;
// round-trips are bit-exact.

/// Loads a matrix in the stated format. CSV is RFC-4180-style with an optional
/// header row (auto-detected); rank-1 tensors load as Q x 1. Throws ParseError
/// with line/offset context on malformed input, ValidationError on non-finite
/// entries.
Matrix load_matrix(const std::filesystem::path& path, FileFormat format);

/// Sniffs the format: "DFLW" magic means tensor, anything else is parsed as CSV.
Matrix load_matrix_auto(const std::filesystem::path& path);
FileFormat detect_format(const std::filesystem::path& path);

/// Loads integer labels from a one-column CSV or rank-1 tensor and range-checks
/// them against declared_classes (0 = infer as the maximum label).
Labels load_labels(const std::filesystem::path& path, std::int32_t declared_classes = 0);

/// Extracts one column of a CSV as a scalar series.
std::vector<double> load_series_column(const std::filesystem::path& path, std::size_t column);

void save_matrix_csv(const std::filesystem::path& path, const Matrix& m);
void save_tensor(const std::filesystem::path& path, const Matrix& m);
void save_labels_csv(const std::filesystem::path& path, const Labels& labels);

/// Picks the output format from the file extension: ".dflw" / ".bin" write the
/// binary tensor, anything else CSV.
void save_matrix_auto(const std::filesystem::path& path, const Matrix& m);

/// Ordered, named activation snapshots of one sample set, plus the shared
/// labels or targets they are evaluated against.
struct LayerStack {
    enum class Kind { labels, targets };

    Kind kind = Kind::labels;
    Labels labels;        // populated when kind == labels
    Matrix targets;       // populated when kind == targets
    std::vector<std::pair<std::string, Matrix>> layers;  // (name, Q x d_L matrix)
};

/// Manifest format: a header line "labels <path>" or "targets <path>", then one
/// layer file path per line in layer order. Blank lines and '#' comments are
/// skipped; relative paths resolve against the manifest's directory; a layer's
/// name is its file stem. Throws ValidationError naming any layer whose row
/// count disagrees with the first.
LayerStack load_layer_stack(const std::filesystem::path& manifest);

/// FNV-1a 64-bit digest of a file's bytes, as 16 lowercase hex chars. Used to
/// fingerprint report inputs.
std::string file_digest(const std::filesystem::path& path);

} // namespace dataflow

#endif
