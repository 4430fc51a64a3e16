#include "dataflow/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace dataflow {

namespace {

constexpr std::array<char, 4> kMagic = {'D', 'F', 'L', 'W'};
constexpr char kVersion = 0x01;
constexpr std::uint32_t kMaxRank = 8;

[[noreturn]] void parse_fail(const std::filesystem::path& path, const std::string& detail) {
    throw ParseError(path.string() + ": " + detail);
}

std::ifstream open_input(const std::filesystem::path& path, std::ios::openmode mode) {
    std::ifstream in(path, mode);
    if (!in) throw ParseError(path.string() + ": cannot open file");
    return in;
}

std::ofstream open_output(const std::filesystem::path& path, std::ios::openmode mode) {
    std::ofstream out(path, mode);
    if (!out) throw ParseError(path.string() + ": cannot open file for writing");
    return out;
}

// --- CSV ---------------------------------------------------------------

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

// RFC-4180-style field split: quoted fields may contain commas and doubled quotes.
std::vector<std::string> split_fields(const std::filesystem::path& path, std::string_view line,
                                      std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
        } else if (c == '"' && cell.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cell));
            cell.clear();
        } else {
            cell += c;
        }
    }
    if (quoted) {
        parse_fail(path, "line " + std::to_string(line_no) + ": unterminated quoted field");
    }
    fields.push_back(std::move(cell));
    return fields;
}

bool parse_double(std::string_view cell, double& out) {
    const std::string_view t = trim(cell);
    if (t.empty()) return false;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

struct CsvTable {
    std::size_t cols = 0;
    std::vector<double> values;  // row-major
    std::size_t rows() const { return cols == 0 ? 0 : values.size() / cols; }
};

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in = open_input(path, std::ios::in);
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    bool first_data_row = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(path, line, line_no);

        if (first_data_row) {
            // Header detection: a first row with any non-numeric cell is a header.
            bool numeric = true;
            double tmp;
            for (const auto& f : fields) {
                if (!parse_double(f, tmp)) {
                    numeric = false;
                    break;
                }
            }
            if (!numeric && table.values.empty() && table.cols == 0) {
                table.cols = fields.size();
                continue;  // skip header; it fixes the expected width
            }
            first_data_row = false;
        }

        if (table.cols == 0) table.cols = fields.size();
        if (fields.size() != table.cols) {
            parse_fail(path, "line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(table.cols) + " fields, got " +
                                 std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            double v;
            if (!parse_double(fields[c], v)) {
                parse_fail(path, "line " + std::to_string(line_no) + ", field " +
                                     std::to_string(c + 1) + ": not a number: '" + fields[c] +
                                     "'");
            }
            table.values.push_back(v);
        }
    }
    if (table.values.empty()) parse_fail(path, "no data rows");
    return table;
}

// --- binary tensor -----------------------------------------------------

void put_u32(std::ofstream& out, std::uint32_t v) {
    std::array<char, 4> b;
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b.data(), b.size());
}

void put_u64(std::ofstream& out, std::uint64_t v) {
    std::array<char, 8> b;
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b.data(), b.size());
}

void put_f64(std::ofstream& out, double v) {
    put_u64(out, std::bit_cast<std::uint64_t>(v));
}

bool get_bytes(std::ifstream& in, char* dst, std::size_t n) {
    in.read(dst, static_cast<std::streamsize>(n));
    return static_cast<std::size_t>(in.gcount()) == n;
}

std::uint32_t get_u32(std::ifstream& in, const std::filesystem::path& path) {
    std::array<unsigned char, 4> b;
    if (!get_bytes(in, reinterpret_cast<char*>(b.data()), 4)) parse_fail(path, "truncated header");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::ifstream& in, const std::filesystem::path& path) {
    std::array<unsigned char, 8> b;
    if (!get_bytes(in, reinterpret_cast<char*>(b.data()), 8)) parse_fail(path, "truncated header");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

Matrix read_tensor(const std::filesystem::path& path) {
    const std::uint64_t file_size = std::filesystem::file_size(path);
    std::ifstream in = open_input(path, std::ios::binary);
    std::array<char, 4> magic;
    if (!get_bytes(in, magic.data(), 4) || magic != kMagic) {
        parse_fail(path, "bad magic bytes (expected DFLW)");
    }
    char version;
    if (!get_bytes(in, &version, 1) || version != kVersion) {
        parse_fail(path, "unsupported tensor version");
    }
    const std::uint32_t rank = get_u32(in, path);
    if (rank == 0 || rank > kMaxRank) {
        parse_fail(path, "unsupported tensor rank " + std::to_string(rank));
    }
    std::vector<std::uint64_t> dims(rank);
    std::uint64_t total = 1;
    const std::uint64_t payload_cap = file_size / 8 + 1;  // dims beyond this cannot fit
    for (std::uint32_t i = 0; i < rank; ++i) {
        dims[i] = get_u64(in, path);
        if (dims[i] == 0) parse_fail(path, "zero-sized dimension " + std::to_string(i));
        if (dims[i] > payload_cap || total > payload_cap / dims[i]) {
            parse_fail(path, "dimension overflow: dims exceed file size");
        }
        total *= dims[i];
    }
    if (rank > 2) {
        parse_fail(path, "rank " + std::to_string(rank) + " tensor cannot load as a matrix");
    }
    const std::uint64_t header_size = 4 + 1 + 4 + 8ULL * rank;
    if (file_size != header_size + 8 * total) {
        parse_fail(path, "payload size mismatch: header promises " + std::to_string(total) +
                             " values");
    }

    std::vector<double> payload(total);
    for (std::uint64_t i = 0; i < total; ++i) {
        std::array<unsigned char, 8> b;
        if (!get_bytes(in, reinterpret_cast<char*>(b.data()), 8)) {
            parse_fail(path, "truncated payload at value " + std::to_string(i));
        }
        std::uint64_t bits = 0;
        for (int j = 0; j < 8; ++j) bits |= static_cast<std::uint64_t>(b[j]) << (8 * j);
        payload[i] = std::bit_cast<double>(bits);
    }
    char extra;
    if (in.read(&extra, 1).gcount() != 0) parse_fail(path, "trailing bytes after payload");

    const std::size_t rows = static_cast<std::size_t>(dims[0]);
    const std::size_t cols = rank == 2 ? static_cast<std::size_t>(dims[1]) : 1;
    return Matrix(rows, cols, std::move(payload));
}

std::vector<std::int32_t> to_int_labels(const std::filesystem::path& path, const Matrix& m) {
    if (m.cols() != 1) {
        parse_fail(path, "labels must be a single column, got " + std::to_string(m.cols()));
    }
    std::vector<std::int32_t> out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double v = m(i, 0);
        if (!std::isfinite(v) || v != std::floor(v) || std::abs(v) > 2e9) {
            parse_fail(path, "row " + std::to_string(i + 1) + ": label is not an integer");
        }
        out[i] = static_cast<std::int32_t>(v);
    }
    return out;
}

} // namespace

Matrix load_matrix(const std::filesystem::path& path, FileFormat format) {
    Matrix m;
    if (format == FileFormat::tensor) {
        m = read_tensor(path);
    } else {
        CsvTable t = read_csv(path);
        const std::size_t rows = t.rows();
        m = Matrix(rows, t.cols, std::move(t.values));
    }
    validate_finite(m, path.string().c_str());
    return m;
}

FileFormat detect_format(const std::filesystem::path& path) {
    std::ifstream in = open_input(path, std::ios::binary);
    std::array<char, 4> head{};
    in.read(head.data(), 4);
    return (in.gcount() == 4 && head == kMagic) ? FileFormat::tensor : FileFormat::csv;
}

Matrix load_matrix_auto(const std::filesystem::path& path) {
    return load_matrix(path, detect_format(path));
}

Labels load_labels(const std::filesystem::path& path, std::int32_t declared_classes) {
    const Matrix raw = load_matrix_auto(path);
    return make_labels(to_int_labels(path, raw), declared_classes);
}

std::vector<double> load_series_column(const std::filesystem::path& path, std::size_t column) {
    const CsvTable t = read_csv(path);
    if (column >= t.cols) {
        throw ParamError(path.string() + ": column " + std::to_string(column) +
                         " out of range, file has " + std::to_string(t.cols));
    }
    std::vector<double> series(t.rows());
    for (std::size_t i = 0; i < series.size(); ++i) series[i] = t.values[i * t.cols + column];
    return series;
}

void save_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
    std::ofstream out = open_output(path, std::ios::out);
    char buf[32];
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
            if (c) out << ',';
            out << buf;
        }
        out << '\n';
    }
}

void save_tensor(const std::filesystem::path& path, const Matrix& m) {
    std::ofstream out = open_output(path, std::ios::binary);
    out.write(kMagic.data(), kMagic.size());
    out.put(kVersion);
    put_u32(out, 2);
    put_u64(out, m.rows());
    put_u64(out, m.cols());
    for (const double v : m.data()) put_f64(out, v);
}

void save_labels_csv(const std::filesystem::path& path, const Labels& labels) {
    std::ofstream out = open_output(path, std::ios::out);
    for (const std::int32_t v : labels.values) out << v << '\n';
}

void save_matrix_auto(const std::filesystem::path& path, const Matrix& m) {
    const auto ext = path.extension().string();
    if (ext == ".dflw" || ext == ".bin") {
        save_tensor(path, m);
    } else {
        save_matrix_csv(path, m);
    }
}

LayerStack load_layer_stack(const std::filesystem::path& manifest) {
    std::ifstream in = open_input(manifest, std::ios::in);
    const std::filesystem::path base = manifest.parent_path();

    LayerStack stack;
    std::filesystem::path ref_path;
    bool have_header = false;
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::filesystem::path> layer_paths;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (!have_header) {
            const auto space = t.find_first_of(" \t");
            const std::string_view kind = t.substr(0, space);
            if (space == std::string_view::npos || (kind != "labels" && kind != "targets")) {
                parse_fail(manifest, "line " + std::to_string(line_no) +
                                         ": header must be 'labels <path>' or 'targets <path>'");
            }
            stack.kind = kind == "labels" ? LayerStack::Kind::labels : LayerStack::Kind::targets;
            ref_path = base / std::filesystem::path(std::string(trim(t.substr(space + 1))));
            have_header = true;
            continue;
        }
        layer_paths.emplace_back(base / std::filesystem::path(std::string(t)));
    }
    if (!have_header) parse_fail(manifest, "missing 'labels'/'targets' header line");
    if (layer_paths.empty()) parse_fail(manifest, "no layer files listed");

    for (const auto& p : layer_paths) {
        stack.layers.emplace_back(p.stem().string(), load_matrix_auto(p));
    }
    const std::size_t q = stack.layers.front().second.rows();
    for (const auto& [name, m] : stack.layers) {
        if (m.rows() != q) {
            throw ValidationError("layer '" + name + "' has " + std::to_string(m.rows()) +
                                  " samples, expected " + std::to_string(q));
        }
    }

    if (stack.kind == LayerStack::Kind::labels) {
        stack.labels = load_labels(ref_path);
        if (stack.labels.size() != q) {
            throw ValidationError("labels file has " + std::to_string(stack.labels.size()) +
                                  " entries, layers have " + std::to_string(q) + " samples");
        }
    } else {
        stack.targets = load_matrix_auto(ref_path);
        if (stack.targets.rows() != q) {
            throw ValidationError("targets file has " + std::to_string(stack.targets.rows()) +
                                  " rows, layers have " + std::to_string(q) + " samples");
        }
    }
    return stack;
}

std::string file_digest(const std::filesystem::path& path) {
    std::ifstream in = open_input(path, std::ios::binary);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const std::streamsize n = in.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ULL;
        }
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash));
    return hex;
}

} // namespace dataflow
