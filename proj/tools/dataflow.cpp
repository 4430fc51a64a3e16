// Command-line frontend: loads datasets, runs the separation / smoothness
// indices, and writes JSON reports with optional CSV and SVG views.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dataflow/datapipe.hpp"
#include "dataflow/error.hpp"
#include "dataflow/indices.hpp"
#include "dataflow/io.hpp"
#include "dataflow/report.hpp"

namespace {

using namespace dataflow;

struct CommonOpts {
    int threads = 0;
    std::string out;
    std::vector<std::string> formats;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--threads", opts.threads, "Max worker threads (0 = all cores)");
    cmd->add_option("--out", opts.out, "Report base path; writes <out>.json plus derived views");
    cmd->add_option("--format", opts.formats, "Extra report views: csv and/or svg")
        ->check(CLI::IsMember({"json", "csv", "svg"}));
}

void emit_report(IndexReport& report, const CommonOpts& opts) {
    report.generated_at = current_utc_timestamp();
    report.threads = opts.threads;
    if (opts.out.empty()) {
        bool derived = false;
        for (const auto& f : opts.formats) derived |= f != "json";
        if (derived) throw ParamError("--format csv/svg requires --out");
        std::cout << report_to_json(report).dump(2) << '\n';
        return;
    }
    write_report(report, opts.out, opts.formats);
}

std::vector<std::size_t> parse_sizes(const std::string& spec) {
    std::vector<std::size_t> sizes;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        const std::size_t comma = spec.find(',', pos);
        const std::string tok = spec.substr(pos, comma == std::string::npos ? comma : comma - pos);
        try {
            sizes.push_back(std::stoull(tok));
        } catch (const std::exception&) {
            throw ParamError("bad subset size '" + tok + "' in --sizes");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (sizes.empty()) throw ParamError("--sizes is empty");
    return sizes;
}

std::string stem_of(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

// Splits a labelled dataset loaded from one file: `col` holds the labels, the
// remaining columns are the features.
std::pair<Matrix, Labels> split_label_column(const Matrix& m, std::size_t col,
                                             std::int32_t declared_classes) {
    if (col >= m.cols()) {
        throw ParamError("--label-col " + std::to_string(col) + " out of range, data has " +
                         std::to_string(m.cols()) + " columns");
    }
    if (m.cols() < 2) throw ValidationError("no feature columns besides the label column");
    Matrix features(m.rows(), m.cols() - 1);
    std::vector<std::int32_t> labels(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        std::size_t w = 0;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c == col) continue;
            features(r, w++) = m(r, c);
        }
        const double v = m(r, col);
        if (v != static_cast<std::int32_t>(v)) {
            throw ValidationError("label column: non-integer value at row " + std::to_string(r));
        }
        labels[r] = static_cast<std::int32_t>(v);
    }
    return {std::move(features), make_labels(std::move(labels), declared_classes)};
}

// --- si ------------------------------------------------------------------

struct SiOpts {
    std::vector<std::string> data;
    std::string labels_path;
    std::int64_t label_col = -1;
    std::int32_t classes = 0;
    std::size_t order = 1;
    CommonOpts common;
};

void run_si(const SiOpts& opts, const std::vector<std::string>& argv) {
    IndexReport report;
    report.command = "si";
    report.argv = argv;
    report.index_kind = "si";
    report.order = opts.order;

    std::optional<Labels> shared_labels;
    if (!opts.labels_path.empty()) {
        shared_labels = load_labels(opts.labels_path, opts.classes);
        report.inputs.emplace_back(opts.labels_path, file_digest(opts.labels_path));
    } else if (opts.label_col < 0) {
        throw ParamError("si needs --labels FILE or --label-col N");
    }

    for (const auto& path : opts.data) {
        report.inputs.emplace_back(path, file_digest(path));
        Matrix x = load_matrix_auto(path);
        Labels labels;
        if (shared_labels) {
            labels = *shared_labels;
        } else {
            std::tie(x, labels) =
                split_label_column(x, static_cast<std::size_t>(opts.label_col), opts.classes);
        }
        const SeparationResult res = separation_index_r(x, labels, opts.order,
                                                        opts.common.threads);
        ReportRecord rec;
        rec.name = stem_of(path);
        rec.value = res.value;
        rec.matches = res.matches;
        report.records.push_back(std::move(rec));
    }
    emit_report(report, opts.common);
}

// --- smi -----------------------------------------------------------------

struct SmiOpts {
    std::string data;
    std::string targets_path;
    std::size_t order = 1;
    double beta = kDefaultBeta;
    bool whiten_targets = false;
    CommonOpts common;
};

void run_smi(const SmiOpts& opts, const std::vector<std::string>& argv) {
    IndexReport report;
    report.command = "smi";
    report.argv = argv;
    report.index_kind = "smi";
    report.order = opts.order;
    report.beta = opts.beta;
    report.whitened = opts.whiten_targets;
    report.inputs.emplace_back(opts.data, file_digest(opts.data));
    report.inputs.emplace_back(opts.targets_path, file_digest(opts.targets_path));

    const Matrix x = load_matrix_auto(opts.data);
    Matrix y = load_matrix_auto(opts.targets_path);
    if (opts.whiten_targets) y = whiten(y).first;

    const SmoothnessParams params{opts.beta, opts.order};
    ReportRecord rec;
    rec.name = stem_of(opts.data);
    rec.value = smoothness_index_r(x, y, params, opts.common.threads);
    report.records.push_back(std::move(rec));
    emit_report(report, opts.common);
}

// --- curve ---------------------------------------------------------------

struct CurveOpts {
    std::string data;
    std::string labels_path;
    std::string targets_path;
    std::string sizes;
    std::uint64_t seed = 0;
    std::size_t order = 1;
    double beta = kDefaultBeta;
    bool whiten_targets = false;
    std::int32_t classes = 0;
    CommonOpts common;
};

void run_curve(const CurveOpts& opts, const std::vector<std::string>& argv) {
    if (opts.labels_path.empty() == opts.targets_path.empty()) {
        throw ParamError("curve needs exactly one of --labels or --targets");
    }
    IndexReport report;
    report.command = "curve";
    report.argv = argv;
    report.order = opts.order;
    report.seed = opts.seed;
    report.inputs.emplace_back(opts.data, file_digest(opts.data));

    const Matrix x = load_matrix_auto(opts.data);
    const auto sizes = parse_sizes(opts.sizes);

    std::vector<CurvePoint> curve;
    if (!opts.labels_path.empty()) {
        report.index_kind = "si";
        report.inputs.emplace_back(opts.labels_path, file_digest(opts.labels_path));
        const Labels labels = load_labels(opts.labels_path, opts.classes);
        curve = si_curve(x, labels, opts.order, sizes, opts.seed, opts.common.threads);
    } else {
        report.index_kind = "smi";
        report.beta = opts.beta;
        report.whitened = opts.whiten_targets;
        report.inputs.emplace_back(opts.targets_path, file_digest(opts.targets_path));
        Matrix y = load_matrix_auto(opts.targets_path);
        if (opts.whiten_targets) y = whiten(y).first;
        curve = smi_curve(x, y, {opts.beta, opts.order}, sizes, opts.seed, opts.common.threads);
    }

    for (const auto& point : curve) {
        ReportRecord rec;
        rec.name = std::to_string(point.size);
        rec.size = point.size;
        rec.value = point.value;
        rec.matches = point.matches;
        report.records.push_back(std::move(rec));
    }
    emit_report(report, opts.common);
}

// --- layers ----------------------------------------------------------------

struct LayersOpts {
    std::string manifest;
    std::string test_manifest;
    std::string ccr_path;
    std::string index = "auto";
    std::size_t order = 1;
    double beta = kDefaultBeta;
    bool whiten_targets = false;
    CommonOpts common;
};

std::vector<ReportRecord> evaluate_stack(const LayerStack& stack, const std::string& index,
                                         std::size_t order, double beta, bool whiten_targets,
                                         int threads) {
    const bool want_si = index == "si";
    if (want_si && stack.kind != LayerStack::Kind::labels) {
        throw ParamError("si evaluation needs a 'labels' manifest");
    }
    if (!want_si && stack.kind != LayerStack::Kind::targets) {
        throw ParamError("smi evaluation needs a 'targets' manifest");
    }

    Matrix targets;
    if (!want_si) {
        targets = whiten_targets ? whiten(stack.targets).first : stack.targets;
    }

    std::vector<ReportRecord> records;
    for (const auto& [name, x] : stack.layers) {
        ReportRecord rec;
        rec.name = name;
        if (want_si) {
            const SeparationResult res = separation_index_r(x, stack.labels, order, threads);
            rec.value = res.value;
            rec.matches = res.matches;
        } else {
            rec.value = smoothness_index_r(x, targets, {beta, order}, threads);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

void run_layers(const LayersOpts& opts, const std::vector<std::string>& argv) {
    IndexReport report;
    report.command = "layers";
    report.argv = argv;
    report.order = opts.order;
    report.inputs.emplace_back(opts.manifest, file_digest(opts.manifest));

    const LayerStack stack = load_layer_stack(opts.manifest);
    std::string index = opts.index;
    if (index == "auto") {
        index = stack.kind == LayerStack::Kind::labels ? "si" : "smi";
    }
    report.index_kind = index;
    if (index == "smi") {
        report.beta = opts.beta;
        report.whitened = opts.whiten_targets;
    }

    report.records = evaluate_stack(stack, index, opts.order, opts.beta, opts.whiten_targets,
                                    opts.common.threads);

    if (!opts.test_manifest.empty()) {
        report.inputs.emplace_back(opts.test_manifest, file_digest(opts.test_manifest));
        const LayerStack test_stack = load_layer_stack(opts.test_manifest);
        const auto test_records = evaluate_stack(test_stack, index, opts.order, opts.beta,
                                                 opts.whiten_targets, opts.common.threads);
        if (test_records.size() != report.records.size()) {
            throw ValidationError("test manifest lists " + std::to_string(test_records.size()) +
                                  " layers, train manifest " +
                                  std::to_string(report.records.size()));
        }
        for (std::size_t i = 0; i < test_records.size(); ++i) {
            report.records[i].test_value = test_records[i].value;
            report.records[i].test_matches = test_records[i].matches;
        }
    }

    if (!opts.ccr_path.empty()) {
        report.inputs.emplace_back(opts.ccr_path, file_digest(opts.ccr_path));
        const std::vector<double> ccr = load_series_column(opts.ccr_path, 0);
        if (ccr.size() != report.records.size()) {
            throw ValidationError("ccr file has " + std::to_string(ccr.size()) +
                                  " values, report has " + std::to_string(report.records.size()) +
                                  " layers");
        }
        for (std::size_t i = 0; i < ccr.size(); ++i) report.records[i].ccr = ccr[i];
    }
    emit_report(report, opts.common);
}

// --- embed -----------------------------------------------------------------

struct EmbedOpts {
    std::string series;
    std::size_t lags = 0;
    std::size_t column = 0;
    std::string interval = "unspecified";
    std::string out_x;
    std::string out_y;
};

void run_embed(const EmbedOpts& opts, const std::vector<std::string>& argv) {
    Series series;
    series.values = load_series_column(opts.series, opts.column);
    series.interval = opts.interval;
    const auto [x, y] = lag_embed(series, opts.lags);
    save_matrix_auto(opts.out_x, x);
    save_matrix_auto(opts.out_y, y);

    nlohmann::ordered_json j;
    j["command"] = "embed";
    j["argv"] = argv;
    j["generated_at"] = current_utc_timestamp();
    j["inputs"] = {{{"path", opts.series}, {"fnv1a64", file_digest(opts.series)}}};
    j["interval"] = series.interval;
    j["lags"] = opts.lags;
    j["rows"] = x.rows();
    j["outputs"] = {opts.out_x, opts.out_y};
    std::cout << j.dump(2) << '\n';
}

// --- quantize ----------------------------------------------------------------

struct QuantizeOpts {
    std::string targets;
    std::size_t levels = 0;
    std::size_t column = 0;
    std::string out;
};

void run_quantize(const QuantizeOpts& opts, const std::vector<std::string>& argv) {
    const std::vector<double> y = load_series_column(opts.targets, opts.column);
    const auto [labels, spec] = quantize_targets(y, opts.levels);
    save_labels_csv(opts.out, labels);

    nlohmann::ordered_json j;
    j["command"] = "quantize";
    j["argv"] = argv;
    j["generated_at"] = current_utc_timestamp();
    j["inputs"] = {{{"path", opts.targets}, {"fnv1a64", file_digest(opts.targets)}}};
    j["quantization"] = {{"levels", spec.levels},
                         {"y_min", spec.y_min},
                         {"y_max", spec.y_max},
                         {"width", spec.width}};
    j["outputs"] = {opts.out};
    std::cout << j.dump(2) << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nearest-neighbor separation and smoothness indices for datasets and "
                 "layer activation dumps"};
    app.require_subcommand(1);
    const std::vector<std::string> full_argv(argv, argv + argc);

    SiOpts si;
    auto* si_cmd = app.add_subcommand("si", "Separation index of labelled data");
    si_cmd->add_option("data", si.data, "Feature matrix file(s), CSV or DFLW tensor")
        ->required();
    si_cmd->add_option("--labels", si.labels_path, "Label file (one integer per sample)");
    si_cmd->add_option("--label-col", si.label_col, "Column of the data file holding labels");
    si_cmd->add_option("--classes", si.classes, "Declared class count (default: max label)");
    si_cmd->add_option("--r", si.order, "Number of nearest neighbors that must match");
    add_common(si_cmd, si.common);
    si_cmd->callback([&] { run_si(si, full_argv); });

    SmiOpts smi;
    auto* smi_cmd = app.add_subcommand("smi", "Smoothness index of regression data");
    smi_cmd->add_option("data", smi.data, "Feature matrix file")->required();
    smi_cmd->add_option("--targets", smi.targets_path, "Target matrix file")->required();
    smi_cmd->add_option("--r", smi.order, "Smoothness order");
    smi_cmd->add_option("--beta", smi.beta, "Smoothness coefficient");
    smi_cmd->add_flag("--whiten", smi.whiten_targets, "Standardize target columns first");
    add_common(smi_cmd, smi.common);
    smi_cmd->callback([&] { run_smi(smi, full_argv); });

    CurveOpts curve;
    auto* curve_cmd = app.add_subcommand("curve", "Index versus subset size along one shuffle");
    curve_cmd->add_option("data", curve.data, "Feature matrix file")->required();
    curve_cmd->add_option("--labels", curve.labels_path, "Label file (separation curve)");
    curve_cmd->add_option("--targets", curve.targets_path, "Target file (smoothness curve)");
    curve_cmd->add_option("--sizes", curve.sizes, "Comma-separated subset sizes")->required();
    curve_cmd->add_option("--seed", curve.seed, "Shuffle seed");
    curve_cmd->add_option("--r", curve.order, "Index order");
    curve_cmd->add_option("--beta", curve.beta, "Smoothness coefficient");
    curve_cmd->add_option("--classes", curve.classes, "Declared class count");
    curve_cmd->add_flag("--whiten", curve.whiten_targets, "Standardize target columns first");
    add_common(curve_cmd, curve.common);
    curve_cmd->callback([&] { run_curve(curve, full_argv); });

    LayersOpts layers;
    auto* layers_cmd = app.add_subcommand("layers", "Per-layer index over a manifest of dumps");
    layers_cmd->add_option("manifest", layers.manifest, "Layer-stack manifest")->required();
    layers_cmd->add_option("--test", layers.test_manifest, "Second manifest overlaid as test");
    layers_cmd->add_option("--ccr", layers.ccr_path,
                           "CSV of externally computed per-layer rates to co-plot");
    layers_cmd->add_option("--index", layers.index, "Index kind")
        ->check(CLI::IsMember({"auto", "si", "smi"}));
    layers_cmd->add_option("--r", layers.order, "Index order");
    layers_cmd->add_option("--beta", layers.beta, "Smoothness coefficient");
    layers_cmd->add_flag("--whiten", layers.whiten_targets, "Standardize target columns first");
    add_common(layers_cmd, layers.common);
    layers_cmd->callback([&] { run_layers(layers, full_argv); });

    EmbedOpts embed;
    auto* embed_cmd = app.add_subcommand("embed", "Lag-embed a scalar series into X / y files");
    embed_cmd->add_option("series", embed.series, "Series CSV")->required();
    embed_cmd->add_option("--lags", embed.lags, "Number of former lags per row")->required();
    embed_cmd->add_option("--col", embed.column, "Series column in the CSV");
    embed_cmd->add_option("--interval", embed.interval, "Sampling interval label");
    embed_cmd->add_option("--out-x", embed.out_x, "Output path for the lag matrix")->required();
    embed_cmd->add_option("--out-y", embed.out_y, "Output path for the targets")->required();
    embed_cmd->callback([&] { run_embed(embed, full_argv); });

    QuantizeOpts quantize;
    auto* quant_cmd = app.add_subcommand("quantize", "Quantize scalar targets into class labels");
    quant_cmd->add_option("targets", quantize.targets, "Targets CSV")->required();
    quant_cmd->add_option("--levels", quantize.levels, "Number of quantization levels")
        ->required();
    quant_cmd->add_option("--col", quantize.column, "Target column in the CSV");
    quant_cmd->add_option("--out", quantize.out, "Output labels CSV")->required();
    quant_cmd->callback([&] { run_quantize(quantize, full_argv); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const dataflow::ParamError& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return 2;
    } catch (const dataflow::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 3;
    } catch (const dataflow::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 5;
    }
    return 0;
}
