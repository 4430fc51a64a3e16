#include "dataflow/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "dataflow/error.hpp"
#include "dataflow/svg.hpp"

namespace dataflow {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

double IndexReport::summary_min() const {
    double out = records.empty() ? 0.0 : records.front().value;
    for (const auto& r : records) out = std::min(out, r.value);
    return out;
}

double IndexReport::summary_max() const {
    double out = records.empty() ? 0.0 : records.front().value;
    for (const auto& r : records) out = std::max(out, r.value);
    return out;
}

std::string current_utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::ordered_json report_to_json(const IndexReport& report) {
    nlohmann::ordered_json j;
    j["command"] = report.command;
    j["argv"] = report.argv;
    j["generated_at"] = report.generated_at;
    j["index"] = report.index_kind;

    nlohmann::ordered_json params;
    params["r"] = report.order;
    if (report.beta > 0.0) params["beta"] = report.beta;
    if (report.seed) params["seed"] = *report.seed;
    params["threads"] = report.threads;
    params["whiten"] = report.whitened;
    if (report.quantize_levels) params["levels"] = *report.quantize_levels;
    j["params"] = std::move(params);

    nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
    for (const auto& [path, digest] : report.inputs) {
        inputs.push_back({{"path", path}, {"fnv1a64", digest}});
    }
    j["inputs"] = std::move(inputs);

    nlohmann::ordered_json records = nlohmann::ordered_json::array();
    for (const auto& r : report.records) {
        nlohmann::ordered_json rec;
        rec["name"] = r.name;
        if (r.size) rec["size"] = *r.size;
        rec["value"] = r.value;
        if (r.matches) rec["matches"] = *r.matches;
        if (r.test_value) rec["test_value"] = *r.test_value;
        if (r.test_matches) rec["test_matches"] = *r.test_matches;
        if (r.ccr) rec["ccr"] = *r.ccr;
        records.push_back(std::move(rec));
    }
    j["records"] = std::move(records);
    j["summary"] = {{"min", report.summary_min()}, {"max", report.summary_max()}};

    for (const auto& [key, value] : report.extra.items()) j[key] = value;
    return j;
}

std::string report_to_csv(const IndexReport& report) {
    const bool any_size = std::any_of(report.records.begin(), report.records.end(),
                                      [](const auto& r) { return r.size.has_value(); });
    const bool any_matches = std::any_of(report.records.begin(), report.records.end(),
                                         [](const auto& r) { return r.matches.has_value(); });
    const bool any_test = std::any_of(report.records.begin(), report.records.end(),
                                      [](const auto& r) { return r.test_value.has_value(); });
    const bool any_ccr = std::any_of(report.records.begin(), report.records.end(),
                                     [](const auto& r) { return r.ccr.has_value(); });

    std::ostringstream out;
    out << "name";
    if (any_size) out << ",size";
    out << ",value";
    if (any_matches) out << ",matches";
    if (any_test) out << ",test_value";
    if (any_test && any_matches) out << ",test_matches";
    if (any_ccr) out << ",ccr";
    out << '\n';

    for (const auto& r : report.records) {
        out << r.name;
        if (any_size) {
            out << ',';
            if (r.size) out << *r.size;
        }
        out << ',' << fmt17(r.value);
        if (any_matches) {
            out << ',';
            if (r.matches) out << *r.matches;
        }
        if (any_test) {
            out << ',';
            if (r.test_value) out << fmt17(*r.test_value);
        }
        if (any_test && any_matches) {
            out << ',';
            if (r.test_matches) out << *r.test_matches;
        }
        if (any_ccr) {
            out << ',';
            if (r.ccr) out << fmt17(*r.ccr);
        }
        out << '\n';
    }
    return out.str();
}

std::string report_to_svg(const IndexReport& report) {
    const bool by_size = !report.records.empty() && report.records.front().size.has_value();
    const auto x_of = [&](std::size_t i) {
        return by_size ? static_cast<double>(*report.records[i].size)
                       : static_cast<double>(i + 1);
    };

    std::vector<SvgSeries> series;
    SvgSeries primary;
    primary.label = report.index_kind;
    for (std::size_t i = 0; i < report.records.size(); ++i) {
        primary.points.emplace_back(x_of(i), report.records[i].value);
    }
    series.push_back(std::move(primary));

    if (std::any_of(report.records.begin(), report.records.end(),
                    [](const auto& r) { return r.test_value.has_value(); })) {
        SvgSeries test;
        test.label = report.index_kind + " (test)";
        for (std::size_t i = 0; i < report.records.size(); ++i) {
            if (report.records[i].test_value) {
                test.points.emplace_back(x_of(i), *report.records[i].test_value);
            }
        }
        series.push_back(std::move(test));
    }
    if (std::any_of(report.records.begin(), report.records.end(),
                    [](const auto& r) { return r.ccr.has_value(); })) {
        SvgSeries ccr;
        ccr.label = "ccr";
        for (std::size_t i = 0; i < report.records.size(); ++i) {
            if (report.records[i].ccr) ccr.points.emplace_back(x_of(i), *report.records[i].ccr);
        }
        series.push_back(std::move(ccr));
    }

    const std::string x_label = by_size ? "subset size" : "layer";
    return render_line_chart("dataflow " + report.command, x_label, report.index_kind, series);
}

void write_report(const IndexReport& report, const std::filesystem::path& base,
                  const std::vector<std::string>& formats) {
    std::filesystem::path stem = base;
    if (stem.extension() == ".json") stem.replace_extension();

    {
        std::filesystem::path p = stem;
        p += ".json";
        std::ofstream out(p);
        if (!out) throw ParseError(p.string() + ": cannot open file for writing");
        out << report_to_json(report).dump(2) << '\n';
    }
    for (const auto& f : formats) {
        if (f == "json") continue;
        std::filesystem::path p = stem;
        if (f == "csv") {
            p += ".csv";
            std::ofstream out(p);
            if (!out) throw ParseError(p.string() + ": cannot open file for writing");
            out << report_to_csv(report);
        } else if (f == "svg") {
            p += ".svg";
            std::ofstream out(p);
            if (!out) throw ParseError(p.string() + ": cannot open file for writing");
            out << report_to_svg(report);
        } else {
            throw ParamError("unknown report format '" + f + "'");
        }
    }
}

} // namespace dataflow
