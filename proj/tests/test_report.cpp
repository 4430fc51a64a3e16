#include <doctest.h>

#include <cstring>
#include <string>

#include "dataflow/report.hpp"
#include "dataflow/svg.hpp"

using dataflow::IndexReport;
using dataflow::ReportRecord;

namespace {

IndexReport sample_report() {
    IndexReport report;
    report.command = "layers";
    report.argv = {"dataflow", "layers", "stack.txt"};
    report.generated_at = "2026-01-01T00:00:00Z";
    report.index_kind = "si";
    report.order = 1;
    report.inputs.emplace_back("stack.txt", "0123456789abcdef");

    ReportRecord a{"input", 0.31, 19, std::nullopt, 0.29, 17, 10.5};
    ReportRecord b{"conv1", 0.57, 34, std::nullopt, 0.48, 29, 46.5};
    ReportRecord c{"conv2", 1.0 / 3.0, 20, std::nullopt, 0.9007199254740993, 54, 67.25};
    report.records = {a, b, c};
    return report;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

} // namespace

TEST_CASE("report values survive a json round-trip losslessly") {
    const IndexReport report = sample_report();
    const auto j = dataflow::report_to_json(report);
    const auto parsed = nlohmann::ordered_json::parse(j.dump(2));
    for (std::size_t i = 0; i < report.records.size(); ++i) {
        const double back = parsed["records"][i]["value"].get<double>();
        CHECK(same_bits(back, report.records[i].value));
        const double test_back = parsed["records"][i]["test_value"].get<double>();
        CHECK(same_bits(test_back, *report.records[i].test_value));
    }
    CHECK(parsed["summary"]["min"].get<double>() == 0.31);
    CHECK(parsed["summary"]["max"].get<double>() == 0.57);
    CHECK(parsed["params"]["r"] == 1);
}

TEST_CASE("csv view lists every populated column") {
    const std::string csv = dataflow::report_to_csv(sample_report());
    CHECK(csv.find("name,value,matches,test_value,test_matches,ccr") == 0);
    CHECK(csv.find("conv1,") != std::string::npos);
    CHECK(csv.find("10.5") != std::string::npos);
}

TEST_CASE("svg view emits one polyline per series") {
    const std::string svg = dataflow::report_to_svg(sample_report());
    std::size_t polylines = 0;
    for (std::size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos) {
        ++polylines;
    }
    CHECK(polylines == 3);  // train, test, ccr
    CHECK(svg.find("<?xml") == 0);
    CHECK(svg.rfind("</svg>\n") == svg.size() - 7);
}

TEST_CASE("svg escapes markup in labels") {
    dataflow::SvgSeries s;
    s.label = "a<b & \"c\"";
    s.points = {{0.0, 0.0}, {1.0, 1.0}};
    const std::vector<dataflow::SvgSeries> series{s};
    const std::string svg = dataflow::render_line_chart("t", "x", "y", series);
    CHECK(svg.find("a&lt;b &amp; &quot;c&quot;") != std::string::npos);
    CHECK(svg.find("a<b") == std::string::npos);
}

TEST_CASE("identical reports serialize identically") {
    const IndexReport a = sample_report();
    const IndexReport b = sample_report();
    CHECK(dataflow::report_to_json(a).dump(2) == dataflow::report_to_json(b).dump(2));
    CHECK(dataflow::report_to_svg(a) == dataflow::report_to_svg(b));
    CHECK(dataflow::report_to_csv(a) == dataflow::report_to_csv(b));
}
