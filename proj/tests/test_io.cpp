#include <doctest.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "dataflow/io.hpp"
#include "oracles.hpp"
#include "tempdir.hpp"

using dataflow::Matrix;

namespace {

namespace fs = std::filesystem;
using testutil::TempDir;
using testutil::write_text;

} // namespace

TEST_CASE("plain csv parses into a matrix") {
    TempDir dir;
    write_text(dir.file("m.csv"), "0,1\n2,3\n");
    const Matrix m = dataflow::load_matrix(dir.file("m.csv"), dataflow::FileFormat::csv);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 2);
    CHECK(m(1, 0) == 2.0);
    CHECK(m(1, 1) == 3.0);
}

TEST_CASE("optional header row is skipped") {
    TempDir dir;
    write_text(dir.file("m.csv"), "f1,f2\r\n1.5,2.5\r\n-3,4e2\r\n");
    const Matrix m = dataflow::load_matrix_auto(dir.file("m.csv"));
    CHECK(m.rows() == 2);
    CHECK(m(0, 0) == 1.5);
    CHECK(m(1, 1) == 400.0);
}

TEST_CASE("ragged and non-numeric rows fail with location info") {
    TempDir dir;
    write_text(dir.file("ragged.csv"), "1,2\n3\n");
    try {
        dataflow::load_matrix_auto(dir.file("ragged.csv"));
        FAIL("expected ParseError");
    } catch (const dataflow::ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    write_text(dir.file("alpha.csv"), "1,2\n3,x\n");
    try {
        dataflow::load_matrix_auto(dir.file("alpha.csv"));
        FAIL("expected ParseError");
    } catch (const dataflow::ParseError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("field 2") != std::string::npos);
    }

    write_text(dir.file("empty.csv"), "\n\n");
    CHECK_THROWS_AS(dataflow::load_matrix_auto(dir.file("empty.csv")), dataflow::ParseError);
}

TEST_CASE("quoted fields and blank lines are tolerated") {
    TempDir dir;
    write_text(dir.file("q.csv"), "\"a\",\"b\"\n\n\"1\",2\n");
    const Matrix m = dataflow::load_matrix_auto(dir.file("q.csv"));
    CHECK(m.rows() == 1);
    CHECK(m(0, 0) == 1.0);
}

TEST_CASE("tensor round-trip is bit-exact") {
    TempDir dir;
    Matrix m(3, 2);
    m(0, 0) = 0.1;
    m(0, 1) = -0.0;
    m(1, 0) = 1.0 / 3.0;
    m(1, 1) = 1e-308;  // subnormal territory
    m(2, 0) = -1.7976931348623157e308;
    m(2, 1) = 5e-324;
    dataflow::save_tensor(dir.file("m.dflw"), m);
    const Matrix back = dataflow::load_matrix(dir.file("m.dflw"), dataflow::FileFormat::tensor);
    REQUIRE(back.rows() == 3);
    REQUIRE(back.cols() == 2);
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 2; ++c) {
            const double a = back(r, c);
            const double b = m(r, c);
            CHECK(std::memcmp(&a, &b, sizeof(double)) == 0);
        }
    }
    CHECK(dataflow::detect_format(dir.file("m.dflw")) == dataflow::FileFormat::tensor);
}

TEST_CASE("csv writer keeps full double precision") {
    TempDir dir;
    oracle::Rng rng(1);
    const Matrix m = oracle::random_matrix(rng, 8, 3, -1e6, 1e6);
    dataflow::save_matrix_csv(dir.file("m.csv"), m);
    const Matrix back = dataflow::load_matrix_auto(dir.file("m.csv"));
    CHECK(back == m);
}

TEST_CASE("tensor header corruption is reported") {
    TempDir dir;

    write_text(dir.file("bad.dflw"), "NOPE");
    CHECK_THROWS_AS(dataflow::load_matrix(dir.file("bad.dflw"), dataflow::FileFormat::tensor),
                    dataflow::ParseError);

    // Valid file, then truncate the payload.
    Matrix m(4, 4);
    dataflow::save_tensor(dir.file("trunc.dflw"), m);
    fs::resize_file(dir.file("trunc.dflw"), fs::file_size(dir.file("trunc.dflw")) - 8);
    CHECK_THROWS_AS(dataflow::load_matrix(dir.file("trunc.dflw"), dataflow::FileFormat::tensor),
                    dataflow::ParseError);

    // Claimed dimensions far beyond the file size.
    std::ofstream out(dir.file("huge.dflw"), std::ios::binary);
    out << "DFLW" << '\x01';
    const std::uint32_t rank = 2;
    out.write(reinterpret_cast<const char*>(&rank), 4);
    const std::uint64_t dim = 1ULL << 62;
    out.write(reinterpret_cast<const char*>(&dim), 8);
    out.write(reinterpret_cast<const char*>(&dim), 8);
    out.close();
    try {
        dataflow::load_matrix(dir.file("huge.dflw"), dataflow::FileFormat::tensor);
        FAIL("expected ParseError");
    } catch (const dataflow::ParseError& e) {
        CHECK(std::string(e.what()).find("overflow") != std::string::npos);
    }
}

TEST_CASE("labels load from csv with range checks") {
    TempDir dir;
    write_text(dir.file("l.csv"), "1\n2\n2\n3\n");
    const auto labels = dataflow::load_labels(dir.file("l.csv"));
    CHECK(labels.size() == 4);
    CHECK(labels.classes == 3);

    write_text(dir.file("zero.csv"), "1\n0\n2\n");
    CHECK_THROWS_AS(dataflow::load_labels(dir.file("zero.csv"), 2), dataflow::ValidationError);

    write_text(dir.file("frac.csv"), "1\n1.5\n");
    CHECK_THROWS_AS(dataflow::load_labels(dir.file("frac.csv")), dataflow::ParseError);

    write_text(dir.file("high.csv"), "1\n7\n");
    CHECK_THROWS_AS(dataflow::load_labels(dir.file("high.csv"), 3), dataflow::ValidationError);
}

TEST_CASE("series column extraction") {
    TempDir dir;
    write_text(dir.file("s.csv"), "date,price\n1,10\n2,20\n3,30\n");
    const auto series = dataflow::load_series_column(dir.file("s.csv"), 1);
    REQUIRE(series.size() == 3);
    CHECK(series[2] == 30.0);
    CHECK_THROWS_AS(dataflow::load_series_column(dir.file("s.csv"), 2), dataflow::ParamError);
}

TEST_CASE("layer stack manifest loads in order with shared labels") {
    TempDir dir;
    write_text(dir.file("l0.csv"), "0,0\n1,1\n2,2\n3,3\n");
    write_text(dir.file("l1.csv"), "0,1\n1,2\n2,3\n3,4\n");
    write_text(dir.file("labels.csv"), "1\n1\n2\n2\n");
    write_text(dir.file("stack.txt"),
               "# synthetic stack\nlabels labels.csv\nl0.csv\nl1.csv\n");
    const auto stack = dataflow::load_layer_stack(dir.file("stack.txt"));
    CHECK(stack.kind == dataflow::LayerStack::Kind::labels);
    REQUIRE(stack.layers.size() == 2);
    CHECK(stack.layers[0].first == "l0");
    CHECK(stack.layers[1].first == "l1");
    CHECK(stack.labels.size() == 4);
}

TEST_CASE("layer stack mismatches are reported by layer name") {
    TempDir dir;
    write_text(dir.file("a.csv"), "0\n1\n2\n");
    write_text(dir.file("b.csv"), "0\n1\n");
    write_text(dir.file("t.csv"), "0.5\n0.25\n0.125\n");
    write_text(dir.file("stack.txt"), "targets t.csv\na.csv\nb.csv\n");
    try {
        dataflow::load_layer_stack(dir.file("stack.txt"));
        FAIL("expected ValidationError");
    } catch (const dataflow::ValidationError& e) {
        CHECK(std::string(e.what()).find("'b'") != std::string::npos);
    }

    write_text(dir.file("noheader.txt"), "a.csv\nb.csv\n");
    CHECK_THROWS_AS(dataflow::load_layer_stack(dir.file("noheader.txt")), dataflow::ParseError);
}

TEST_CASE("file digest is stable and content-sensitive") {
    TempDir dir;
    write_text(dir.file("a"), "hello");
    write_text(dir.file("b"), "hello");
    write_text(dir.file("c"), "hellp");
    CHECK(dataflow::file_digest(dir.file("a")) == dataflow::file_digest(dir.file("b")));
    CHECK(dataflow::file_digest(dir.file("a")) != dataflow::file_digest(dir.file("c")));
    CHECK(dataflow::file_digest(dir.file("a")).size() == 16);
}
