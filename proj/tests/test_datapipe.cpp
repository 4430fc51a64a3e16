#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "dataflow/datapipe.hpp"
#include "oracles.hpp"

using dataflow::Labels;
using dataflow::Matrix;
using dataflow::Series;

TEST_CASE("whitening a two-point column gives a symmetric pair") {
    const auto [white, stats] = dataflow::whiten(Matrix::from_rows({{1.0}, {3.0}}));
    CHECK(white(0, 0) == -1.0);
    CHECK(white(1, 0) == 1.0);
    CHECK(stats.mean[0] == 2.0);
    CHECK(stats.stddev[0] == 1.0);
}

TEST_CASE("whitening is idempotent up to rounding") {
    oracle::Rng rng(3);
    const Matrix y = oracle::random_matrix(rng, 50, 2, -4.0, 9.0);
    const Matrix once = dataflow::whiten(y).first;
    const Matrix twice = dataflow::whiten(once).first;
    for (std::size_t r = 0; r < once.rows(); ++r) {
        for (std::size_t c = 0; c < once.cols(); ++c) {
            CHECK(std::abs(once(r, c) - twice(r, c)) <= 1e-9);
        }
    }
}

TEST_CASE("whitened columns have zero mean and unit variance") {
    oracle::Rng rng(5);
    const Matrix y = oracle::random_matrix(rng, 100, 2, 10.0, 60.0);
    const auto [white, stats] = dataflow::whiten(y);
    for (std::size_t c = 0; c < 2; ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < 100; ++r) mean += white(r, c);
        mean /= 100.0;
        double var = 0.0;
        for (std::size_t r = 0; r < 100; ++r) {
            const double d = white(r, c) - mean;
            var += d * d;
        }
        var /= 100.0;
        CHECK(std::abs(mean) <= 1e-9);
        CHECK(std::abs(var - 1.0) <= 1e-9);
    }
}

TEST_CASE("zero-variance column is rejected by name") {
    const Matrix y = Matrix::from_rows({{1.0, 5.0}, {2.0, 5.0}, {3.0, 5.0}});
    try {
        dataflow::whiten(y);
        FAIL("expected ValidationError");
    } catch (const dataflow::ValidationError& e) {
        CHECK(std::string(e.what()).find("column 1") != std::string::npos);
    }
}

TEST_CASE("lag embedding of a short ramp") {
    const auto [x, y] = dataflow::lag_embed({{1, 2, 3, 4, 5}, "daily"}, 2);
    CHECK(x.rows() == 3);
    CHECK(x.cols() == 2);
    // Most recent lag first: x_t = [y_{t-1}, y_{t-2}].
    CHECK(x(0, 0) == 2.0);
    CHECK(x(0, 1) == 1.0);
    CHECK(x(2, 0) == 4.0);
    CHECK(x(2, 1) == 3.0);
    CHECK(y(0, 0) == 3.0);
    CHECK(y(2, 0) == 5.0);
}

TEST_CASE("lag embedding boundary and error cases") {
    const auto [x, y] = dataflow::lag_embed({{1, 2, 3, 4, 5}, "daily"}, 4);
    CHECK(x.rows() == 1);
    CHECK(y(0, 0) == 5.0);
    CHECK_THROWS_AS(dataflow::lag_embed({{1, 2, 3}, "daily"}, 3), dataflow::ValidationError);
    CHECK_THROWS_AS(dataflow::lag_embed({{1, 2, 3}, "daily"}, 0), dataflow::ParamError);
}

TEST_CASE("lag rows overlap with the previous row's target") {
    oracle::Rng rng(7);
    Series s{{}, "weekly"};
    for (int t = 0; t < 40; ++t) s.values.push_back(rng.unit());
    const auto [x, y] = dataflow::lag_embed(s, 5);
    for (std::size_t t = 1; t < x.rows(); ++t) {
        CHECK(x(t, 0) == y(t - 1, 0));
    }
}

TEST_CASE("shuffled indices are a deterministic permutation") {
    const auto a = dataflow::shuffled_indices(100, 42);
    const auto b = dataflow::shuffled_indices(100, 42);
    const auto c = dataflow::shuffled_indices(100, 43);
    CHECK(a == b);
    CHECK(a != c);
    std::vector<bool> seen(100, false);
    for (const auto i : a) seen[i] = true;
    for (const bool s : seen) CHECK(s);
}

TEST_CASE("a full-size subset reproduces the whole-dataset index") {
    oracle::Rng rng(11);
    const Matrix x = oracle::random_matrix(rng, 60, 2);
    const Labels labels = oracle::random_labels(rng, 60, 3);
    const std::vector<std::size_t> sizes = {60};
    const auto curve = dataflow::si_curve(x, labels, 1, sizes, 9);
    CHECK(curve.size() == 1);
    CHECK(curve[0].value == dataflow::separation_index(x, labels).value);
}

TEST_CASE("subset curves are reproducible under a fixed seed and sorted by size") {
    oracle::Rng rng(13);
    const Matrix x = oracle::random_matrix(rng, 80, 2);
    const Labels labels = oracle::random_labels(rng, 80, 2);
    const std::vector<std::size_t> sizes = {64, 8, 32};
    const auto a = dataflow::si_curve(x, labels, 1, sizes, 5);
    const auto b = dataflow::si_curve(x, labels, 1, sizes, 5);
    REQUIRE(a.size() == 3);
    CHECK(a[0].size == 8);
    CHECK(a[2].size == 64);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].value == b[i].value);
    }
    CHECK_THROWS_AS(dataflow::si_curve(x, labels, 1, std::vector<std::size_t>{81}, 5),
                    dataflow::ParamError);
    CHECK_THROWS_AS(dataflow::si_curve(x, labels, 1, std::vector<std::size_t>{1}, 5),
                    dataflow::ParamError);
}

TEST_CASE("curve scatter shrinks as the subset grows") {
    // Two well-separated clusters with label noise; the SI estimate at size 500
    // should vary less across seeds than at size 10.
    oracle::Rng rng(17);
    const std::size_t q = 600;
    Matrix x(q, 2);
    std::vector<std::int32_t> lab(q);
    for (std::size_t i = 0; i < q; ++i) {
        const bool right = rng.unit() < 0.5;
        x(i, 0) = (right ? 4.0 : -4.0) + rng.gaussian();
        x(i, 1) = rng.gaussian();
        lab[i] = right ? 2 : 1;
        if (rng.unit() < 0.1) lab[i] = 3 - lab[i];  // 10% label noise
    }
    const Labels labels = dataflow::make_labels(std::move(lab), 2);

    const std::vector<std::size_t> sizes = {10, 500};
    std::vector<double> at_small, at_large;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto curve = dataflow::si_curve(x, labels, 1, sizes, seed);
        at_small.push_back(curve[0].value);
        at_large.push_back(curve[1].value);
    }
    const auto sd = [](const std::vector<double>& v) {
        double mean = 0.0;
        for (const double x_i : v) mean += x_i;
        mean /= static_cast<double>(v.size());
        double var = 0.0;
        for (const double x_i : v) var += (x_i - mean) * (x_i - mean);
        return std::sqrt(var / static_cast<double>(v.size()));
    };
    CHECK(sd(at_large) < sd(at_small));
}

TEST_CASE("smoothness curves run the same pipeline") {
    oracle::Rng rng(19);
    const Matrix x = oracle::random_matrix(rng, 50, 3);
    const Matrix y = oracle::random_matrix(rng, 50, 1);
    const std::vector<std::size_t> sizes = {20, 50};
    const auto curve = dataflow::smi_curve(x, y, {4.0, 1}, sizes, 3);
    REQUIRE(curve.size() == 2);
    CHECK(curve[1].value == dataflow::smoothness_index(x, y, 4.0));
    CHECK(!curve[0].matches.has_value());
}
