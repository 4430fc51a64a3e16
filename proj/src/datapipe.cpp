#include "dataflow/datapipe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace dataflow {

namespace {

// splitmix64; self-contained so shuffles do not depend on the standard
// library's engine or distribution internals.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // Multiply-shift bounded draw in [0, bound).
    std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }
};

std::vector<std::size_t> checked_sizes(std::span<const std::size_t> sizes, std::size_t total) {
    std::vector<std::size_t> sorted(sizes.begin(), sizes.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.empty()) throw ParamError("subset curve needs at least one size");
    for (const std::size_t s : sorted) {
        if (s < 2 || s > total) {
            std::ostringstream msg;
            msg << "subset size " << s << " outside [2, " << total << "]";
            throw ParamError(msg.str());
        }
    }
    return sorted;
}

std::vector<std::size_t> prefix(const std::vector<std::size_t>& shuffle, std::size_t n) {
    return {shuffle.begin(), shuffle.begin() + static_cast<std::ptrdiff_t>(n)};
}

} // namespace

std::pair<Matrix, WhitenStats> whiten(const Matrix& targets) {
    validate_finite(targets, "targets");
    const std::size_t q = targets.rows();
    const std::size_t m = targets.cols();
    if (q < 2) throw ValidationError("whitening needs at least 2 samples");

    WhitenStats stats;
    stats.mean.resize(m);
    stats.stddev.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < q; ++i) sum += targets(i, j);
        const double mean = sum / static_cast<double>(q);
        double var = 0.0;
        for (std::size_t i = 0; i < q; ++i) {
            const double d = targets(i, j) - mean;
            var += d * d;
        }
        var /= static_cast<double>(q);
        if (var == 0.0) {
            throw ValidationError("column " + std::to_string(j) +
                                  " has zero variance and cannot be whitened");
        }
        stats.mean[j] = mean;
        stats.stddev[j] = std::sqrt(var);
    }
    return {apply_whiten(targets, stats), std::move(stats)};
}

Matrix apply_whiten(const Matrix& targets, const WhitenStats& stats) {
    if (stats.mean.size() != targets.cols() || stats.stddev.size() != targets.cols()) {
        throw ValidationError("whitening stats cover " + std::to_string(stats.mean.size()) +
                              " columns, data has " + std::to_string(targets.cols()));
    }
    Matrix out(targets.rows(), targets.cols());
    for (std::size_t i = 0; i < targets.rows(); ++i) {
        for (std::size_t j = 0; j < targets.cols(); ++j) {
            out(i, j) = (targets(i, j) - stats.mean[j]) / stats.stddev[j];
        }
    }
    return out;
}

std::pair<Matrix, Matrix> lag_embed(const Series& series, std::size_t lags) {
    const std::size_t len = series.values.size();
    if (lags < 1) throw ParamError("lag embedding needs at least 1 lag");
    if (len <= lags) {
        std::ostringstream msg;
        msg << "series of length " << len << " is too short for " << lags << " lags";
        throw ValidationError(msg.str());
    }
    for (std::size_t t = 0; t < len; ++t) {
        if (!std::isfinite(series.values[t])) {
            throw ValidationError("series: non-finite value at position " + std::to_string(t));
        }
    }

    const std::size_t rows = len - lags;
    Matrix x(rows, lags);
    Matrix y(rows, 1);
    for (std::size_t t = lags; t < len; ++t) {
        const std::size_t r = t - lags;
        for (std::size_t j = 0; j < lags; ++j) {
            x(r, j) = series.values[t - 1 - j];  // most recent lag first
        }
        y(r, 0) = series.values[t];
    }
    return {std::move(x), std::move(y)};
}

std::vector<std::size_t> shuffled_indices(std::size_t count, std::uint64_t seed) {
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    SplitMix64 rng(seed);
    for (std::size_t i = count; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(order[i - 1], order[j]);
    }
    return order;
}

Matrix take_rows(const Matrix& m, std::span<const std::size_t> picks) {
    Matrix out(picks.size(), m.cols());
    for (std::size_t i = 0; i < picks.size(); ++i) {
        std::copy(m.row_ptr(picks[i]), m.row_ptr(picks[i]) + m.cols(), out.row_ptr(i));
    }
    return out;
}

Labels take_labels(const Labels& labels, std::span<const std::size_t> picks) {
    Labels out;
    out.classes = labels.classes;
    out.values.reserve(picks.size());
    for (const std::size_t p : picks) out.values.push_back(labels.values[p]);
    return out;
}

std::vector<CurvePoint> si_curve(const Matrix& x, const Labels& labels, std::size_t order,
                                 std::span<const std::size_t> sizes, std::uint64_t seed,
                                 int threads) {
    if (labels.size() != x.rows()) {
        throw ValidationError("label count does not match sample count");
    }
    const auto sorted = checked_sizes(sizes, x.rows());
    const auto shuffle = shuffled_indices(x.rows(), seed);

    std::vector<CurvePoint> curve;
    curve.reserve(sorted.size());
    for (const std::size_t n : sorted) {
        const auto picks = prefix(shuffle, n);
        const SeparationResult res = separation_index_r(take_rows(x, picks),
                                                        take_labels(labels, picks), order,
                                                        threads);
        curve.push_back({n, res.value, res.matches});
    }
    return curve;
}

std::vector<CurvePoint> smi_curve(const Matrix& x, const Matrix& y,
                                  const SmoothnessParams& params,
                                  std::span<const std::size_t> sizes, std::uint64_t seed,
                                  int threads) {
    if (y.rows() != x.rows()) {
        throw ValidationError("target row count does not match sample count");
    }
    const auto sorted = checked_sizes(sizes, x.rows());
    const auto shuffle = shuffled_indices(x.rows(), seed);

    std::vector<CurvePoint> curve;
    curve.reserve(sorted.size());
    for (const std::size_t n : sorted) {
        const auto picks = prefix(shuffle, n);
        const double value = smoothness_index_r(take_rows(x, picks), take_rows(y, picks),
                                                params, threads);
        curve.push_back({n, value, std::nullopt});
    }
    return curve;
}

} // namespace dataflow
