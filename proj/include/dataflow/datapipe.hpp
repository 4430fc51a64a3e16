#ifndef DATAFLOW_DATAPIPE_HPP
#define DATAFLOW_DATAPIPE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dataflow/indices.hpp"
#include "dataflow/matrix.hpp"

namespace dataflow {

/// Column-wise standardization parameters, kept so held-out data can be
/// transformed with the statistics of the fitting set.
struct WhitenStats {
    std::vector<double> mean;
    std::vector<double> stddev;  // population convention (divide by Q)
};

/// Standardizes every column to mean 0, variance 1 (population variance).
/// Throws ValidationError naming the first zero-variance column.
std::pair<Matrix, WhitenStats> whiten(const Matrix& targets);

/// Applies previously estimated stats to new data of the same width.
Matrix apply_whiten(const Matrix& targets, const WhitenStats& stats);

/// Ordered scalar observations with a declared sampling interval label
/// ("daily", "weekly", "monthly", ...). The interval is report metadata only.
struct Series {
    std::vector<double> values;
    std::string interval;
};

/// Builds the lagged regression dataset: for every t >= lags, the input row is
/// [y_{t-1}, ..., y_{t-lags}] and the target is y_t. Returns (inputs, targets)
/// with values.size() - lags rows.
std::pair<Matrix, Matrix> lag_embed(const Series& series, std::size_t lags);

/// Deterministic Fisher-Yates permutation of {0..count-1}. The generator and
/// the bounded draw are pinned here so a seed means the same shuffle on every
/// platform and build.
std::vector<std::size_t> shuffled_indices(std::size_t count, std::uint64_t seed);

Matrix take_rows(const Matrix& m, std::span<const std::size_t> picks);
Labels take_labels(const Labels& labels, std::span<const std::size_t> picks);

struct CurvePoint {
    std::size_t size = 0;
    double value = 0.0;
    std::optional<std::int64_t> matches;  // present for separation curves
};

/// Index value over growing prefixes of ONE seeded shuffle, so the curve sweeps
/// a single nested family of subsets. Sizes are evaluated in ascending order;
/// each must be in [2, Q].
std::vector<CurvePoint> si_curve(const Matrix& x, const Labels& labels, std::size_t order,
                                 std::span<const std::size_t> sizes, std::uint64_t seed,
                                 int threads = 0);

std::vector<CurvePoint> smi_curve(const Matrix& x, const Matrix& y,
                                  const SmoothnessParams& params,
                                  std::span<const std::size_t> sizes, std::uint64_t seed,
                                  int threads = 0);

} // namespace dataflow

#endif
