#include "dataflow/indices.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace dataflow {

namespace {

void check_labels(const Matrix& x, const Labels& labels) {
    if (labels.size() != x.rows()) {
        std::ostringstream msg;
        msg << "label count " << labels.size() << " does not match sample count " << x.rows();
        throw ValidationError(msg.str());
    }
}

void check_targets(const Matrix& x, const Matrix& y) {
    if (y.rows() != x.rows()) {
        std::ostringstream msg;
        msg << "target row count " << y.rows() << " does not match sample count " << x.rows();
        throw ValidationError(msg.str());
    }
    if (y.cols() < 1) throw ValidationError("targets need at least one output dimension");
    validate_finite(y, "targets");
}

void check_beta(double beta) {
    if (!(beta > 0.0)) {
        throw ParamError("beta must be > 0, got " + std::to_string(beta));
    }
}

} // namespace

SeparationResult separation_index(const Matrix& x, const Labels& labels, int threads) {
    return separation_index_r(x, labels, 1, threads);
}

SeparationResult separation_index_r(const Matrix& x, const Labels& labels, std::size_t order,
                                    int threads) {
    check_labels(x, labels);
    const NeighborTable table = knn(x, order, threads);
    const std::size_t q = x.rows();

    std::int64_t matches = 0;
    for (std::size_t a = 0; a < q; ++a) {
        const auto neighbors = table.row_indices(a);
        bool all_same = true;
        for (const std::int32_t h : neighbors) {
            if (labels.values[static_cast<std::size_t>(h)] != labels.values[a]) {
                all_same = false;
                break;
            }
        }
        matches += all_same ? 1 : 0;
    }
    return {static_cast<double>(matches) / static_cast<double>(q), matches};
}

double smoothness_index(const Matrix& x, const Matrix& y, double beta, int threads) {
    check_beta(beta);
    const std::vector<double> exponents = smoothness_exponents(x, y, threads);

    double sum = 0.0;
    for (const double delta : exponents) {
        sum += std::exp(-beta * delta);
    }
    return sum / static_cast<double>(exponents.size());
}

std::vector<double> smoothness_exponents(const Matrix& x, const Matrix& y, int threads) {
    check_targets(x, y);
    const NeighborTable near_x = knn(x, 1, threads);
    const NeighborTable near_y = knn(y, 1, threads);
    const std::size_t q = x.rows();

    std::vector<double> deltas(q);
    for (std::size_t a = 0; a < q; ++a) {
        const std::size_t nx = static_cast<std::size_t>(near_x.index[a]);
        const double dy_near = row_sq_distance(y, a, nx);
        const double dy_min = near_y.sq_dist[a];  // same accumulation path as dy_near
        deltas[a] = dy_near - dy_min;
    }
    return deltas;
}

double smoothness_index_r(const Matrix& x, const Matrix& y, const SmoothnessParams& params,
                          int threads) {
    check_beta(params.beta);
    check_targets(x, y);
    const std::size_t order = params.order;
    const NeighborTable near_x = knn(x, order, threads);
    const NeighborTable near_y = knn(y, order, threads);
    const std::size_t q = x.rows();

    double sum = 0.0;
    for (std::size_t a = 0; a < q; ++a) {
        const auto x_dists = near_x.row_dists(a);
        const auto x_idx = near_x.row_indices(a);
        const auto y_dists = near_y.row_dists(a);
        const double dx_first = x_dists[0];

        double product = 1.0;
        for (std::size_t k = 0; k < order; ++k) {
            const double dx_k = x_dists[k];
            const double weight = dx_k > 0.0 ? dx_first / dx_k : 1.0;
            const double dy_near = row_sq_distance(y, a, static_cast<std::size_t>(x_idx[k]));
            const double dy_min = y_dists[k];  // k-th smallest squared target distance
            product *= std::exp(-params.beta * (weight * (dy_near - dy_min)));
        }
        sum += product;
    }
    return sum / static_cast<double>(q);
}

std::pair<Labels, QuantizationSpec> quantize_targets(std::span<const double> y,
                                                     std::size_t levels) {
    if (levels < 1) throw ParamError("quantization needs at least 1 level");
    if (y.size() < 2) throw ValidationError("quantization needs at least 2 samples");
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!std::isfinite(y[i])) {
            throw ValidationError("targets: non-finite value at sample " + std::to_string(i));
        }
    }

    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    QuantizationSpec spec;
    spec.levels = levels;
    spec.y_min = *lo;
    spec.y_max = *hi;
    if (spec.y_max <= spec.y_min) {
        throw ValidationError("quantization range is degenerate: all targets equal " +
                              std::to_string(spec.y_min));
    }
    spec.width = (spec.y_max - spec.y_min) / static_cast<double>(levels);

    std::vector<std::int32_t> labels(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        // Half-open levels [y_min + (l-1)w, y_min + l*w); the maximum clamps to
        // the top level, which the rule leaves unassigned.
        auto level = static_cast<std::int64_t>(std::floor((y[i] - spec.y_min) / spec.width)) + 1;
        level = std::clamp<std::int64_t>(level, 1, static_cast<std::int64_t>(levels));
        labels[i] = static_cast<std::int32_t>(level);
    }
    return {make_labels(std::move(labels), static_cast<std::int32_t>(levels)), spec};
}

double si_smi_bridge(const Matrix& x, const Labels& labels, int threads) {
    check_labels(x, labels);
    std::vector<std::int64_t> class_sizes(static_cast<std::size_t>(labels.classes) + 1, 0);
    for (const std::int32_t v : labels.values) ++class_sizes[static_cast<std::size_t>(v)];
    for (std::size_t c = 1; c < class_sizes.size(); ++c) {
        if (class_sizes[c] == 1) {
            throw ValidationError("class " + std::to_string(c) +
                                  " has a single member; the within-class minimum distance "
                                  "is undefined");
        }
    }

    const NeighborTable table = knn(x, 1, threads);
    const std::size_t q = x.rows();
    double sum = 0.0;
    for (std::size_t a = 0; a < q; ++a) {
        const std::size_t nearest = static_cast<std::size_t>(table.index[a]);
        if (labels.values[a] == labels.values[nearest]) {
            sum += std::exp(0.0);  // zero within-class distance
        }
        // Different labels mean infinite class distance: exp(-beta * inf) = 0,
        // realized as a skipped term to keep arithmetic finite.
    }
    return sum / static_cast<double>(q);
}

} // namespace dataflow
