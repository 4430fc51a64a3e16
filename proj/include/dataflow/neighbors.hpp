#ifndef DATAFLOW_NEIGHBORS_HPP
#define DATAFLOW_NEIGHBORS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "dataflow/matrix.hpp"

namespace dataflow {

/// Per-sample nearest-neighbor orderings, truncated to `order` entries.
///
/// Row q lists the `order` samples closest to q (never q itself) by ascending
/// squared Euclidean distance. Equal distances are broken by the lower sample
/// index, so the table is a pure function of its input: identical matrices
/// give identical tables regardless of thread count or scheduling.
struct NeighborTable {
    std::size_t rows = 0;
    std::size_t order = 0;
    std::vector<std::int32_t> index;  // rows * order, row-major
    std::vector<double> sq_dist;      // matching squared distances, non-decreasing per row

    std::span<const std::int32_t> row_indices(std::size_t q) const {
        return {index.data() + q * order, order};
    }
    std::span<const double> row_dists(std::size_t q) const {
        return {sq_dist.data() + q * order, order};
    }
};

/// Squared Euclidean distance between two feature rows. Accumulates in
/// ascending feature order; every distance in this library flows through here
/// so equal inputs produce bit-equal outputs.
inline double sq_distance(const double* a, const double* b, std::size_t dims) {
    double sum = 0.0;
    for (std::size_t j = 0; j < dims; ++j) {
        const double diff = a[j] - b[j];
        sum += diff * diff;
    }
    return sum;
}

inline double row_sq_distance(const Matrix& m, std::size_t a, std::size_t b) {
    return sq_distance(m.row_ptr(a), m.row_ptr(b), m.cols());
}

/// Full Q x Q matrix of squared Euclidean distances. Symmetric, zero diagonal.
/// Intended for small inputs; the kNN path below never materializes it.
Matrix pairwise_sq_distances(const Matrix& points, int threads = 0);

/// Exact k nearest neighbors of every sample by brute force.
/// Requires 1 <= order <= Q - 1 (ParamError otherwise) and finite input
/// (ValidationError naming row/col otherwise).
NeighborTable knn(const Matrix& points, std::size_t order, int threads = 0);

/// Splits [0, count) into contiguous chunks and runs `body(begin, end)` on up
/// to `threads` workers (0 = hardware concurrency). Callers write results to
/// disjoint per-row slots, so output never depends on the split.
void parallel_rows(std::size_t count, int threads,
                   const std::function<void(std::size_t, std::size_t)>& body);

} // namespace dataflow

#endif
