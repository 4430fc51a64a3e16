#include "dataflow/neighbors.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace dataflow {

namespace {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace

void parallel_rows(std::size_t count, int threads,
                   const std::function<void(std::size_t, std::size_t)>& body) {
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)),
                              count == 0 ? 1 : count);
    if (workers <= 1) {
        body(0, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    for (auto& t : pool) t.join();
}

Matrix pairwise_sq_distances(const Matrix& points, int threads) {
    validate_points(points);
    const std::size_t q = points.rows();
    Matrix dist(q, q);
    parallel_rows(q, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t a = begin; a < end; ++a) {
            for (std::size_t b = a + 1; b < q; ++b) {
                const double d = row_sq_distance(points, a, b);
                dist(a, b) = d;
                dist(b, a) = d;
            }
        }
    });
    return dist;
}

NeighborTable knn(const Matrix& points, std::size_t order, int threads) {
    validate_points(points);
    const std::size_t q = points.rows();
    if (order < 1 || order > q - 1) {
        throw ParamError("knn order " + std::to_string(order) + " outside [1, " +
                         std::to_string(q - 1) + "]");
    }

    NeighborTable table;
    table.rows = q;
    table.order = order;
    table.index.assign(q * order, -1);
    table.sq_dist.assign(q * order, 0.0);

    const std::size_t dims = points.cols();
    parallel_rows(q, threads, [&](std::size_t begin, std::size_t end) {
        // Per-row top-`order` selection kept sorted by distance. Candidates are
        // scanned in ascending sample index, so on equal distances the earlier
        // (lower) index is already in place and a later one can never displace
        // it: the result matches a full stable sort by (distance, index).
        std::vector<double> best_d(order);
        std::vector<std::int32_t> best_i(order);
        for (std::size_t a = begin; a < end; ++a) {
            const double* row = points.row_ptr(a);
            std::size_t filled = 0;
            for (std::size_t b = 0; b < q; ++b) {
                if (b == a) continue;
                const double d = sq_distance(row, points.row_ptr(b), dims);
                if (filled == order && d >= best_d[filled - 1]) continue;
                std::size_t pos = filled < order ? filled : order - 1;
                while (pos > 0 && d < best_d[pos - 1]) {
                    best_d[pos] = best_d[pos - 1];
                    best_i[pos] = best_i[pos - 1];
                    --pos;
                }
                best_d[pos] = d;
                best_i[pos] = static_cast<std::int32_t>(b);
                if (filled < order) ++filled;
            }
            std::copy(best_d.begin(), best_d.end(), table.sq_dist.begin() + a * order);
            std::copy(best_i.begin(), best_i.end(), table.index.begin() + a * order);
        }
    });
    return table;
}

} // namespace dataflow
