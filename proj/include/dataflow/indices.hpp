#ifndef DATAFLOW_INDICES_HPP
#define DATAFLOW_INDICES_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dataflow/matrix.hpp"
#include "dataflow/neighbors.hpp"

namespace dataflow {

inline constexpr double kDefaultBeta = 4.0;

struct SeparationResult {
    double value = 0.0;        // in [0, 1]; value * Q is exactly `matches`
    std::int64_t matches = 0;  // samples whose considered neighbors all share their label
};

struct SmoothnessParams {
    double beta = kDefaultBeta;  // smoothness coefficient, > 0
    std::size_t order = 1;       // r, number of nearest neighbors considered
};

struct QuantizationSpec {
    std::size_t levels = 0;  // n_c
    double y_min = 0.0;
    double y_max = 0.0;
    double width = 0.0;      // (y_max - y_min) / levels
};

/// Fraction of samples whose nearest neighbor (lowest-index tie rule) carries
/// the same label.
SeparationResult separation_index(const Matrix& x, const Labels& labels, int threads = 0);

/// Strict variant: a sample counts only if ALL `order` nearest neighbors share
/// its label. order == 1 reproduces separation_index exactly.
SeparationResult separation_index_r(const Matrix& x, const Labels& labels,
                                    std::size_t order, int threads = 0);

/// Mean over samples of exp(-beta * (dy_near - dy_min)), where dy_near is the
/// squared target distance to the sample's nearest neighbor in x-space and
/// dy_min the smallest squared target distance to any other sample. Lies in
/// (0, 1]; equals 1 exactly when x-proximity always attains the target minimum.
double smoothness_index(const Matrix& x, const Matrix& y, double beta = kDefaultBeta,
                        int threads = 0);

/// Strict variant over the `order` nearest x-neighbors with distance-ratio
/// weights: factor k is exp(-beta * w_k * (dy_near(k) - dy_min(k))) where
/// w_k = d_x(1) / d_x(k) when d_x(k) > 0, else 1, and dy_min(k) is the k-th
/// smallest squared target distance. The raw product mean is returned without
/// clamping; individual factors may exceed 1 when x- and y-orderings disagree.
double smoothness_index_r(const Matrix& x, const Matrix& y, const SmoothnessParams& params,
                          int threads = 0);

/// Per-sample exponent arguments dy_near - dy_min of smoothness_index, for
/// inspection; every entry is >= 0.
std::vector<double> smoothness_exponents(const Matrix& x, const Matrix& y, int threads = 0);

/// Quantizes scalar targets into `levels` equal-width classes over
/// [min(y), max(y)]. Samples equal to the maximum clamp to the top level,
/// which the half-open interval rule would otherwise leave unassigned.
/// Throws ValidationError when all targets are equal (degenerate range).
std::pair<Labels, QuantizationSpec> quantize_targets(std::span<const double> y,
                                                     std::size_t levels);

/// Smoothness of a classification problem under the degenerate class metric
/// (zero distance within a class, infinite across): each sample contributes
/// exp(0) = 1 on a label match and 0 otherwise, so the result equals
/// separation_index bit-exactly. Requires every class to have at least two
/// members (ValidationError naming the class otherwise).
double si_smi_bridge(const Matrix& x, const Labels& labels, int threads = 0);

} // namespace dataflow

#endif
