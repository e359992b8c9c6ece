#pragma once

#include <vector>

#include "gralp/types.hpp"

// Data-parallel dense kernels used by graph construction and frame assembly.
// Every kernel has an OpenMP path and a plain serial path; the two compute
// each output entry with identical arithmetic, so their results are bitwise
// equal. The serial path is the reference implementation used by the tests
// and the benchmark.

namespace gralp::dense {

enum class ExecPolicy { serial, parallel };

/// D(i,j) = ||x_i - x_j||^2 with D(i,i) = 0; x has one sample per row.
Mat pairwise_squared_distances(const Mat& x, ExecPolicy policy = ExecPolicy::parallel);

/// S(i,j) = <x_i, x_j> / (||x_i|| ||x_j||), S(i,i) = 1. Rows must be nonzero.
Mat cosine_similarities(const Mat& x, ExecPolicy policy = ExecPolicy::parallel);

/// Columns of U diag(w) U^T at a set of nodes, for several spectral weight
/// vectors w. Output column p*W + j (W = weights.size()) holds
/// U (weights[j] .* U.row(nodes[p])^T), i.e. the filtered Dirac delta at
/// nodes[p] under weight vector j.
Mat filtered_delta_columns(const Mat& u, const std::vector<Vec>& weights,
                           const std::vector<int>& nodes,
                           ExecPolicy policy = ExecPolicy::parallel);

} // namespace gralp::dense
