#pragma once

#include <optional>

#include "gralp/dense_ops.hpp"
#include "gralp/types.hpp"

namespace gralp {

enum class Metric { euclidean, cosine };

/// Feature vectors, one sample per row, plus the metric used to compare them.
struct FeatureSet {
    Mat samples;
    Metric metric = Metric::euclidean;
};

/// Undirected weighted graph with dense storage. The weight matrix is
/// symmetric and non-negative with a zero diagonal; degrees are the cached
/// row sums.
class Graph {
public:
    explicit Graph(Mat weights);

    int size() const { return static_cast<int>(weights_.rows()); }
    const Mat& weights() const { return weights_; }
    const Vec& degrees() const { return degrees_; }

private:
    Mat weights_;
    Vec degrees_;
};

enum class LaplacianVariant { unnormalized, normalized };

struct Laplacian {
    Mat matrix;
    LaplacianVariant variant = LaplacianVariant::unnormalized;

    int size() const { return static_cast<int>(matrix.rows()); }
};

/// K-nearest-neighbor graph. Each node is connected to its k nearest
/// neighbors under the feature metric; adjacency is symmetrized by union
/// (an edge is kept when either endpoint selects the other). Euclidean
/// weights use the Gaussian kernel exp(-d^2 / (2 sigma^2)) and require
/// sigma; cosine weights are max(0, cosine similarity). Neighbor ties break
/// toward the lower node index.
Graph build_knn_graph(const FeatureSet& features, int k, std::optional<double> sigma,
                      dense::ExecPolicy policy = dense::ExecPolicy::parallel);

/// L = D - W, or the normalized variant D^{-1/2} (D - W) D^{-1/2} where
/// isolated nodes (degree 0) contribute identity rows.
Laplacian laplacian(const Graph& g, LaplacianVariant variant = LaplacianVariant::unnormalized);

} // namespace gralp
