#include "gralp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gralp/errors.hpp"

namespace gralp {

Graph::Graph(Mat weights) : weights_(std::move(weights)) {
    const auto n = weights_.rows();
    if (n == 0 || weights_.cols() != n) throw InvalidParameter("weight matrix must be square");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (weights_(i, i) != 0.0) throw InvalidParameter("weight matrix diagonal must be zero");
        for (Eigen::Index j = 0; j < n; ++j) {
            const double w = weights_(i, j);
            if (!std::isfinite(w) || w < 0.0)
                throw InvalidParameter("weights must be finite and non-negative");
            if (w != weights_(j, i)) throw InvalidParameter("weight matrix must be symmetric");
        }
    }
    degrees_ = weights_.rowwise().sum();
}

namespace {

// k smallest entries of a distance row (excluding self), ties toward the
// lower index.
std::vector<int> nearest_indices(const Vec& dist, int self, int k) {
    std::vector<int> order;
    order.reserve(dist.size() - 1);
    for (int j = 0; j < dist.size(); ++j)
        if (j != self) order.push_back(j);
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
        if (dist(a) != dist(b)) return dist(a) < dist(b);
        return a < b;
    });
    order.resize(static_cast<std::size_t>(k));
    return order;
}

} // namespace

Graph build_knn_graph(const FeatureSet& features, int k, std::optional<double> sigma,
                      dense::ExecPolicy policy) {
    const int n = static_cast<int>(features.samples.rows());
    if (n < 2 || features.samples.cols() < 1)
        throw InvalidParameter("need at least 2 samples with at least 1 feature");
    if (!features.samples.allFinite()) throw InvalidParameter("features must be finite");
    if (k < 1) throw InvalidParameter("k must be positive");
    if (k >= n) throw InvalidParameter("k must be smaller than the number of samples");

    Mat weights = Mat::Zero(n, n);
    if (features.metric == Metric::euclidean) {
        if (!sigma || !(*sigma > 0.0))
            throw InvalidParameter("euclidean metric requires a positive sigma");
        const double inv_two_sigma_sq = 1.0 / (2.0 * *sigma * *sigma);
        const Mat d2 = dense::pairwise_squared_distances(features.samples, policy);
        for (int i = 0; i < n; ++i) {
            const Vec row = d2.row(i).transpose();
            for (int j : nearest_indices(row, i, k)) {
                const double w = std::exp(-d2(i, j) * inv_two_sigma_sq);
                weights(i, j) = w;
                weights(j, i) = w;
            }
        }
    } else {
        const Mat sim = dense::cosine_similarities(features.samples, policy);
        for (int i = 0; i < n; ++i) {
            // nearest under cosine = largest similarity
            const Vec neg = -sim.row(i).transpose();
            for (int j : nearest_indices(neg, i, k)) {
                const double w = std::max(0.0, sim(i, j));
                weights(i, j) = w;
                weights(j, i) = w;
            }
        }
    }
    return Graph(std::move(weights));
}

Laplacian laplacian(const Graph& g, LaplacianVariant variant) {
    const int n = g.size();
    Mat l;
    if (variant == LaplacianVariant::unnormalized) {
        l = -g.weights();
        for (int i = 0; i < n; ++i) l(i, i) = g.degrees()(i);
    } else {
        // I - D^{-1/2} W D^{-1/2}; degree-0 nodes keep the identity row.
        Vec inv_sqrt(n);
        for (int i = 0; i < n; ++i) {
            const double d = g.degrees()(i);
            inv_sqrt(i) = d > 0.0 ? 1.0 / std::sqrt(d) : 0.0;
        }
        l = Mat::Identity(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && g.weights()(i, j) != 0.0)
                    l(i, j) = -g.weights()(i, j) * inv_sqrt(i) * inv_sqrt(j);
    }
    return Laplacian{std::move(l), variant};
}

} // namespace gralp
