#include "gralp/dense_ops.hpp"

#include <cmath>

#include "gralp/errors.hpp"

namespace gralp::dense {

namespace {

// Entry formulas shared by both execution paths so serial and parallel
// results are bitwise identical.

inline double sq_dist(const Mat& x, int i, int j) {
    double d = 0.0;
    for (int c = 0; c < x.cols(); ++c) {
        const double diff = x(i, c) - x(j, c);
        d += diff * diff;
    }
    return d;
}

inline void fill_distance_row(const Mat& x, Mat& out, int i) {
    out(i, i) = 0.0;
    for (int j = i + 1; j < x.rows(); ++j) {
        const double d = sq_dist(x, i, j);
        out(i, j) = d;
        out(j, i) = d;
    }
}

inline void fill_cosine_row(const Mat& x, const Vec& inv_norm, Mat& out, int i) {
    out(i, i) = 1.0;
    for (int j = i + 1; j < x.rows(); ++j) {
        double dot = 0.0;
        for (int c = 0; c < x.cols(); ++c) dot += x(i, c) * x(j, c);
        const double s = dot * inv_norm(i) * inv_norm(j);
        out(i, j) = s;
        out(j, i) = s;
    }
}

inline void fill_filtered_column(const Mat& u, const std::vector<Vec>& weights,
                                 const std::vector<int>& nodes, Mat& out, int col) {
    const int per_node = static_cast<int>(weights.size());
    const int node = nodes[static_cast<std::size_t>(col / per_node)];
    const Vec& w = weights[static_cast<std::size_t>(col % per_node)];
    out.col(col).noalias() = u * w.cwiseProduct(u.row(node).transpose());
}

} // namespace

Mat pairwise_squared_distances(const Mat& x, ExecPolicy policy) {
    const int n = static_cast<int>(x.rows());
    Mat out(n, n);
    if (policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n; ++i) fill_distance_row(x, out, i);
    } else {
        for (int i = 0; i < n; ++i) fill_distance_row(x, out, i);
    }
    return out;
}

Mat cosine_similarities(const Mat& x, ExecPolicy policy) {
    const int n = static_cast<int>(x.rows());
    Vec inv_norm(n);
    for (int i = 0; i < n; ++i) {
        const double norm = x.row(i).norm();
        if (!(norm > 0.0))
            throw InvalidParameter("cosine metric undefined for zero-norm sample " +
                                   std::to_string(i));
        inv_norm(i) = 1.0 / norm;
    }
    Mat out(n, n);
    if (policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n; ++i) fill_cosine_row(x, inv_norm, out, i);
    } else {
        for (int i = 0; i < n; ++i) fill_cosine_row(x, inv_norm, out, i);
    }
    return out;
}

Mat filtered_delta_columns(const Mat& u, const std::vector<Vec>& weights,
                           const std::vector<int>& nodes, ExecPolicy policy) {
    const int n = static_cast<int>(u.rows());
    for (const Vec& w : weights)
        if (w.size() != n) throw InvalidParameter("spectral weight length mismatch");
    for (int node : nodes)
        if (node < 0 || node >= n) throw InvalidParameter("node index out of range");

    const int cols = static_cast<int>(nodes.size() * weights.size());
    Mat out(n, cols);
    if (policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(static)
        for (int c = 0; c < cols; ++c) fill_filtered_column(u, weights, nodes, out, c);
    } else {
        for (int c = 0; c < cols; ++c) fill_filtered_column(u, weights, nodes, out, c);
    }
    return out;
}

} // namespace gralp::dense
