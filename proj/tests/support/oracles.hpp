#pragma once

// Independent oracles for the test and acceptance suites. Nothing here goes
// through the library's LDLT solve path: the stationarity system is solved
// with full-pivot LU and with a preconditioned conjugate-gradient minimizer,
// and spectral filters are re-derived via explicit U diag(w) U^T products.

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "gralp/experiments.hpp"
#include "gralp/solver.hpp"
#include "gralp/spectral.hpp"
#include "gralp/wavelets.hpp"

namespace oracles {

using gralp::Mat;
using gralp::Vec;

// Stacked stationarity system of the objective:
//   M [f_s; f_t] = [(S^s)^T y^s; (S^t)^T y^t]
// with the two diagonal blocks D + mu Psi Psi^T + gamma L and the coupling
// blocks -mu Psi^s (Psi^t)^T.
struct StackedSystem {
    Mat m;
    Mat rhs; // (ns + nt) x C
    int ns = 0;
    int nt = 0;
};

inline StackedSystem stacked_system(const gralp::AdaptationProblem& p, const Mat& ys,
                                    const Mat& yt) {
    const int ns = p.lap_source.size();
    const int nt = p.lap_target.size();
    StackedSystem sys;
    sys.ns = ns;
    sys.nt = nt;
    sys.m = Mat::Zero(ns + nt, ns + nt);
    sys.m.topLeftCorner(ns, ns) = p.gamma_source * p.lap_source.matrix;
    sys.m.bottomRightCorner(nt, nt) = p.gamma_target * p.lap_target.matrix;
    for (const auto& l : p.labels_source) sys.m(l.index, l.index) += 1.0;
    for (const auto& l : p.labels_target) sys.m(ns + l.index, ns + l.index) += 1.0;
    if (p.mu > 0.0) {
        sys.m.topLeftCorner(ns, ns) += p.mu * (p.dict.psi_s * p.dict.psi_s.transpose());
        sys.m.bottomRightCorner(nt, nt) += p.mu * (p.dict.psi_t * p.dict.psi_t.transpose());
        sys.m.topRightCorner(ns, nt) = -p.mu * (p.dict.psi_s * p.dict.psi_t.transpose());
        sys.m.bottomLeftCorner(nt, ns) = sys.m.topRightCorner(ns, nt).transpose();
    }
    sys.rhs = Mat::Zero(ns + nt, ys.cols());
    for (std::size_t i = 0; i < p.labels_source.size(); ++i)
        sys.rhs.row(p.labels_source[i].index) = ys.row(static_cast<Eigen::Index>(i));
    for (std::size_t i = 0; i < p.labels_target.size(); ++i)
        sys.rhs.row(ns + p.labels_target[i].index) = yt.row(static_cast<Eigen::Index>(i));
    return sys;
}

/// Monolithic dense solve of the stationarity system via full-pivot LU.
inline std::pair<Mat, Mat> monolithic_solve(const gralp::AdaptationProblem& p, const Mat& ys,
                                            const Mat& yt) {
    const StackedSystem sys = stacked_system(p, ys, yt);
    const Mat x = Eigen::FullPivLU<Mat>(sys.m).solve(sys.rhs);
    return {x.topRows(sys.ns), x.bottomRows(sys.nt)};
}

inline std::pair<Mat, Mat> monolithic_solve(const gralp::AdaptationProblem& p) {
    std::vector<int> ids_s, ids_t;
    for (const auto& l : p.labels_source) ids_s.push_back(l.class_id);
    for (const auto& l : p.labels_target) ids_t.push_back(l.class_id);
    return monolithic_solve(p, gralp::encode_labels(ids_s, p.num_classes),
                            gralp::encode_labels(ids_t, p.num_classes));
}

/// First-order iterative minimizer of the objective: Jacobi-preconditioned
/// conjugate gradient on the stacked system, run until the analytic gradient
/// (= 2(Mx - rhs)) has max-norm <= grad_tol. Returns false if the tolerance
/// was not reached within the iteration cap.
inline bool iterative_minimize(const gralp::AdaptationProblem& p, const Mat& ys, const Mat& yt,
                               double grad_tol, Mat& f_s, Mat& f_t) {
    const StackedSystem sys = stacked_system(p, ys, yt);
    const int n = static_cast<int>(sys.m.rows());
    const Vec diag = sys.m.diagonal().cwiseMax(1e-300);
    Mat x = Mat::Zero(n, sys.rhs.cols());
    const double r_tol = 0.5 * grad_tol;
    bool ok = true;

    for (int col = 0; col < sys.rhs.cols(); ++col) {
        const Vec b = sys.rhs.col(col);
        Vec xc = Vec::Zero(n);
        Vec r = b;
        Vec z = r.cwiseQuotient(diag);
        Vec d = z;
        double rz = r.dot(z);
        bool converged = r.cwiseAbs().maxCoeff() <= r_tol;
        const int max_iters = 400 * n;
        for (int it = 0; it < max_iters && !converged; ++it) {
            const Vec md = sys.m * d;
            const double dmd = d.dot(md);
            if (!(dmd > 0.0)) break;
            const double alpha = rz / dmd;
            xc += alpha * d;
            if ((it + 1) % 50 == 0)
                r = b - sys.m * xc; // periodic true residual to control drift
            else
                r -= alpha * md;
            converged = r.cwiseAbs().maxCoeff() <= r_tol;
            z = r.cwiseQuotient(diag);
            const double rz_next = r.dot(z);
            d = z + (rz_next / rz) * d;
            rz = rz_next;
        }
        ok = ok && converged;
        x.col(col) = xc;
    }
    f_s = x.topRows(sys.ns);
    f_t = x.bottomRows(sys.nt);
    return ok;
}

/// Spectral filter oracle: the full operator U diag(w(lambda)) U^T formed
/// explicitly.
inline Mat filter_operator(const gralp::SpectralDecomposition& sd,
                           const gralp::SpectralKernel& kernel) {
    Vec w(sd.size());
    for (int k = 0; k < sd.size(); ++k) w(k) = kernel(sd.eigenvalues(k));
    return sd.eigenvectors * w.asDiagonal() * sd.eigenvectors.transpose();
}

/// Random connected weighted graph: k-NN over a Gaussian cloud plus a path
/// backbone so no component is ever label-free.
inline gralp::Graph random_connected_graph(int n, std::uint64_t seed, int k = 3) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    gralp::FeatureSet fs;
    fs.samples.resize(n, 3);
    for (int i = 0; i < n; ++i)
        for (int d = 0; d < 3; ++d) fs.samples(i, d) = 4.0 * unif(gen) - 2.0;
    gralp::Graph knn = gralp::build_knn_graph(fs, std::min(k, n - 1), 1.0);
    Mat w = knn.weights();
    for (int i = 0; i + 1 < n; ++i) {
        const double backbone = 0.2 + 0.5 * unif(gen);
        if (w(i, i + 1) < backbone) {
            w(i, i + 1) = backbone;
            w(i + 1, i) = backbone;
        }
    }
    return gralp::Graph(std::move(w));
}

struct RandomInstanceOptions {
    int min_nodes = 8;
    int max_nodes = 30;
    int max_classes = 4;
    int max_pairs = 5;
    int max_scales = 3;
    double weight_min = 0.01;
    double weight_max = 10.0;
};

/// Self-contained random adaptation problem (graphs, frames, dictionary,
/// labels, weights), deterministic in the seed.
inline gralp::AdaptationProblem random_instance(std::uint64_t seed,
                                                const RandomInstanceOptions& opt = {}) {
    std::mt19937_64 gen(seed);
    auto pick = [&](int lo, int hi) {
        return lo + static_cast<int>(gen() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto log_uniform = [&](double lo, double hi) {
        return lo * std::exp(std::log(hi / lo) * unif(gen));
    };

    gralp::AdaptationProblem p;
    const int ns = pick(opt.min_nodes, opt.max_nodes);
    const int nt = pick(opt.min_nodes, opt.max_nodes);
    p.num_classes = pick(2, opt.max_classes);
    p.mu = log_uniform(opt.weight_min, opt.weight_max);
    p.gamma_source = log_uniform(opt.weight_min, opt.weight_max);
    p.gamma_target = log_uniform(opt.weight_min, opt.weight_max);

    const gralp::Graph gs = random_connected_graph(ns, gen());
    const gralp::Graph gt = random_connected_graph(nt, gen());
    p.lap_source = gralp::laplacian(gs);
    p.lap_target = gralp::laplacian(gt);

    gralp::KernelSpec spec;
    spec.family = static_cast<gralp::KernelFamily>(pick(0, 3));
    spec.num_scales = pick(1, opt.max_scales);
    const auto sd_s = std::make_shared<gralp::SpectralDecomposition>(gralp::decompose(p.lap_source));
    const auto sd_t = std::make_shared<gralp::SpectralDecomposition>(gralp::decompose(p.lap_target));
    const gralp::WaveletFrame frame_s(sd_s, spec);
    const gralp::WaveletFrame frame_t(sd_t, spec);

    const int q = pick(1, std::min({opt.max_pairs, ns, nt}));
    auto sample_unique = [&](int count, int n) {
        std::set<int> out;
        while (static_cast<int>(out.size()) < count) out.insert(pick(0, n - 1));
        return std::vector<int>(out.begin(), out.end());
    };
    const auto ms = sample_unique(q, ns);
    const auto ts = sample_unique(q, nt);
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < q; ++i) pairs.emplace_back(ms[static_cast<std::size_t>(i)],
                                                   ts[static_cast<std::size_t>(i)]);
    p.dict = gralp::build_matched_dictionary(frame_s, frame_t, pairs);

    for (int i : sample_unique(pick(1, std::max(1, ns / 2)), ns))
        p.labels_source.push_back({i, pick(0, p.num_classes - 1)});
    for (int i : sample_unique(pick(1, std::max(1, nt / 2)), nt))
        p.labels_target.push_back({i, pick(0, p.num_classes - 1)});
    return p;
}

} // namespace oracles
