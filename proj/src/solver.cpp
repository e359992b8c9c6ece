#include "gralp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "gralp/errors.hpp"

namespace gralp {

Mat encode_labels(const std::vector<int>& class_ids, int num_classes) {
    if (num_classes < 1) throw InvalidParameter("need at least one class");
    Mat y = Mat::Zero(static_cast<Eigen::Index>(class_ids.size()), num_classes);
    for (std::size_t i = 0; i < class_ids.size(); ++i) {
        const int c = class_ids[i];
        if (c < 0 || c >= num_classes) throw InvalidParameter("class id out of range");
        y(static_cast<Eigen::Index>(i), c) = 1.0;
    }
    return y;
}

std::vector<int> decode_labels(const Mat& values) {
    std::vector<int> ids(static_cast<std::size_t>(values.rows()));
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        int best = 0;
        for (Eigen::Index c = 1; c < values.cols(); ++c)
            if (values(i, c) > values(i, best)) best = static_cast<int>(c);
        ids[static_cast<std::size_t>(i)] = best;
    }
    return ids;
}

namespace {

void check_labels(const std::vector<LabeledNode>& labels, int n, int num_classes,
                  const char* side) {
    std::set<int> seen;
    for (const auto& l : labels) {
        if (l.index < 0 || l.index >= n)
            throw InvalidParameter(std::string(side) + " label index out of range");
        if (!seen.insert(l.index).second)
            throw InvalidParameter(std::string(side) + " label indices must be unique");
        if (l.class_id < 0 || l.class_id >= num_classes)
            throw InvalidParameter(std::string(side) + " class id out of range");
    }
}

void validate_problem(const AdaptationProblem& p) {
    if (p.num_classes < 1) throw InvalidParameter("need at least one class");
    if (!(p.mu >= 0.0) || !(p.gamma_source >= 0.0) || !(p.gamma_target >= 0.0))
        throw InvalidParameter("weights must be non-negative");
    const int ns = p.lap_source.size();
    const int nt = p.lap_target.size();
    if (ns < 1 || nt < 1) throw InvalidParameter("empty graph");
    check_labels(p.labels_source, ns, p.num_classes, "source");
    check_labels(p.labels_target, nt, p.num_classes, "target");
    if (p.labels_source.empty() && p.labels_target.empty())
        throw InvalidParameter("label-free problem: need at least one labeled node");
    if (p.mu > 0.0) {
        if (p.dict.psi_s.cols() == 0) throw InvalidParameter("mu > 0 requires a dictionary");
        if (p.dict.psi_s.rows() != ns || p.dict.psi_t.rows() != nt ||
            p.dict.psi_s.cols() != p.dict.psi_t.cols())
            throw InvalidParameter("dictionary shape mismatch");
    }
}

void check_targets(const Mat& y, std::size_t count, int num_classes, const char* side) {
    if (y.rows() != static_cast<Eigen::Index>(count) || y.cols() != num_classes)
        throw InvalidParameter(std::string(side) + " target matrix shape mismatch");
    if (!y.allFinite()) throw InvalidParameter(std::string(side) + " targets must be finite");
}

// Scatter row i of y to row labels[i].index of an n x C matrix.
Mat scatter_targets(const Mat& y, const std::vector<LabeledNode>& labels, int n) {
    Mat full = Mat::Zero(n, y.cols());
    for (std::size_t i = 0; i < labels.size(); ++i)
        full.row(labels[i].index) = y.row(static_cast<Eigen::Index>(i));
    return full;
}

Vec label_mask(const std::vector<LabeledNode>& labels, int n) {
    Vec mask = Vec::Zero(n);
    for (const auto& l : labels) mask(l.index) = 1.0;
    return mask;
}

struct Factored {
    Eigen::LDLT<Mat> ldlt;
    bool ridge_applied = false;
};

double smallest_singular_value(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().minCoeff();
}

// LDLT of a symmetric PSD system with a pivot-based rank check. On
// near-singularity either applies the spec ridge (eps = 1e-9 trace/n) or
// throws with the smallest singular value of the offending matrix.
Factored factor_system(const Mat& m, const char* which, bool allow_ridge) {
    auto is_singular = [](const Eigen::LDLT<Mat>& ldlt) {
        const Vec d = ldlt.vectorD();
        const double d_max = d.maxCoeff();
        return !(d_max > 0.0) || d.minCoeff() <= 1e-12 * d_max;
    };

    Factored f;
    f.ldlt.compute(m);
    if (!is_singular(f.ldlt)) return f;

    if (allow_ridge) {
        const double eps = 1e-9 * m.trace() / static_cast<double>(m.rows());
        f.ldlt.compute(m + eps * Mat::Identity(m.rows(), m.cols()));
        if (eps > 0.0 && !is_singular(f.ldlt)) {
            f.ridge_applied = true;
            return f;
        }
    }

    std::ostringstream msg;
    msg << which << " system is singular (smallest singular value "
        << smallest_singular_value(m) << ")";
    throw SingularSystem(msg.str(), smallest_singular_value(m));
}

ObjectiveTerms compute_terms(const AdaptationProblem& p, const Mat& f_s, const Mat& f_t,
                             const Mat& y_s, const Mat& y_t) {
    ObjectiveTerms terms;
    for (std::size_t i = 0; i < p.labels_source.size(); ++i)
        terms.fidelity_source +=
            (f_s.row(p.labels_source[i].index) - y_s.row(static_cast<Eigen::Index>(i)))
                .squaredNorm();
    for (std::size_t i = 0; i < p.labels_target.size(); ++i)
        terms.fidelity_target +=
            (f_t.row(p.labels_target[i].index) - y_t.row(static_cast<Eigen::Index>(i)))
                .squaredNorm();
    if (p.mu > 0.0)
        terms.matching =
            p.mu *
            (p.dict.psi_s.transpose() * f_s - p.dict.psi_t.transpose() * f_t).squaredNorm();
    terms.smooth_source = p.gamma_source * (f_s.transpose() * p.lap_source.matrix * f_s).trace();
    terms.smooth_target = p.gamma_target * (f_t.transpose() * p.lap_target.matrix * f_t).trace();
    return terms;
}

} // namespace

ObjectiveTerms evaluate_objective_with_targets(const AdaptationProblem& p, const Mat& f_source,
                                               const Mat& f_target, const Mat& y_source,
                                               const Mat& y_target) {
    validate_problem(p);
    check_targets(y_source, p.labels_source.size(), p.num_classes, "source");
    check_targets(y_target, p.labels_target.size(), p.num_classes, "target");
    if (f_source.rows() != p.lap_source.size() || f_target.rows() != p.lap_target.size() ||
        f_source.cols() != p.num_classes || f_target.cols() != p.num_classes)
        throw InvalidParameter("label function shape mismatch");
    return compute_terms(p, f_source, f_target, y_source, y_target);
}

ObjectiveTerms evaluate_objective(const AdaptationProblem& p, const Mat& f_source,
                                  const Mat& f_target) {
    std::vector<int> ids_s, ids_t;
    for (const auto& l : p.labels_source) ids_s.push_back(l.class_id);
    for (const auto& l : p.labels_target) ids_t.push_back(l.class_id);
    return evaluate_objective_with_targets(p, f_source, f_target,
                                           encode_labels(ids_s, p.num_classes),
                                           encode_labels(ids_t, p.num_classes));
}

Mat objective_gradient(const AdaptationProblem& p, const Mat& f_s, const Mat& f_t,
                       const Mat& y_s, const Mat& y_t) {
    const int ns = p.lap_source.size();
    const int nt = p.lap_target.size();
    const Mat ys_full = scatter_targets(y_s, p.labels_source, ns);
    const Mat yt_full = scatter_targets(y_t, p.labels_target, nt);
    const Vec mask_s = label_mask(p.labels_source, ns);
    const Vec mask_t = label_mask(p.labels_target, nt);

    Mat grad_s = 2.0 * (mask_s.asDiagonal() * f_s - ys_full) +
                 2.0 * p.gamma_source * (p.lap_source.matrix * f_s);
    Mat grad_t = 2.0 * (mask_t.asDiagonal() * f_t - yt_full) +
                 2.0 * p.gamma_target * (p.lap_target.matrix * f_t);
    if (p.mu > 0.0) {
        const Mat mismatch = p.dict.psi_s.transpose() * f_s - p.dict.psi_t.transpose() * f_t;
        grad_s += 2.0 * p.mu * (p.dict.psi_s * mismatch);
        grad_t -= 2.0 * p.mu * (p.dict.psi_t * mismatch);
    }
    Mat grad(ns + nt, p.num_classes);
    grad << grad_s, grad_t;
    return grad;
}

Solution solve_with_targets(const AdaptationProblem& p, const Mat& y_source, const Mat& y_target,
                            const SolveOptions& options) {
    validate_problem(p);
    check_targets(y_source, p.labels_source.size(), p.num_classes, "source");
    check_targets(y_target, p.labels_target.size(), p.num_classes, "target");

    const int ns = p.lap_source.size();
    const int nt = p.lap_target.size();
    const Mat ys_full = scatter_targets(y_source, p.labels_source, ns);
    const Mat yt_full = scatter_targets(y_target, p.labels_target, nt);
    const Vec mask_s = label_mask(p.labels_source, ns);
    const Vec mask_t = label_mask(p.labels_target, nt);

    Solution sol;
    Mat f_s, f_t;

    // Source system matrix (S^s)^T S^s + mu Psi^s (Psi^s)^T + gamma_s L^s.
    Mat m_s = p.gamma_source * p.lap_source.matrix;
    m_s.diagonal() += mask_s;
    if (p.mu > 0.0) m_s.noalias() += p.mu * (p.dict.psi_s * p.dict.psi_s.transpose());
    Factored fact_s = factor_system(m_s, "source", options.ridge);
    sol.ridge_applied_source = fact_s.ridge_applied;

    if (p.mu > 0.0) {
        const Mat& psi_s = p.dict.psi_s;
        const Mat& psi_t = p.dict.psi_t;
        const auto q = psi_s.cols();

        // One solve against the shared factorization covers both A Psi^s and
        // A (S^s)^T y^s.
        Mat rhs(ns, q + p.num_classes);
        rhs << psi_s, ys_full;
        const Mat solved = fact_s.ldlt.solve(rhs);
        const Mat a_psi = solved.leftCols(q);
        const Mat a_ys = solved.rightCols(p.num_classes);

        // Target system via the Schur complement of the source block:
        // (S^t)^T S^t + mu Psi^t (Psi^t)^T
        //   - mu^2 Psi^t (Psi^s)^T A Psi^s (Psi^t)^T + gamma_t L^t.
        const Mat k = psi_s.transpose() * a_psi;
        Mat middle = -(p.mu * p.mu) * k;
        middle.diagonal().array() += p.mu;
        Mat m_t = p.gamma_target * p.lap_target.matrix;
        m_t.diagonal() += mask_t;
        m_t.noalias() += psi_t * middle * psi_t.transpose();

        const double asym = (m_t - m_t.transpose()).cwiseAbs().maxCoeff();
        const double scale = std::max(1.0, m_t.cwiseAbs().maxCoeff());
        if (asym > 1e-8 * scale)
            throw NumericFailure("target system lost symmetry beyond tolerance");

        Factored fact_t = factor_system(m_t, "target", options.ridge);
        sol.ridge_applied_target = fact_t.ridge_applied;

        const Mat rhs_t = yt_full + p.mu * (psi_t * (psi_s.transpose() * a_ys));
        f_t = fact_t.ldlt.solve(rhs_t);
        f_s = a_ys + p.mu * (a_psi * (psi_t.transpose() * f_t));
    } else {
        // mu = 0 decouples the domains entirely.
        Mat m_t = p.gamma_target * p.lap_target.matrix;
        m_t.diagonal() += mask_t;
        Factored fact_t = factor_system(m_t, "target", options.ridge);
        sol.ridge_applied_target = fact_t.ridge_applied;
        f_t = fact_t.ldlt.solve(yt_full);
        f_s = fact_s.ldlt.solve(ys_full);
    }

    sol.f_source.values = std::move(f_s);
    sol.f_target.values = std::move(f_t);
    sol.terms = compute_terms(p, sol.f_source.values, sol.f_target.values, y_source, y_target);
    sol.objective_value = sol.terms.total();
    sol.gradient_inf_norm =
        objective_gradient(p, sol.f_source.values, sol.f_target.values, y_source, y_target)
            .cwiseAbs()
            .maxCoeff();
    sol.label_norm = std::sqrt(y_source.squaredNorm() + y_target.squaredNorm());
    return sol;
}

Solution solve(const AdaptationProblem& p, const SolveOptions& options) {
    std::vector<int> ids_s, ids_t;
    for (const auto& l : p.labels_source) ids_s.push_back(l.class_id);
    for (const auto& l : p.labels_target) ids_t.push_back(l.class_id);
    if (p.num_classes < 1) throw InvalidParameter("need at least one class");
    return solve_with_targets(p, encode_labels(ids_s, p.num_classes),
                              encode_labels(ids_t, p.num_classes), options);
}

} // namespace gralp
