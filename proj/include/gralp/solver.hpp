#pragma once

#include <vector>

#include "gralp/graph.hpp"
#include "gralp/wavelets.hpp"

namespace gralp {

struct LabeledNode {
    int index;
    int class_id;
};

/// One-hot rows; class ids must lie in [0, num_classes).
Mat encode_labels(const std::vector<int>& class_ids, int num_classes);

/// Row-wise argmax; ties resolve to the lowest class index.
std::vector<int> decode_labels(const Mat& values);

/// N x C class-score matrix; one column per class.
struct LabelFunction {
    Mat values;

    std::vector<int> decode() const { return decode_labels(values); }
};

/// Weighted terms of the objective; total() is their exact sum. The matching
/// term carries its mu factor and the smoothness terms their gamma factors.
struct ObjectiveTerms {
    double fidelity_source = 0.0;
    double fidelity_target = 0.0;
    double matching = 0.0;
    double smooth_source = 0.0;
    double smooth_target = 0.0;

    double total() const {
        return fidelity_source + fidelity_target + matching + smooth_source + smooth_target;
    }
};

struct AdaptationProblem {
    Laplacian lap_source;
    Laplacian lap_target;
    MatchedDictionary dict; // may be empty only when mu == 0
    std::vector<LabeledNode> labels_source;
    std::vector<LabeledNode> labels_target;
    int num_classes = 0;
    double mu = 1.0;
    double gamma_source = 0.1;
    double gamma_target = 0.1;
};

struct SolveOptions {
    /// On a singular system, add eps I (eps = 1e-9 trace/n) and continue
    /// with a warning flag instead of throwing.
    bool ridge = false;
};

struct Solution {
    LabelFunction f_source;
    LabelFunction f_target;
    ObjectiveTerms terms;
    double objective_value = 0.0;
    double gradient_inf_norm = 0.0; // max-norm of the analytic gradient at the solution
    double label_norm = 0.0;        // Frobenius norm of the stacked known targets
    bool ridge_applied_source = false;
    bool ridge_applied_target = false;
};

/// Term-by-term evaluation of the objective at (f_source, f_target),
/// summed over the class columns.
ObjectiveTerms evaluate_objective(const AdaptationProblem& p, const Mat& f_source,
                                  const Mat& f_target);

/// Same with explicit target matrices; row i of y_* corresponds to labels_*[i].
ObjectiveTerms evaluate_objective_with_targets(const AdaptationProblem& p, const Mat& f_source,
                                               const Mat& f_target, const Mat& y_source,
                                               const Mat& y_target);

/// Closed-form minimizer. The source system
///   ((S^s)^T S^s + mu Psi^s (Psi^s)^T + gamma_s L^s)
/// is factorized once and applied to all class columns; the target system is
/// its Schur-complement reduction. Inverses are realized as LDLT solves,
/// never formed explicitly. Throws SingularSystem when a system is
/// numerically singular and options.ridge is off.
Solution solve(const AdaptationProblem& p, const SolveOptions& options = {});

/// Generalization with explicit (not necessarily one-hot) targets.
Solution solve_with_targets(const AdaptationProblem& p, const Mat& y_source, const Mat& y_target,
                            const SolveOptions& options = {});

/// Analytic gradient of the objective stacked as [grad f_source; grad f_target].
Mat objective_gradient(const AdaptationProblem& p, const Mat& f_source, const Mat& f_target,
                       const Mat& y_source, const Mat& y_target);

} // namespace gralp
