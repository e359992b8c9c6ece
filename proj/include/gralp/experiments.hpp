#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "gralp/solver.hpp"

namespace gralp {

/// Synthetic source/target pair: Gaussian class clusters arranged on a
/// circle, with the target domain re-embedded through an independent random
/// rotation ("warp") plus optional extra jitter. Matched pairs are same-class
/// nearest-centroid samples.
struct SyntheticPairConfig {
    int num_classes = 3;
    std::vector<int> source_counts; // per class; empty = uniform source_per_class
    std::vector<int> target_counts;
    int source_per_class = 34;
    int target_per_class = 34;
    int source_dim = 2;
    int target_dim = 2;
    double center_scale = 2.4;
    double source_spread = 0.7;
    double target_spread = 0.7;
    double warp_noise = 0.0; // extra target jitter after the warp
    bool warp = true;        // false = identical embedding (control); requires equal dims
    int match_count = 0;     // Q; 0 = empty pair list
    std::uint64_t seed = 0;
};

struct SyntheticPair {
    FeatureSet source_features;
    FeatureSet target_features;
    std::vector<int> source_labels;
    std::vector<int> target_labels;
    std::vector<std::pair<int, int>> pairs; // same-class by construction
};

SyntheticPair generate_synthetic_pair(const SyntheticPairConfig& cfg);

/// Fraction of eval_nodes where predicted differs from truth.
double misclassification_rate(const std::vector<int>& predicted, const std::vector<int>& truth,
                              const std::vector<int>& eval_nodes);

/// Mean of the per-class error rates over the classes present in eval_nodes.
double balanced_error(const std::vector<int>& predicted, const std::vector<int>& truth,
                      const std::vector<int>& eval_nodes);

/// Normalized coefficient dissimilarity
///   Delta = sum_i (c^s_i - c^t_i)^2 / sum_i (c^s_i)^2
/// over all Q(J+1) x C dictionary-projection coefficients
/// c^s = (Psi^s)^T f_source, c^t = (Psi^t)^T f_target.
double coefficient_dissimilarity(const MatchedDictionary& dict, const Mat& f_source,
                                 const Mat& f_target);

enum class Protocol {
    target_sweep,
    source_sweep,
    unlabeled_match_sweep,
    partially_labeled_match_sweep,
    labeled_match_sweep,
};

const char* protocol_name(Protocol p);
std::optional<Protocol> parse_protocol(std::string_view name);

struct SweepSpec {
    Protocol protocol = Protocol::source_sweep;
    std::vector<double> swept_ratios;
    double source_label_ratio = 0.9; // fixed where the protocol does not sweep it
    double match_label_ratio = 0.25; // partially-labeled protocol
    double match_ratio = 0.1;        // fixed for target/source sweeps
    int repetitions = 20;
    std::uint64_t seed = 0;
    bool resample_matches = true; // false = draw from the fixed pair list
    bool balanced = false;        // report balanced error instead of the plain rate
    int jobs = 1;
};

struct DomainData {
    Laplacian lap;
    std::shared_ptr<const WaveletFrame> frame;
    std::vector<int> truth; // ground-truth class per node; -1 = unknown
};

/// Graph -> Laplacian -> decomposition -> frame, bundled with the truth
/// labels. The k-NN front end for feature inputs.
DomainData make_domain_data(const FeatureSet& features, const std::vector<int>& truth, int knn,
                            std::optional<double> sigma, LaplacianVariant variant,
                            const KernelSpec& spec);

/// Same starting from a prebuilt graph (edge-list inputs).
DomainData make_domain_data(const Graph& graph, const std::vector<int>& truth,
                            LaplacianVariant variant, const KernelSpec& spec);

struct SweepProblem {
    DomainData source;
    DomainData target;
    int num_classes = 0;
    double mu = 1.0;
    double gamma_source = 0.1;
    double gamma_target = 0.1;
    bool ridge = false;
    std::vector<std::pair<int, int>> fixed_pairs; // used when resample_matches is false
};

/// Everything a single sweep cell feeds to the solver, plus the evaluation
/// set. eval_nodes never intersects the labeled target set.
struct CellPlan {
    bool feasible = false;
    std::string reason;
    std::vector<std::pair<int, int>> pairs;
    std::vector<LabeledNode> labels_source;
    std::vector<LabeledNode> labels_target;
    std::vector<int> eval_nodes;
};

CellPlan plan_sweep_cell(const SweepSpec& spec, const SweepProblem& prob, int ratio_index,
                         int repetition);

struct SweepRow {
    double ratio = 0.0;
    double mean_error = 0.0;
    double std_error = 0.0;
    int feasible_repetitions = 0;
    int infeasible_repetitions = 0;
};

/// Runs every (ratio, repetition) cell with an independently derived seed,
/// solves, and scores the unlabeled target nodes. Plan-level impossibilities
/// mark the cell infeasible; solver singularities propagate.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const SweepProblem& prob);

/// Per-cell seed: splitmix-style hash of (base, protocol, ratio index, repetition).
std::uint64_t derive_seed(std::uint64_t base, Protocol protocol, int ratio_index, int repetition);

/// Control re-wiring: randomly permutes the target side of the pair list,
/// retrying until most pairs cross class boundaries.
std::vector<std::pair<int, int>> shuffle_pairs_across_classes(
    std::vector<std::pair<int, int>> pairs, const std::vector<int>& source_truth,
    const std::vector<int>& target_truth, std::uint64_t seed);

} // namespace gralp
