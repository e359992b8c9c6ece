#include "gralp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "gralp/errors.hpp"

namespace gralp {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic RNG: mt19937_64 bit source with hand-rolled distributions so
// draws do not depend on the standard library implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = kTwoPi * uniform();
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    std::uint64_t bounded(std::uint64_t n) {
        const std::uint64_t threshold = (0ULL - n) % n; // rejection bound, unbiased
        for (;;) {
            const std::uint64_t r = gen_();
            if (r >= threshold) return r % n;
        }
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[bounded(i)]);
    }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

Mat random_orthogonal(int dim, Rng& rng) {
    Mat g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = rng.normal();
    return Eigen::HouseholderQR<Mat>(g).householderQ();
}

// Class center directions: evenly spaced on a circle in the leading plane
// (a line for dim = 1), with a shared random phase.
Mat center_directions(int num_classes, int dim, double phase) {
    Mat dirs = Mat::Zero(num_classes, dim);
    for (int c = 0; c < num_classes; ++c) {
        if (dim == 1) {
            dirs(c, 0) = c - 0.5 * (num_classes - 1);
        } else {
            const double angle = phase + kTwoPi * c / num_classes;
            dirs(c, 0) = std::cos(angle);
            dirs(c, 1) = std::sin(angle);
        }
    }
    return dirs;
}

std::vector<int> per_class_counts(const std::vector<int>& counts, int uniform, int num_classes,
                                  const char* side) {
    std::vector<int> out = counts;
    if (out.empty()) out.assign(static_cast<std::size_t>(num_classes), uniform);
    if (static_cast<int>(out.size()) != num_classes)
        throw InvalidParameter(std::string(side) + " per-class counts size mismatch");
    for (int c : out)
        if (c < 1) throw InvalidParameter(std::string(side) + " class counts must be positive");
    return out;
}

// Global sample indices of one class, ordered by distance to the class
// empirical centroid (ties toward the lower index).
std::vector<int> centroid_ranked(const Mat& samples, const std::vector<int>& labels, int cls) {
    std::vector<int> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == cls) members.push_back(static_cast<int>(i));
    Vec centroid = Vec::Zero(samples.cols());
    for (int i : members) centroid += samples.row(i).transpose();
    centroid /= static_cast<double>(members.size());
    std::sort(members.begin(), members.end(), [&](int a, int b) {
        const double da = (samples.row(a).transpose() - centroid).squaredNorm();
        const double db = (samples.row(b).transpose() - centroid).squaredNorm();
        if (da != db) return da < db;
        return a < b;
    });
    return members;
}

} // namespace

SyntheticPair generate_synthetic_pair(const SyntheticPairConfig& cfg) {
    if (cfg.num_classes < 1) throw InvalidParameter("need at least one class");
    if (cfg.source_dim < 1 || cfg.target_dim < 1) throw InvalidParameter("dims must be positive");
    if (!(cfg.center_scale > 0.0)) throw InvalidParameter("center_scale must be positive");
    if (cfg.source_spread < 0.0 || cfg.target_spread < 0.0 || cfg.warp_noise < 0.0)
        throw InvalidParameter("spreads must be non-negative");
    if (!cfg.warp && cfg.source_dim != cfg.target_dim)
        throw InvalidParameter("the no-warp control requires equal ambient dimensions");
    if (cfg.match_count < 0) throw InvalidParameter("match count must be non-negative");

    const int c_num = cfg.num_classes;
    const auto counts_s = per_class_counts(cfg.source_counts, cfg.source_per_class, c_num, "source");
    const auto counts_t = per_class_counts(cfg.target_counts, cfg.target_per_class, c_num, "target");

    Rng rng(cfg.seed);
    const double phase = kTwoPi * rng.uniform();
    const Mat rot_s = random_orthogonal(cfg.source_dim, rng);
    const Mat rot_t = cfg.warp ? random_orthogonal(cfg.target_dim, rng) : rot_s;

    const Mat dirs_s = center_directions(c_num, cfg.source_dim, phase);
    const Mat dirs_t = center_directions(c_num, cfg.target_dim, phase);

    auto fill_domain = [&](const Mat& rot, const Mat& dirs, const std::vector<int>& counts,
                           int dim, double spread, double extra_noise, Mat& samples,
                           std::vector<int>& labels) {
        int total = 0;
        for (int c : counts) total += c;
        samples.resize(total, dim);
        labels.resize(static_cast<std::size_t>(total));
        int row = 0;
        for (int c = 0; c < c_num; ++c) {
            const Vec center = cfg.center_scale * (rot * dirs.row(c).transpose());
            for (int i = 0; i < counts[static_cast<std::size_t>(c)]; ++i, ++row) {
                for (int d = 0; d < dim; ++d) {
                    double v = center(d) + spread * rng.normal();
                    if (extra_noise > 0.0) v += extra_noise * rng.normal();
                    samples(row, d) = v;
                }
                labels[static_cast<std::size_t>(row)] = c;
            }
        }
    };

    SyntheticPair pair;
    fill_domain(rot_s, dirs_s, counts_s, cfg.source_dim, cfg.source_spread, 0.0,
                pair.source_features.samples, pair.source_labels);
    fill_domain(rot_t, dirs_t, counts_t, cfg.target_dim, cfg.target_spread, cfg.warp_noise,
                pair.target_features.samples, pair.target_labels);

    if (cfg.match_count > 0) {
        // Round-robin per-class quotas, capped by same-class capacity.
        std::vector<int> quota(static_cast<std::size_t>(c_num), 0);
        int remaining = cfg.match_count;
        while (remaining > 0) {
            bool progressed = false;
            for (int c = 0; c < c_num && remaining > 0; ++c) {
                const auto uc = static_cast<std::size_t>(c);
                if (quota[uc] < std::min(counts_s[uc], counts_t[uc])) {
                    ++quota[uc];
                    --remaining;
                    progressed = true;
                }
            }
            if (!progressed)
                throw InvalidParameter("match count exceeds same-class pair capacity");
        }
        for (int c = 0; c < c_num; ++c) {
            const auto ranked_s = centroid_ranked(pair.source_features.samples, pair.source_labels, c);
            const auto ranked_t = centroid_ranked(pair.target_features.samples, pair.target_labels, c);
            for (int q = 0; q < quota[static_cast<std::size_t>(c)]; ++q)
                pair.pairs.emplace_back(ranked_s[static_cast<std::size_t>(q)],
                                        ranked_t[static_cast<std::size_t>(q)]);
        }
    }
    return pair;
}

DomainData make_domain_data(const Graph& graph, const std::vector<int>& truth,
                            LaplacianVariant variant, const KernelSpec& spec) {
    if (static_cast<int>(truth.size()) != graph.size())
        throw InvalidParameter("truth label length mismatch");
    DomainData d;
    d.lap = laplacian(graph, variant);
    const auto sd = std::make_shared<SpectralDecomposition>(decompose(d.lap));
    d.frame = std::make_shared<WaveletFrame>(sd, spec);
    d.truth = truth;
    return d;
}

DomainData make_domain_data(const FeatureSet& features, const std::vector<int>& truth, int knn,
                            std::optional<double> sigma, LaplacianVariant variant,
                            const KernelSpec& spec) {
    return make_domain_data(build_knn_graph(features, knn, sigma), truth, variant, spec);
}

double misclassification_rate(const std::vector<int>& predicted, const std::vector<int>& truth,
                              const std::vector<int>& eval_nodes) {
    if (eval_nodes.empty()) throw InvalidParameter("empty evaluation mask");
    int errors = 0;
    for (int i : eval_nodes) {
        if (i < 0 || i >= static_cast<int>(truth.size()) || i >= static_cast<int>(predicted.size()))
            throw InvalidParameter("evaluation node out of range");
        if (truth[static_cast<std::size_t>(i)] < 0)
            throw InvalidParameter("evaluation node has unknown truth");
        if (predicted[static_cast<std::size_t>(i)] != truth[static_cast<std::size_t>(i)]) ++errors;
    }
    return static_cast<double>(errors) / static_cast<double>(eval_nodes.size());
}

double balanced_error(const std::vector<int>& predicted, const std::vector<int>& truth,
                      const std::vector<int>& eval_nodes) {
    if (eval_nodes.empty()) throw InvalidParameter("empty evaluation mask");
    std::map<int, std::pair<int, int>> per_class; // class -> (errors, count)
    for (int i : eval_nodes) {
        if (i < 0 || i >= static_cast<int>(truth.size()) || i >= static_cast<int>(predicted.size()))
            throw InvalidParameter("evaluation node out of range");
        const int t = truth[static_cast<std::size_t>(i)];
        if (t < 0) throw InvalidParameter("evaluation node has unknown truth");
        auto& [err, cnt] = per_class[t];
        ++cnt;
        if (predicted[static_cast<std::size_t>(i)] != t) ++err;
    }
    double sum = 0.0;
    for (const auto& [cls, ec] : per_class)
        sum += static_cast<double>(ec.first) / static_cast<double>(ec.second);
    return sum / static_cast<double>(per_class.size());
}

double coefficient_dissimilarity(const MatchedDictionary& dict, const Mat& f_source,
                                 const Mat& f_target) {
    if (f_source.rows() != dict.psi_s.rows() || f_target.rows() != dict.psi_t.rows() ||
        f_source.cols() != f_target.cols())
        throw InvalidParameter("label function shape mismatch");
    const Mat cs = dict.psi_s.transpose() * f_source;
    const Mat ct = dict.psi_t.transpose() * f_target;
    const double denom = cs.squaredNorm();
    if (!(denom > 0.0)) throw UndefinedMeasure("source coefficients have zero energy");
    return (cs - ct).squaredNorm() / denom;
}

const char* protocol_name(Protocol p) {
    switch (p) {
        case Protocol::target_sweep: return "target-sweep";
        case Protocol::source_sweep: return "source-sweep";
        case Protocol::unlabeled_match_sweep: return "unlabeled-match-sweep";
        case Protocol::partially_labeled_match_sweep: return "partially-labeled-match-sweep";
        case Protocol::labeled_match_sweep: return "labeled-match-sweep";
    }
    return "?";
}

std::optional<Protocol> parse_protocol(std::string_view name) {
    for (Protocol p : {Protocol::target_sweep, Protocol::source_sweep,
                       Protocol::unlabeled_match_sweep, Protocol::partially_labeled_match_sweep,
                       Protocol::labeled_match_sweep})
        if (name == protocol_name(p)) return p;
    return std::nullopt;
}

std::uint64_t derive_seed(std::uint64_t base, Protocol protocol, int ratio_index,
                          int repetition) {
    std::uint64_t z = mix64(base);
    z = mix64(z ^ (static_cast<std::uint64_t>(protocol) + 1));
    z = mix64(z ^ (static_cast<std::uint64_t>(ratio_index) + 0x100));
    z = mix64(z ^ (static_cast<std::uint64_t>(repetition) + 0x10000));
    return z;
}

namespace {

void validate_sweep(const SweepSpec& spec, const SweepProblem& prob) {
    if (spec.swept_ratios.empty()) throw InvalidParameter("no swept ratios");
    for (double r : spec.swept_ratios)
        if (!(r >= 0.0 && r <= 1.0)) throw InvalidParameter("ratios must lie in [0, 1]");
    for (double r : {spec.source_label_ratio, spec.match_label_ratio, spec.match_ratio})
        if (!(r >= 0.0 && r <= 1.0)) throw InvalidParameter("fixed ratios must lie in [0, 1]");
    if (spec.repetitions < 1) throw InvalidParameter("need at least one repetition");
    if (spec.jobs < 1) throw InvalidParameter("jobs must be positive");
    if (prob.num_classes < 1) throw InvalidParameter("need at least one class");
    if (!prob.source.frame || !prob.target.frame) throw InvalidParameter("missing frames");
    if (static_cast<int>(prob.source.truth.size()) != prob.source.lap.size() ||
        static_cast<int>(prob.target.truth.size()) != prob.target.lap.size())
        throw InvalidParameter("truth label length mismatch");
}

std::vector<int> take_fraction(std::vector<int> list, double ratio, Rng& rng) {
    rng.shuffle(list);
    list.resize(static_cast<std::size_t>(
        std::llround(ratio * static_cast<double>(list.size()))));
    return list;
}

bool sweeps_matches(Protocol p) {
    return p == Protocol::unlabeled_match_sweep ||
           p == Protocol::partially_labeled_match_sweep || p == Protocol::labeled_match_sweep;
}

} // namespace

CellPlan plan_sweep_cell(const SweepSpec& spec, const SweepProblem& prob, int ratio_index,
                         int repetition) {
    validate_sweep(spec, prob);
    if (ratio_index < 0 || ratio_index >= static_cast<int>(spec.swept_ratios.size()))
        throw InvalidParameter("ratio index out of range");
    if (repetition < 0 || repetition >= spec.repetitions)
        throw InvalidParameter("repetition out of range");

    const double ratio = spec.swept_ratios[static_cast<std::size_t>(ratio_index)];
    Rng rng(derive_seed(spec.seed, spec.protocol, ratio_index, repetition));

    CellPlan plan;
    auto infeasible = [&](std::string reason) {
        plan.feasible = false;
        plan.reason = std::move(reason);
        return plan;
    };

    const auto& truth_s = prob.source.truth;
    const auto& truth_t = prob.target.truth;
    const int ns = prob.source.lap.size();
    const int nt = prob.target.lap.size();

    // Matched pairs for this cell.
    const double match_ratio = sweeps_matches(spec.protocol) ? ratio : spec.match_ratio;
    if (spec.resample_matches) {
        const auto want = static_cast<int>(
            std::llround(match_ratio * static_cast<double>(std::min(ns, nt))));
        if (want < 1) return infeasible("no matched pairs at this ratio");
        // Stratified resampling: round-robin quotas across classes (so every
        // class is represented once want >= C), random samples within each.
        const auto c_num = static_cast<std::size_t>(prob.num_classes);
        std::vector<std::vector<int>> source_by_class(c_num), target_by_class(c_num);
        for (int i = 0; i < ns; ++i) {
            const int t = truth_s[static_cast<std::size_t>(i)];
            if (t >= 0 && t < prob.num_classes)
                source_by_class[static_cast<std::size_t>(t)].push_back(i);
        }
        for (int i = 0; i < nt; ++i) {
            const int t = truth_t[static_cast<std::size_t>(i)];
            if (t >= 0 && t < prob.num_classes)
                target_by_class[static_cast<std::size_t>(t)].push_back(i);
        }
        for (auto& lst : source_by_class) rng.shuffle(lst);
        for (auto& lst : target_by_class) rng.shuffle(lst);

        std::vector<std::size_t> quota(c_num, 0);
        int remaining = want;
        while (remaining > 0) {
            bool progressed = false;
            for (std::size_t c = 0; c < c_num && remaining > 0; ++c) {
                const std::size_t cap =
                    std::min(source_by_class[c].size(), target_by_class[c].size());
                if (quota[c] < cap) {
                    ++quota[c];
                    --remaining;
                    progressed = true;
                }
            }
            if (!progressed) return infeasible("not enough same-class pairs");
        }
        for (std::size_t c = 0; c < c_num; ++c)
            for (std::size_t q = 0; q < quota[c]; ++q)
                plan.pairs.emplace_back(source_by_class[c][q], target_by_class[c][q]);
    } else {
        if (prob.fixed_pairs.empty()) throw InvalidParameter("fixed match mode without pairs");
        if (sweeps_matches(spec.protocol)) {
            auto want = static_cast<std::size_t>(std::llround(
                match_ratio * static_cast<double>(prob.fixed_pairs.size())));
            if (want < 1) return infeasible("no matched pairs at this ratio");
            std::vector<std::size_t> order(prob.fixed_pairs.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            rng.shuffle(order);
            order.resize(want);
            for (std::size_t i : order) plan.pairs.push_back(prob.fixed_pairs[i]);
        } else {
            plan.pairs = prob.fixed_pairs;
        }
    }

    std::set<int> matched_s, matched_t;
    for (const auto& [m, n] : plan.pairs) {
        matched_s.insert(m);
        matched_t.insert(n);
    }
    std::vector<int> unmatched_s, unmatched_t;
    for (int i = 0; i < ns; ++i)
        if (truth_s[static_cast<std::size_t>(i)] >= 0 && !matched_s.count(i))
            unmatched_s.push_back(i);
    for (int i = 0; i < nt; ++i)
        if (truth_t[static_cast<std::size_t>(i)] >= 0 && !matched_t.count(i))
            unmatched_t.push_back(i);

    auto label_source = [&](const std::vector<int>& nodes) {
        for (int i : nodes)
            plan.labels_source.push_back({i, truth_s[static_cast<std::size_t>(i)]});
    };
    auto label_target = [&](const std::vector<int>& nodes) {
        for (int i : nodes)
            plan.labels_target.push_back({i, truth_t[static_cast<std::size_t>(i)]});
    };
    auto label_pairs_both = [&](const std::vector<std::size_t>& pair_indices) -> bool {
        for (std::size_t q : pair_indices) {
            const auto [m, n] = plan.pairs[q];
            if (truth_s[static_cast<std::size_t>(m)] < 0 ||
                truth_t[static_cast<std::size_t>(n)] < 0)
                return false;
            plan.labels_source.push_back({m, truth_s[static_cast<std::size_t>(m)]});
            plan.labels_target.push_back({n, truth_t[static_cast<std::size_t>(n)]});
        }
        return true;
    };
    auto all_pair_indices = [&]() {
        std::vector<std::size_t> idx(plan.pairs.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        return idx;
    };

    switch (spec.protocol) {
        case Protocol::target_sweep:
            label_source(unmatched_s);
            label_target(take_fraction(unmatched_t, ratio, rng));
            break;
        case Protocol::source_sweep:
            label_source(take_fraction(unmatched_s, ratio, rng));
            break;
        case Protocol::unlabeled_match_sweep:
            label_source(take_fraction(unmatched_s, spec.source_label_ratio, rng));
            break;
        case Protocol::partially_labeled_match_sweep: {
            label_source(take_fraction(unmatched_s, spec.source_label_ratio, rng));
            auto idx = all_pair_indices();
            rng.shuffle(idx);
            idx.resize(static_cast<std::size_t>(std::llround(
                spec.match_label_ratio * static_cast<double>(plan.pairs.size()))));
            if (!label_pairs_both(idx)) return infeasible("matched node with unknown truth");
            break;
        }
        case Protocol::labeled_match_sweep:
            label_source(take_fraction(unmatched_s, spec.source_label_ratio, rng));
            if (!label_pairs_both(all_pair_indices()))
                return infeasible("matched node with unknown truth");
            break;
    }

    if (plan.labels_source.empty() && plan.labels_target.empty())
        return infeasible("no labels anywhere");

    std::set<int> labeled_t;
    for (const auto& l : plan.labels_target) labeled_t.insert(l.index);
    for (int i = 0; i < nt; ++i)
        if (truth_t[static_cast<std::size_t>(i)] >= 0 && !labeled_t.count(i))
            plan.eval_nodes.push_back(i);
    if (plan.eval_nodes.empty()) return infeasible("empty evaluation set");

    plan.feasible = true;
    return plan;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const SweepProblem& prob) {
    validate_sweep(spec, prob);
    const int num_ratios = static_cast<int>(spec.swept_ratios.size());
    const int reps = spec.repetitions;
    const int cells = num_ratios * reps;

    std::vector<double> cell_error(static_cast<std::size_t>(cells), 0.0);
    std::vector<char> cell_feasible(static_cast<std::size_t>(cells), 0);
    std::exception_ptr failure;
    std::exception_ptr first_singular;
    std::atomic<bool> failed{false};

#pragma omp parallel for schedule(dynamic) num_threads(spec.jobs) if (spec.jobs > 1)
    for (int cell = 0; cell < cells; ++cell) {
        if (failed.load(std::memory_order_relaxed)) continue;
        try {
            const int k = cell / reps;
            const int r = cell % reps;
            CellPlan plan = plan_sweep_cell(spec, prob, k, r);
            if (!plan.feasible) continue;

            // Structural no-leakage guarantee.
            std::set<int> labeled_t;
            for (const auto& l : plan.labels_target) labeled_t.insert(l.index);
            for (int i : plan.eval_nodes)
                if (labeled_t.count(i))
                    throw NumericFailure("evaluation node overlaps labeled target set");

            AdaptationProblem problem;
            problem.lap_source = prob.source.lap;
            problem.lap_target = prob.target.lap;
            problem.dict = build_matched_dictionary(*prob.source.frame, *prob.target.frame,
                                                    plan.pairs);
            problem.labels_source = plan.labels_source;
            problem.labels_target = plan.labels_target;
            problem.num_classes = prob.num_classes;
            problem.mu = prob.mu;
            problem.gamma_source = prob.gamma_source;
            problem.gamma_target = prob.gamma_target;

            SolveOptions options;
            options.ridge = prob.ridge;
            const Solution sol = solve(problem, options);
            const std::vector<int> predicted = sol.f_target.decode();
            cell_error[static_cast<std::size_t>(cell)] =
                spec.balanced ? balanced_error(predicted, prob.target.truth, plan.eval_nodes)
                              : misclassification_rate(predicted, prob.target.truth,
                                                       plan.eval_nodes);
            cell_feasible[static_cast<std::size_t>(cell)] = 1;
        } catch (const SingularSystem&) {
            // A label draw left some graph component unidentifiable; the
            // cell is infeasible. Degenerate configurations where this hits
            // every cell re-raise below.
#pragma omp critical(gralp_sweep_failure)
            if (!first_singular) first_singular = std::current_exception();
        } catch (...) {
#pragma omp critical(gralp_sweep_failure)
            if (!failure) {
                failure = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
    const bool any_feasible =
        std::any_of(cell_feasible.begin(), cell_feasible.end(), [](char c) { return c != 0; });
    if (!any_feasible && first_singular) std::rethrow_exception(first_singular);

    std::vector<SweepRow> rows;
    rows.reserve(static_cast<std::size_t>(num_ratios));
    for (int k = 0; k < num_ratios; ++k) {
        SweepRow row;
        row.ratio = spec.swept_ratios[static_cast<std::size_t>(k)];
        double sum = 0.0;
        for (int r = 0; r < reps; ++r) {
            const auto cell = static_cast<std::size_t>(k * reps + r);
            if (cell_feasible[cell]) {
                ++row.feasible_repetitions;
                sum += cell_error[cell];
            } else {
                ++row.infeasible_repetitions;
            }
        }
        if (row.feasible_repetitions > 0) {
            row.mean_error = sum / row.feasible_repetitions;
            double sq = 0.0;
            for (int r = 0; r < reps; ++r) {
                const auto cell = static_cast<std::size_t>(k * reps + r);
                if (cell_feasible[cell]) {
                    const double d = cell_error[cell] - row.mean_error;
                    sq += d * d;
                }
            }
            row.std_error = row.feasible_repetitions > 1
                                ? std::sqrt(sq / (row.feasible_repetitions - 1))
                                : 0.0;
        } else {
            row.mean_error = std::nan("");
            row.std_error = std::nan("");
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<std::pair<int, int>> shuffle_pairs_across_classes(
    std::vector<std::pair<int, int>> pairs, const std::vector<int>& source_truth,
    const std::vector<int>& target_truth, std::uint64_t seed) {
    if (pairs.size() < 2) return pairs;
    Rng rng(mix64(seed));
    std::vector<int> targets;
    targets.reserve(pairs.size());
    for (const auto& [m, n] : pairs) targets.push_back(n);
    for (int attempt = 0; attempt < 100; ++attempt) {
        rng.shuffle(targets);
        std::size_t crossed = 0;
        for (std::size_t i = 0; i < pairs.size(); ++i)
            if (source_truth[static_cast<std::size_t>(pairs[i].first)] !=
                target_truth[static_cast<std::size_t>(targets[i])])
                ++crossed;
        if (2 * crossed >= pairs.size()) break;
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) pairs[i].second = targets[i];
    return pairs;
}

} // namespace gralp
