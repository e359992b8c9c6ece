// gralp: graph domain adaptation with matched local projections.
//
// Subcommands:
//   run       build the source/target pipeline, execute a sweep protocol,
//             write results CSV + manifest (+ optional per-node predictions)
//   diagnose  dictionary-coefficient diagnostic: projects the ground-truth
//             label functions of both domains onto the matched dictionary,
//             reports the normalized dissimilarity and dumps the series

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gralp/errors.hpp"
#include "gralp/experiments.hpp"
#include "gralp/io.hpp"
#include "gralp/solver.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using namespace gralp;

struct RunConfig {
    // input modes (mutually exclusive)
    bool synthetic = false;
    std::string source_features, target_features;
    bool label_column = false;
    std::string source_edges, target_edges;
    std::string source_labels, target_labels;
    std::string matches;

    // synthetic generator
    int classes = 3;
    int per_class_source = 34;
    int per_class_target = 34;
    int dims = 2;
    double center_scale = 2.4;
    double spread = 0.7;
    double warp_noise = 0.0;
    bool no_warp = false;

    // graph
    int knn = 7;
    double sigma = 0.6;
    std::string metric = "euclidean";
    std::string laplacian_variant = "unnorm";

    // wavelets
    std::string kernel = "ab-spline";
    int num_wavelets = 4;
    double lp_factor = 20.0;

    // solver
    double mu = 1.0;
    double gamma_s = 0.1;
    double gamma_t = 0.1;
    bool ridge = false;

    // protocol
    std::string protocol = "source-sweep";
    std::string ratios = "0.1,0.3,0.5,0.7,0.9";
    int reps = 20;
    double source_label_ratio = 0.9;
    double match_label_ratio = 0.25;
    double match_ratio = 0.1;
    bool fixed_matches = false;
    bool balanced = false;

    // execution / output
    std::uint64_t seed = 0;
    int jobs = 1;
    std::string out = "results.csv";
    std::string manifest; // default: <out>.manifest
    std::string predictions;
};

struct Binding {
    enum Kind { kBool, kInt, kU64, kDouble, kString };
    const char* key;
    const char* help;
    Kind kind;
    void* ptr;
    bool run_only = false;
};

std::vector<Binding> bindings(RunConfig& c) {
    return {
        {"synthetic", "generate a synthetic source/target pair", Binding::kBool, &c.synthetic},
        {"source-features", "source feature CSV", Binding::kString, &c.source_features},
        {"target-features", "target feature CSV", Binding::kString, &c.target_features},
        {"label-column", "feature CSVs carry a trailing integer label column", Binding::kBool,
         &c.label_column},
        {"source-edges", "source edge-list file", Binding::kString, &c.source_edges},
        {"target-edges", "target edge-list file", Binding::kString, &c.target_edges},
        {"source-labels", "source label file (edge-list mode)", Binding::kString,
         &c.source_labels},
        {"target-labels", "target label file (edge-list mode)", Binding::kString,
         &c.target_labels},
        {"matches", "fixed match file, one 'm n' pair per line", Binding::kString, &c.matches},
        {"classes", "synthetic: number of classes", Binding::kInt, &c.classes},
        {"per-class-source", "synthetic: source samples per class", Binding::kInt,
         &c.per_class_source},
        {"per-class-target", "synthetic: target samples per class", Binding::kInt,
         &c.per_class_target},
        {"dims", "synthetic: ambient dimension", Binding::kInt, &c.dims},
        {"center-scale", "synthetic: cluster center radius", Binding::kDouble, &c.center_scale},
        {"spread", "synthetic: within-cluster spread", Binding::kDouble, &c.spread},
        {"warp-noise", "synthetic: extra target jitter", Binding::kDouble, &c.warp_noise},
        {"no-warp", "synthetic: identical target embedding (control)", Binding::kBool,
         &c.no_warp},
        {"knn", "K for the K-NN graph", Binding::kInt, &c.knn},
        {"sigma", "Gaussian kernel width (euclidean metric)", Binding::kDouble, &c.sigma},
        {"metric", "euclidean | cosine", Binding::kString, &c.metric},
        {"laplacian", "unnorm | norm", Binding::kString, &c.laplacian_variant},
        {"kernel", "ab-spline | mexican-hat | meyer | simple-tight-frame", Binding::kString,
         &c.kernel},
        {"num-wavelets", "number of wavelet scales J", Binding::kInt, &c.num_wavelets},
        {"lp-factor", "low-pass design factor", Binding::kDouble, &c.lp_factor},
        {"mu", "coefficient-matching weight", Binding::kDouble, &c.mu},
        {"gamma-s", "source smoothness weight", Binding::kDouble, &c.gamma_s},
        {"gamma-t", "target smoothness weight", Binding::kDouble, &c.gamma_t},
        {"ridge", "regularize singular systems instead of failing", Binding::kBool, &c.ridge},
        {"protocol",
         "target-sweep | source-sweep | unlabeled-match-sweep | partially-labeled-match-sweep | "
         "labeled-match-sweep",
         Binding::kString, &c.protocol, true},
        {"ratios", "comma-separated swept ratios in [0,1]", Binding::kString, &c.ratios, true},
        {"reps", "repetitions per ratio", Binding::kInt, &c.reps, true},
        {"source-label-ratio", "fixed source label ratio", Binding::kDouble,
         &c.source_label_ratio, true},
        {"match-label-ratio", "labeled fraction of matches (partially-labeled protocol)",
         Binding::kDouble, &c.match_label_ratio, true},
        {"match-ratio", "fixed matched-node ratio", Binding::kDouble, &c.match_ratio},
        {"fixed-matches", "reuse one fixed match set instead of resampling per repetition",
         Binding::kBool, &c.fixed_matches},
        {"balanced", "report balanced error rates", Binding::kBool, &c.balanced, true},
        {"predictions", "write per-node target predictions CSV (first feasible cell)",
         Binding::kString, &c.predictions, true},
        {"seed", "master seed; all randomness derives from it", Binding::kU64, &c.seed},
        {"jobs", "parallel sweep cells", Binding::kInt, &c.jobs, true},
        {"out", "output CSV path", Binding::kString, &c.out},
        {"manifest", "manifest path (default: <out>.manifest)", Binding::kString, &c.manifest},
    };
}

void register_options(CLI::App& cmd, std::vector<Binding>& binds, bool run_mode) {
    for (Binding& b : binds) {
        if (b.run_only && !run_mode) continue;
        const std::string flag = std::string("--") + b.key;
        switch (b.kind) {
            case Binding::kBool: cmd.add_flag(flag, *static_cast<bool*>(b.ptr), b.help); break;
            case Binding::kInt: cmd.add_option(flag, *static_cast<int*>(b.ptr), b.help); break;
            case Binding::kU64:
                cmd.add_option(flag, *static_cast<std::uint64_t*>(b.ptr), b.help);
                break;
            case Binding::kDouble:
                cmd.add_option(flag, *static_cast<double*>(b.ptr), b.help);
                break;
            case Binding::kString:
                cmd.add_option(flag, *static_cast<std::string*>(b.ptr), b.help);
                break;
        }
    }
}

void assign_from_text(const Binding& b, const std::string& value, const std::string& path) {
    auto fail = [&](const std::string& msg) { throw ParseError(path, 0, b.key, msg); };
    try {
        std::size_t pos = 0;
        switch (b.kind) {
            case Binding::kBool:
                if (value == "true")
                    *static_cast<bool*>(b.ptr) = true;
                else if (value == "false")
                    *static_cast<bool*>(b.ptr) = false;
                else
                    fail("expected true or false, got '" + value + "'");
                break;
            case Binding::kInt:
                *static_cast<int*>(b.ptr) = std::stoi(value, &pos);
                if (pos != value.size()) fail("malformed integer '" + value + "'");
                break;
            case Binding::kU64:
                *static_cast<std::uint64_t*>(b.ptr) = std::stoull(value, &pos);
                if (pos != value.size()) fail("malformed integer '" + value + "'");
                break;
            case Binding::kDouble:
                *static_cast<double*>(b.ptr) = std::stod(value, &pos);
                if (pos != value.size()) fail("malformed number '" + value + "'");
                break;
            case Binding::kString: *static_cast<std::string*>(b.ptr) = value; break;
        }
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        fail("cannot parse value '" + value + "'");
    }
}

std::string value_to_text(const Binding& b) {
    char buf[40];
    switch (b.kind) {
        case Binding::kBool: return *static_cast<bool*>(b.ptr) ? "true" : "false";
        case Binding::kInt: return std::to_string(*static_cast<int*>(b.ptr));
        case Binding::kU64: return std::to_string(*static_cast<std::uint64_t*>(b.ptr));
        case Binding::kDouble:
            std::snprintf(buf, sizeof(buf), "%.17g", *static_cast<double*>(b.ptr));
            return buf;
        case Binding::kString: return *static_cast<std::string*>(b.ptr);
    }
    return {};
}

// Config-file values fill every option the command line left untouched.
void apply_config_file(const CLI::App& cmd, std::vector<Binding>& binds, bool run_mode,
                       const std::string& path) {
    for (const auto& [key, value] : load_key_value_file(path)) {
        if (key == "version") continue;
        const auto it = std::find_if(binds.begin(), binds.end(), [&](const Binding& b) {
            return key == b.key && (run_mode || !b.run_only);
        });
        if (it == binds.end()) throw ParseError(path, 0, key, "unknown configuration key");
        const CLI::Option* opt = cmd.get_option_no_throw("--" + key);
        if (opt != nullptr && opt->count() > 0) continue; // command line wins
        assign_from_text(*it, value, path);
    }
}

void write_manifest(const std::vector<Binding>& binds, bool run_mode, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidParameter("cannot write manifest '" + path + "'");
    out << "version=" << kVersion << "\n";
    for (const Binding& b : binds) {
        if (b.run_only && !run_mode) continue;
        out << b.key << "=" << value_to_text(b) << "\n";
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<double> parse_ratio_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &pos);
        } catch (const std::exception&) {
            throw InvalidParameter("malformed ratio '" + token + "'");
        }
        if (pos != token.size()) throw InvalidParameter("malformed ratio '" + token + "'");
        out.push_back(v);
    }
    if (out.empty()) throw InvalidParameter("empty ratio list");
    return out;
}

Metric parse_metric(const std::string& name) {
    if (name == "euclidean") return Metric::euclidean;
    if (name == "cosine") return Metric::cosine;
    throw InvalidParameter("unknown metric '" + name + "'");
}

LaplacianVariant parse_variant(const std::string& name) {
    if (name == "unnorm") return LaplacianVariant::unnormalized;
    if (name == "norm") return LaplacianVariant::normalized;
    throw InvalidParameter("unknown laplacian variant '" + name + "'");
}

KernelFamily parse_family(const std::string& name) {
    for (KernelFamily f : {KernelFamily::ab_spline, KernelFamily::mexican_hat,
                           KernelFamily::meyer, KernelFamily::simple_tight_frame})
        if (name == kernel_family_name(f)) return f;
    throw InvalidParameter("unknown kernel family '" + name + "'");
}

struct LoadedInputs {
    SweepProblem problem;
    std::vector<std::pair<int, int>> file_pairs;
};

LoadedInputs load_inputs(const RunConfig& cfg) {
    const int modes = (cfg.synthetic ? 1 : 0) + (!cfg.source_features.empty() ? 1 : 0) +
                      (!cfg.source_edges.empty() ? 1 : 0);
    if (modes != 1)
        throw InvalidParameter(
            "choose exactly one input mode: --synthetic, --source-features/--target-features, "
            "or --source-edges/--target-edges");

    KernelSpec spec;
    spec.family = parse_family(cfg.kernel);
    spec.num_scales = cfg.num_wavelets;
    spec.lp_factor = cfg.lp_factor;
    const LaplacianVariant variant = parse_variant(cfg.laplacian_variant);
    const Metric metric = parse_metric(cfg.metric);
    const std::optional<double> sigma =
        metric == Metric::euclidean ? std::optional<double>(cfg.sigma) : std::nullopt;

    LoadedInputs in;
    in.problem.num_classes = 0;
    auto infer_classes = [&](const std::vector<int>& truth) {
        for (int t : truth) in.problem.num_classes = std::max(in.problem.num_classes, t + 1);
    };

    if (cfg.synthetic) {
        SyntheticPairConfig gen;
        gen.num_classes = cfg.classes;
        gen.source_per_class = cfg.per_class_source;
        gen.target_per_class = cfg.per_class_target;
        gen.source_dim = gen.target_dim = cfg.dims;
        gen.center_scale = cfg.center_scale;
        gen.source_spread = gen.target_spread = cfg.spread;
        gen.warp_noise = cfg.warp_noise;
        gen.warp = !cfg.no_warp;
        gen.seed = cfg.seed;
        if (cfg.fixed_matches && cfg.matches.empty()) {
            const int min_n =
                std::min(gen.source_per_class, gen.target_per_class) * cfg.classes;
            gen.match_count =
                std::max<int>(1, static_cast<int>(std::llround(cfg.match_ratio * min_n)));
        }
        const SyntheticPair pair = generate_synthetic_pair(gen);
        FeatureSet fs = pair.source_features;
        FeatureSet ft = pair.target_features;
        fs.metric = ft.metric = metric;
        in.problem.source =
            make_domain_data(fs, pair.source_labels, cfg.knn, sigma, variant, spec);
        in.problem.target =
            make_domain_data(ft, pair.target_labels, cfg.knn, sigma, variant, spec);
        in.problem.num_classes = cfg.classes;
        in.file_pairs = pair.pairs;
    } else if (!cfg.source_features.empty()) {
        if (cfg.target_features.empty())
            throw InvalidParameter(
                "feature mode needs both --source-features and --target-features");
        const FeatureFile fs = load_feature_csv(cfg.source_features, cfg.label_column);
        const FeatureFile ft = load_feature_csv(cfg.target_features, cfg.label_column);
        if (!fs.has_labels || !ft.has_labels)
            throw InvalidParameter("sweep protocols need ground-truth labels (--label-column)");
        in.problem.source = make_domain_data(FeatureSet{fs.samples, metric}, fs.labels, cfg.knn,
                                             sigma, variant, spec);
        in.problem.target = make_domain_data(FeatureSet{ft.samples, metric}, ft.labels, cfg.knn,
                                             sigma, variant, spec);
        infer_classes(fs.labels);
        infer_classes(ft.labels);
    } else {
        if (cfg.target_edges.empty() || cfg.source_labels.empty() || cfg.target_labels.empty())
            throw InvalidParameter(
                "edge-list mode needs --source-edges, --target-edges, --source-labels, "
                "--target-labels");
        const Graph gs = load_edge_list(cfg.source_edges);
        const Graph gt = load_edge_list(cfg.target_edges);
        const auto truth_s = load_label_file(cfg.source_labels);
        const auto truth_t = load_label_file(cfg.target_labels);
        in.problem.source = make_domain_data(gs, truth_s, variant, spec);
        in.problem.target = make_domain_data(gt, truth_t, variant, spec);
        infer_classes(truth_s);
        infer_classes(truth_t);
    }

    if (!cfg.matches.empty()) in.file_pairs = load_match_file(cfg.matches);
    if (in.problem.num_classes < 1) throw InvalidParameter("no classes found in the inputs");

    in.problem.mu = cfg.mu;
    in.problem.gamma_source = cfg.gamma_s;
    in.problem.gamma_target = cfg.gamma_t;
    in.problem.ridge = cfg.ridge;
    if (cfg.fixed_matches) {
        if (in.file_pairs.empty())
            throw InvalidParameter("--fixed-matches needs --matches or a synthetic match set");
        in.problem.fixed_pairs = in.file_pairs;
    }
    return in;
}

void write_results_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ofstream out(path);
    if (!out) throw InvalidParameter("cannot write results '" + path + "'");
    out << "ratio,mean_error,std_error,n_repetitions,infeasible\n";
    for (const SweepRow& row : rows) {
        out << format_double(row.ratio) << ',';
        if (row.feasible_repetitions > 0)
            out << format_double(row.mean_error) << ',' << format_double(row.std_error);
        else
            out << "nan,nan";
        out << ',' << row.feasible_repetitions << ',' << row.infeasible_repetitions << "\n";
    }
}

AdaptationProblem cell_problem(const SweepProblem& prob, const CellPlan& plan) {
    AdaptationProblem problem;
    problem.lap_source = prob.source.lap;
    problem.lap_target = prob.target.lap;
    problem.dict = build_matched_dictionary(*prob.source.frame, *prob.target.frame, plan.pairs);
    problem.labels_source = plan.labels_source;
    problem.labels_target = plan.labels_target;
    problem.num_classes = prob.num_classes;
    problem.mu = prob.mu;
    problem.gamma_source = prob.gamma_source;
    problem.gamma_target = prob.gamma_target;
    return problem;
}

void write_predictions(const std::string& path, const SweepSpec& spec, const SweepProblem& prob) {
    // first feasible cell in (ratio, repetition) order
    for (int k = 0; k < static_cast<int>(spec.swept_ratios.size()); ++k)
        for (int r = 0; r < spec.repetitions; ++r) {
            const CellPlan plan = plan_sweep_cell(spec, prob, k, r);
            if (!plan.feasible) continue;
            SolveOptions options;
            options.ridge = prob.ridge;
            const Solution sol = solve(cell_problem(prob, plan), options);
            const auto decoded = sol.f_target.decode();

            std::ofstream out(path);
            if (!out) throw InvalidParameter("cannot write predictions '" + path + "'");
            out << "node,predicted_class";
            for (int c = 0; c < prob.num_classes; ++c) out << ",score_" << c;
            out << "\n";
            for (int i = 0; i < prob.target.lap.size(); ++i) {
                out << i << ',' << decoded[static_cast<std::size_t>(i)];
                for (int c = 0; c < prob.num_classes; ++c)
                    out << ',' << format_double(sol.f_target.values(i, c));
                out << "\n";
            }
            return;
        }
    throw InvalidParameter("no feasible sweep cell to draw predictions from");
}

int command_run(const RunConfig& cfg, const std::vector<Binding>& binds) {
    if (!cfg.matches.empty() && !cfg.fixed_matches)
        throw InvalidParameter(
            "--matches requires --fixed-matches; without it matches are resampled per "
            "repetition and the file would be ignored");
    const LoadedInputs in = load_inputs(cfg);

    SweepSpec spec;
    const auto protocol = parse_protocol(cfg.protocol);
    if (!protocol) throw InvalidParameter("unknown protocol '" + cfg.protocol + "'");
    spec.protocol = *protocol;
    spec.swept_ratios = parse_ratio_list(cfg.ratios);
    spec.source_label_ratio = cfg.source_label_ratio;
    spec.match_label_ratio = cfg.match_label_ratio;
    spec.match_ratio = cfg.match_ratio;
    spec.repetitions = cfg.reps;
    spec.seed = cfg.seed;
    spec.resample_matches = !cfg.fixed_matches;
    spec.balanced = cfg.balanced;
    spec.jobs = cfg.jobs;

    const auto rows = run_sweep(spec, in.problem);
    write_results_csv(cfg.out, rows);
    write_manifest(binds, true, cfg.manifest.empty() ? cfg.out + ".manifest" : cfg.manifest);
    if (!cfg.predictions.empty()) write_predictions(cfg.predictions, spec, in.problem);

    for (const SweepRow& row : rows) {
        if (row.feasible_repetitions > 0)
            std::printf("ratio %-6g mean_error %-10.4f std %-10.4f", row.ratio, row.mean_error,
                        row.std_error);
        else
            std::printf("ratio %-6g mean_error %-10s std %-10s", row.ratio, "nan", "nan");
        std::printf(" reps %d infeasible %d\n", row.feasible_repetitions,
                    row.infeasible_repetitions);
    }
    return 0;
}

int command_diagnose(const RunConfig& cfg, const std::vector<Binding>& binds) {
    const LoadedInputs in = load_inputs(cfg);
    const SweepProblem& prob = in.problem;

    for (const auto* truth : {&prob.source.truth, &prob.target.truth})
        for (int t : *truth)
            if (t < 0)
                throw InvalidParameter(
                    "diagnose mode requires ground-truth labels in both domains");

    // matches: fixed list when given, otherwise one seeded same-class resample
    std::vector<std::pair<int, int>> pairs = in.file_pairs;
    if (pairs.empty()) {
        SweepSpec spec;
        spec.protocol = Protocol::source_sweep;
        spec.swept_ratios = {1.0};
        spec.match_ratio = cfg.match_ratio;
        spec.repetitions = 1;
        spec.seed = cfg.seed;
        const CellPlan plan = plan_sweep_cell(spec, prob, 0, 0);
        if (!plan.feasible) throw InvalidParameter("cannot sample matches: " + plan.reason);
        pairs = plan.pairs;
    }

    const MatchedDictionary dict =
        build_matched_dictionary(*prob.source.frame, *prob.target.frame, pairs);
    const Mat f_s = encode_labels(prob.source.truth, prob.num_classes);
    const Mat f_t = encode_labels(prob.target.truth, prob.num_classes);
    const double delta = coefficient_dissimilarity(dict, f_s, f_t);

    const Mat cs = dict.psi_s.transpose() * f_s;
    const Mat ct = dict.psi_t.transpose() * f_t;
    std::ofstream out(cfg.out);
    if (!out) throw InvalidParameter("cannot write coefficients '" + cfg.out + "'");
    out << "pair,atom,class,source_coef,target_coef\n";
    for (Eigen::Index row = 0; row < cs.rows(); ++row)
        for (Eigen::Index c = 0; c < cs.cols(); ++c)
            out << row / dict.atoms_per_pair << ',' << row % dict.atoms_per_pair << ',' << c
                << ',' << format_double(cs(row, c)) << ',' << format_double(ct(row, c)) << "\n";

    write_manifest(binds, false, cfg.manifest.empty() ? cfg.out + ".manifest" : cfg.manifest);
    std::printf("delta=%.12g\n", delta);
    std::printf("pairs=%zu coefficients=%lld\n", pairs.size(), static_cast<long long>(cs.size()));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph domain adaptation with matched local projections"};
    app.require_subcommand(1);

    RunConfig run_cfg, diag_cfg;
    std::string run_config_file, diag_config_file;
    auto run_binds = bindings(run_cfg);
    auto diag_binds = bindings(diag_cfg);

    CLI::App* run_cmd = app.add_subcommand("run", "execute a sweep protocol");
    run_cmd->add_option("--config", run_config_file, "key=value config file (flags override)");
    register_options(*run_cmd, run_binds, true);

    CLI::App* diag_cmd = app.add_subcommand("diagnose", "coefficient-similarity diagnostic");
    diag_cmd->add_option("--config", diag_config_file, "key=value config file (flags override)");
    register_options(*diag_cmd, diag_binds, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            if (!run_config_file.empty())
                apply_config_file(*run_cmd, run_binds, true, run_config_file);
            return command_run(run_cfg, run_binds);
        }
        if (diag_cmd->parsed()) {
            if (!diag_config_file.empty())
                apply_config_file(*diag_cmd, diag_binds, false, diag_config_file);
            return command_diagnose(diag_cfg, diag_binds);
        }
    } catch (const SingularSystem& e) {
        std::cerr << "error: " << e.what() << "\n"
                  << "hint: pass --ridge to regularize, or supply labels/regularization for the "
                     "affected domain\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
