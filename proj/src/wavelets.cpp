#include "gralp/wavelets.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gralp/errors.hpp"

namespace gralp {

namespace {

Vec filtered_delta(const SpectralDecomposition& sd, const Vec& spectral_weights, int node) {
    if (node < 0 || node >= sd.size()) throw InvalidParameter("node index out of range");
    return sd.eigenvectors * spectral_weights.cwiseProduct(sd.eigenvectors.row(node).transpose());
}

Vec sample_kernel(const SpectralDecomposition& sd, const SpectralKernel& kernel, double scale) {
    Vec w(sd.size());
    for (int k = 0; k < sd.size(); ++k) {
        w(k) = kernel(scale * sd.eigenvalues(k));
        if (!std::isfinite(w(k))) throw InvalidParameter("kernel not finite on the spectrum");
    }
    return w;
}

} // namespace

Vec wavelet_atom(const SpectralDecomposition& sd, const SpectralKernel& g, double scale,
                 int node) {
    if (!(scale > 0.0)) throw InvalidParameter("scale must be positive");
    return filtered_delta(sd, sample_kernel(sd, g, scale), node);
}

Vec scaling_atom(const SpectralDecomposition& sd, const SpectralKernel& h, int node) {
    return filtered_delta(sd, sample_kernel(sd, h, 1.0), node);
}

WaveletFrame::WaveletFrame(std::shared_ptr<const SpectralDecomposition> sd,
                           const KernelSpec& spec)
    : sd_(std::move(sd)), spec_(spec) {
    if (!sd_) throw InvalidParameter("null decomposition");
    const double lambda_max = sd_->lambda_max();
    scales_ = sample_scales(spec_, lambda_max);
    lambda_lp_ = lambda_max / spec_.lp_factor;
    stf_ratio_ = simple_tf_ratio(spec_);

    const int n = sd_->size();
    const int num_scales = static_cast<int>(scales_.size());
    spectral_weights_.assign(static_cast<std::size_t>(num_scales) + 1, Vec(n));

    for (int j = 0; j < num_scales; ++j)
        for (int k = 0; k < n; ++k)
            spectral_weights_[static_cast<std::size_t>(j) + 1](k) =
                bandpass(sd_->eigenvalues(k), j);

    // Gain for the exp(-x^4) low-pass: h(0) matches the band-pass maximum
    // over the sampled spectrum.
    if (spec_.family == KernelFamily::ab_spline || spec_.family == KernelFamily::mexican_hat) {
        double peak = 0.0;
        for (int j = 1; j <= num_scales; ++j)
            peak = std::max(peak, spectral_weights_[static_cast<std::size_t>(j)].maxCoeff());
        lowpass_gain_ = peak;
    }
    for (int k = 0; k < n; ++k) spectral_weights_[0](k) = lowpass(sd_->eigenvalues(k));
}

double WaveletFrame::bandpass(double lambda, int scale_index) const {
    const double x = scales_[static_cast<std::size_t>(scale_index)] * lambda;
    switch (spec_.family) {
        case KernelFamily::ab_spline: return abspline_bandpass(x);
        case KernelFamily::mexican_hat: return mexican_hat_bandpass(x);
        case KernelFamily::meyer: return meyer_bandpass(x);
        case KernelFamily::simple_tight_frame: return simple_tf_bandpass(x, stf_ratio_);
    }
    throw InvalidParameter("unknown kernel family");
}

double WaveletFrame::lowpass(double lambda) const {
    switch (spec_.family) {
        case KernelFamily::ab_spline:
        case KernelFamily::mexican_hat: {
            const double x = lambda / (0.6 * lambda_lp_);
            return lowpass_gain_ * std::exp(-(x * x * x * x));
        }
        case KernelFamily::meyer: return meyer_scaling(scales_.front() * lambda);
        case KernelFamily::simple_tight_frame:
            return simple_tf_scaling(scales_.front() * lambda, stf_ratio_);
    }
    throw InvalidParameter("unknown kernel family");
}

double WaveletFrame::frame_function(double lambda) const {
    const double h = lowpass(lambda);
    double g_sum = 0.0;
    for (int j = 0; j < static_cast<int>(scales_.size()); ++j) {
        const double g = bandpass(lambda, j);
        g_sum += g * g;
    }
    return h * h + g_sum;
}

Vec WaveletFrame::frame_values() const {
    Vec g(sd_->size());
    for (int k = 0; k < sd_->size(); ++k) g(k) = frame_function(sd_->eigenvalues(k));
    return g;
}

double WaveletFrame::frame_lower_bound() const { return frame_values().minCoeff(); }

Mat WaveletFrame::atoms(int node, dense::ExecPolicy policy) const {
    return dense::filtered_delta_columns(sd_->eigenvectors, spectral_weights_, {node}, policy);
}

Mat WaveletFrame::atoms_at(const std::vector<int>& nodes, dense::ExecPolicy policy) const {
    return dense::filtered_delta_columns(sd_->eigenvectors, spectral_weights_, nodes, policy);
}

MatchedDictionary build_matched_dictionary(const WaveletFrame& source, const WaveletFrame& target,
                                           const std::vector<std::pair<int, int>>& pairs,
                                           dense::ExecPolicy policy) {
    if (pairs.empty()) throw InvalidParameter("need at least one matched pair");
    if (source.atoms_per_node() != target.atoms_per_node())
        throw InvalidParameter("frames disagree on the number of atoms per node");

    std::set<int> seen_s, seen_t;
    std::vector<int> nodes_s, nodes_t;
    nodes_s.reserve(pairs.size());
    nodes_t.reserve(pairs.size());
    for (const auto& [m, n] : pairs) {
        if (m < 0 || m >= source.num_nodes() || n < 0 || n >= target.num_nodes())
            throw InvalidParameter("matched pair index out of range");
        if (!seen_s.insert(m).second || !seen_t.insert(n).second)
            throw InvalidParameter("duplicate node in matched pairs");
        nodes_s.push_back(m);
        nodes_t.push_back(n);
    }

    MatchedDictionary dict;
    dict.psi_s = source.atoms_at(nodes_s, policy);
    dict.psi_t = target.atoms_at(nodes_t, policy);
    dict.pairs = pairs;
    dict.atoms_per_pair = source.atoms_per_node();
    return dict;
}

} // namespace gralp
