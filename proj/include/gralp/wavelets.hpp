#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "gralp/dense_ops.hpp"
#include "gralp/kernels.hpp"
#include "gralp/spectral.hpp"

namespace gralp {

/// Wavelet at scale s localized at a node: the Dirac delta at the node,
/// band-pass filtered through g(s lambda). Equals column `node` of
/// U diag(g(s lambda_k)) U^T.
Vec wavelet_atom(const SpectralDecomposition& sd, const SpectralKernel& g, double scale,
                 int node);

/// Low-pass counterpart built from a scaling kernel h(lambda), no scale.
Vec scaling_atom(const SpectralDecomposition& sd, const SpectralKernel& h, int node);

/// Scaling-plus-wavelet frame on one graph. For each node the (J+1) atoms
/// are [phi_n, psi_{s_1,n}, ..., psi_{s_J,n}] with scales descending.
/// Immutable after construction.
class WaveletFrame {
public:
    WaveletFrame(std::shared_ptr<const SpectralDecomposition> sd, const KernelSpec& spec);

    const KernelSpec& spec() const { return spec_; }
    const std::vector<double>& scales() const { return scales_; }
    int num_nodes() const { return sd_->size(); }
    int atoms_per_node() const { return static_cast<int>(scales_.size()) + 1; }
    const SpectralDecomposition& decomposition() const { return *sd_; }

    /// n_nodes x (J+1) atom matrix at one node, scaling function first.
    Mat atoms(int node, dense::ExecPolicy policy = dense::ExecPolicy::parallel) const;

    /// Concatenated atom blocks at several nodes: n_nodes x |nodes|(J+1).
    Mat atoms_at(const std::vector<int>& nodes,
                 dense::ExecPolicy policy = dense::ExecPolicy::parallel) const;

    /// g(s_j lambda) for scale index j in [0, J); h(lambda) for the low-pass.
    double bandpass(double lambda, int scale_index) const;
    double lowpass(double lambda) const;

    /// Frame function G(lambda) = h(lambda)^2 + sum_j g(s_j lambda)^2.
    double frame_function(double lambda) const;

    /// G evaluated on the graph spectrum, and its minimum (the empirical
    /// lower frame bound; positive iff the atoms form a frame on this graph).
    Vec frame_values() const;
    double frame_lower_bound() const;

private:
    std::shared_ptr<const SpectralDecomposition> sd_;
    KernelSpec spec_;
    std::vector<double> scales_;
    std::vector<Vec> spectral_weights_; // [h; g(s_1 .); ...; g(s_J .)] on the spectrum
    double lambda_lp_ = 0.0;            // lambda_max / K_lp
    double lowpass_gain_ = 1.0;         // gain for the exp(-x^4) families
    double stf_ratio_ = 2.0;
};

/// Atoms of the two frames gathered at Q matched node pairs. Column block i
/// of psi_s holds the source atoms at m_i (scaling function first, then
/// s_1..s_J); psi_t likewise at n_i.
struct MatchedDictionary {
    Mat psi_s;
    Mat psi_t;
    std::vector<std::pair<int, int>> pairs;
    int atoms_per_pair = 0;
};

/// Pairs must be non-empty, in range, and duplicate-free on each side.
MatchedDictionary build_matched_dictionary(const WaveletFrame& source, const WaveletFrame& target,
                                           const std::vector<std::pair<int, int>>& pairs,
                                           dense::ExecPolicy policy = dense::ExecPolicy::parallel);

} // namespace gralp
