#pragma once

#include <vector>

namespace gralp {

enum class KernelFamily { ab_spline, mexican_hat, meyer, simple_tight_frame };

/// Wavelet design: band-pass family, number of scales J, and the low-pass
/// factor K_lp that places the scaling-kernel cutoff at lambda_max / K_lp.
struct KernelSpec {
    KernelFamily family = KernelFamily::ab_spline;
    int num_scales = 4;      // J
    double lp_factor = 20.0; // K_lp
};

// Band-pass generators g(x), normalized so the active band sits near
// x in [1, 2]. All satisfy g(0) = 0.

/// Cubic AB-spline band-pass with alpha = beta = 2 and design abscissae
/// x1 = 1, x2 = 2:
///   g(x) = x^2                      for x < 1
///   g(x) = x^3 - 6x^2 + 11x - 5     for 1 <= x <= 2
///   g(x) = 4 / x^2                  for x > 2
/// The cubic interpolates g(1) = g(2) = 1 with matching one-sided slopes
/// g'(1) = 2, g'(2) = -1, so the three pieces join C^1.
double abspline_bandpass(double x);

/// g(x) = x e^{-x}; maximum e^{-1} at x = 1.
double mexican_hat_bandpass(double x);

/// Meyer-style band-pass built from the auxiliary polynomial
/// nu(t) = t^4 (35 - 84 t + 70 t^2 - 20 t^3):
///   g(x) = sin(pi/2 nu(x - 1))      for 1 <= x <= 2
///   g(x) = cos(pi/2 nu(x/2 - 1))    for 2 <  x <= 4
///   g(x) = 0 elsewhere
double meyer_bandpass(double x);

/// Meyer scaling kernel: 1 on [0, 1], cos(pi/2 nu(x - 1)) on [1, 2], 0 above.
/// Complements meyer_bandpass on the shared band: sf^2 + g^2 = 1 on [1, 2].
double meyer_scaling(double x);

/// Tight-frame band-pass with a sin/cos crossfade in log frequency. `ratio`
/// is the geometric gap between adjacent scales. With t = log(x/2)/log(ratio)
/// (so one ratio step spans unit t),
///   g(x) = sin(pi/2 (t + 1))  rising on  [2/ratio, 2]
///   g(x) = cos(pi/2 t)        falling on [2, 2 ratio]
/// and 0 outside, so g(s_j x)^2 + g(s_{j+1} x)^2 = 1 whenever
/// s_j / s_{j+1} = ratio. Together with simple_tf_scaling at the largest
/// scale the frame function is exactly 1 on [0, lambda_max].
double simple_tf_bandpass(double x, double ratio);

/// Tight-frame scaling kernel: 1 on [0, 2/ratio], cos-crossfade down to 0 at
/// x = 2. Complements simple_tf_bandpass below its peak.
double simple_tf_scaling(double x, double ratio);

/// Scale ratio implied by a spec's sampling grid: K_lp^{1/(J-1)} for J >= 2,
/// K_lp for the degenerate J = 1 grid.
double simple_tf_ratio(const KernelSpec& spec);

/// Family dispatch with default design parameters (simple-tight-frame uses
/// the ratio of the default spec, 20^{1/3}).
double bandpass_eval(KernelFamily family, double x);

/// Normalized low-pass counterpart: exp(-x^4) for ab-spline and mexican-hat
/// (the frame applies gain and the 0.6 lambda_lp argument scaling), the
/// partition-of-unity scaling kernels for meyer and simple-tight-frame.
double scaling_eval(KernelFamily family, double x);

/// Upper design abscissa x2 of the normalized band; 2 for every family.
double upper_design_abscissa(KernelFamily family);

/// Logarithmic scale sampling: J scales descending from
/// s_max = x2 / lambda_min to s_min = x2 / lambda_max with
/// lambda_min = lambda_max / K_lp. J = 1 yields {s_max}.
std::vector<double> sample_scales(const KernelSpec& spec, double lambda_max);

const char* kernel_family_name(KernelFamily family);

} // namespace gralp
