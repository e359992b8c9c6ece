#include "gralp/kernels.hpp"

#include <cmath>

#include "gralp/errors.hpp"

namespace gralp {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Meyer auxiliary polynomial: smooth 0 -> 1 on [0, 1] with vanishing
// derivatives at both ends.
inline double meyer_nu(double t) {
    return t * t * t * t * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)));
}

} // namespace

double abspline_bandpass(double x) {
    if (x <= 0.0) return 0.0;
    if (x < 1.0) return x * x;
    if (x <= 2.0) return -5.0 + x * (11.0 + x * (-6.0 + x));
    return 4.0 / (x * x);
}

double mexican_hat_bandpass(double x) {
    if (x <= 0.0) return 0.0;
    return x * std::exp(-x);
}

double meyer_bandpass(double x) {
    if (x <= 1.0 || x >= 4.0) return 0.0;
    if (x <= 2.0) return std::sin(0.5 * kPi * meyer_nu(x - 1.0));
    return std::cos(0.5 * kPi * meyer_nu(0.5 * x - 1.0));
}

double meyer_scaling(double x) {
    if (x <= 1.0) return 1.0;
    if (x >= 2.0) return 0.0;
    return std::cos(0.5 * kPi * meyer_nu(x - 1.0));
}

double simple_tf_bandpass(double x, double ratio) {
    const double x2 = 2.0;
    if (x <= x2 / ratio || x >= x2 * ratio) return 0.0;
    const double t = std::log(x / x2) / std::log(ratio); // one ratio step = unit t
    if (t <= 0.0) return std::sin(0.5 * kPi * (t + 1.0));
    return std::cos(0.5 * kPi * t);
}

double simple_tf_scaling(double x, double ratio) {
    const double x2 = 2.0;
    if (x <= x2 / ratio) return 1.0;
    if (x >= x2) return 0.0;
    const double t = std::log(x / x2) / std::log(ratio);
    return std::cos(0.5 * kPi * (t + 1.0));
}

double simple_tf_ratio(const KernelSpec& spec) {
    if (spec.num_scales < 2) return spec.lp_factor;
    return std::pow(spec.lp_factor, 1.0 / (spec.num_scales - 1));
}

double bandpass_eval(KernelFamily family, double x) {
    switch (family) {
        case KernelFamily::ab_spline: return abspline_bandpass(x);
        case KernelFamily::mexican_hat: return mexican_hat_bandpass(x);
        case KernelFamily::meyer: return meyer_bandpass(x);
        case KernelFamily::simple_tight_frame:
            return simple_tf_bandpass(x, simple_tf_ratio(KernelSpec{}));
    }
    throw InvalidParameter("unknown kernel family");
}

double scaling_eval(KernelFamily family, double x) {
    switch (family) {
        case KernelFamily::ab_spline:
        case KernelFamily::mexican_hat: return std::exp(-(x * x * x * x));
        case KernelFamily::meyer: return meyer_scaling(x);
        case KernelFamily::simple_tight_frame:
            return simple_tf_scaling(x, simple_tf_ratio(KernelSpec{}));
    }
    throw InvalidParameter("unknown kernel family");
}

double upper_design_abscissa(KernelFamily) { return 2.0; }

std::vector<double> sample_scales(const KernelSpec& spec, double lambda_max) {
    if (!(lambda_max > 0.0)) throw InvalidParameter("lambda_max must be positive");
    if (spec.num_scales < 1) throw InvalidParameter("need at least one scale");
    if (!(spec.lp_factor > 1.0)) throw InvalidParameter("lp_factor must exceed 1");

    const double x2 = upper_design_abscissa(spec.family);
    const double lambda_min = lambda_max / spec.lp_factor;
    const double s_max = x2 / lambda_min;
    const double s_min = x2 / lambda_max;

    std::vector<double> scales(static_cast<std::size_t>(spec.num_scales));
    if (spec.num_scales == 1) {
        scales[0] = s_max;
        return scales;
    }
    const double log_max = std::log(s_max);
    const double log_min = std::log(s_min);
    for (int j = 0; j < spec.num_scales; ++j)
        scales[static_cast<std::size_t>(j)] =
            std::exp(log_max + (log_min - log_max) * j / (spec.num_scales - 1));
    return scales;
}

const char* kernel_family_name(KernelFamily family) {
    switch (family) {
        case KernelFamily::ab_spline: return "ab-spline";
        case KernelFamily::mexican_hat: return "mexican-hat";
        case KernelFamily::meyer: return "meyer";
        case KernelFamily::simple_tight_frame: return "simple-tight-frame";
    }
    return "?";
}

} // namespace gralp
