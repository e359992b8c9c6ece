#include "gralp/spectral.hpp"

#include <cmath>
#include <sstream>

#include "gralp/errors.hpp"

namespace gralp {

SpectralDecomposition decompose(const Laplacian& l) {
    const int n = l.size();
    if (n == 0) throw InvalidParameter("empty Laplacian");

    Eigen::SelfAdjointEigenSolver<Mat> solver(l.matrix);
    if (solver.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "eigensolver failed to converge: n=" << n << " norm=" << l.matrix.norm()
            << " asymmetry=" << (l.matrix - l.matrix.transpose()).cwiseAbs().maxCoeff();
        throw NumericFailure(msg.str());
    }

    SpectralDecomposition sd{solver.eigenvalues(), solver.eigenvectors()};

    // Fix the sign gauge: first nonzero entry of each column positive.
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            const double v = sd.eigenvectors(i, k);
            if (std::abs(v) > 1e-12) {
                if (v < 0.0) sd.eigenvectors.col(k) = -sd.eigenvectors.col(k);
                break;
            }
        }
    }
    return sd;
}

Vec fourier(const Vec& f, const SpectralDecomposition& sd) {
    if (f.size() != sd.size()) throw InvalidParameter("signal length mismatch");
    return sd.eigenvectors.transpose() * f;
}

Vec inverse_fourier(const Vec& coeffs, const SpectralDecomposition& sd) {
    if (coeffs.size() != sd.size()) throw InvalidParameter("coefficient length mismatch");
    return sd.eigenvectors * coeffs;
}

Vec filter_signal(const Vec& f, const SpectralKernel& kernel, const SpectralDecomposition& sd) {
    if (f.size() != sd.size()) throw InvalidParameter("signal length mismatch");
    Vec coeffs = sd.eigenvectors.transpose() * f;
    for (int k = 0; k < coeffs.size(); ++k) {
        const double g = kernel(sd.eigenvalues(k));
        if (!std::isfinite(g)) throw InvalidParameter("filter kernel not finite on the spectrum");
        coeffs(k) *= g;
    }
    return sd.eigenvectors * coeffs;
}

} // namespace gralp
