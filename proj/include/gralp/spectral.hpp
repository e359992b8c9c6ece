#pragma once

#include <functional>

#include "gralp/graph.hpp"
#include "gralp/types.hpp"

namespace gralp {

/// Full eigensystem of a Laplacian. Eigenvalues ascend; eigenvector columns
/// are orthonormal and each column's first nonzero entry is positive, which
/// pins the otherwise arbitrary sign.
struct SpectralDecomposition {
    Vec eigenvalues;
    Mat eigenvectors;

    int size() const { return static_cast<int>(eigenvalues.size()); }
    double lambda_max() const { return eigenvalues(eigenvalues.size() - 1); }
};

SpectralDecomposition decompose(const Laplacian& l);

using SpectralKernel = std::function<double(double)>;

/// Coefficients <f, u_k> of a graph signal in the eigenbasis.
Vec fourier(const Vec& f, const SpectralDecomposition& sd);

/// Reconstruction sum_k coeffs[k] u_k; exact adjoint of fourier().
Vec inverse_fourier(const Vec& coeffs, const SpectralDecomposition& sd);

/// sum_k kernel(lambda_k) <f, u_k> u_k. The kernel must be finite on the
/// spectrum.
Vec filter_signal(const Vec& f, const SpectralKernel& kernel, const SpectralDecomposition& sd);

} // namespace gralp
