#pragma once

#include "statstok/matrix.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace statstok {

/// Maximum-likelihood Gaussian fit of a window: mean, regularized covariance
/// (divisor n, then + epsilon * I) and its natural log-determinant.
struct CovarianceSummary {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> mean;
    Matrix cov;
    double log_det = 0.0;
};

/// Free parameters of a full-covariance Gaussian in d dimensions:
/// d + d(d+1)/2.
constexpr std::size_t gaussian_free_parameters(std::size_t d) noexcept {
    return d + d * (d + 1) / 2;
}

/// log|a| of a symmetric positive-definite matrix via Cholesky.
/// Throws SingularCovariance if the factorization breaks down.
double log_det_spd(const Matrix& a);

CovarianceSummary ml_covariance(MatrixView window, double epsilon);

/// Covariance of the row-concatenation of several blocks. Sums are
/// accumulated per block and then combined, so concatenating a block with an
/// exact copy of itself reproduces that block's statistics bit-for-bit.
CovarianceSummary ml_covariance(std::span<const MatrixView> blocks, double epsilon);

/// (n/2) log|Sigma_eps| + lambda * k * log n.
double bic_segment(MatrixView window, double lambda, double epsilon);

/// Change score between two adjacent equally sized windows:
///   2*delta*log|S12| - delta*(log|S1| + log|S2|) + k*log(2*delta)
/// Larger values mean stronger evidence for a change in distribution.
double delta_bic(MatrixView x1, MatrixView x2, double epsilon);

} // namespace statstok
