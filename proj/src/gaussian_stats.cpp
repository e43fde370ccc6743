#include "statstok/gaussian_stats.hpp"

#include "statstok/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace statstok {

namespace {

using Wide = long double;

// Cholesky in extended precision. Windows shorter than d + 1 leave the
// scatter rank-deficient, so the smallest eigenvalue is about epsilon and
// double rounding of the entries would already show up in the log-det.
Wide log_det_cholesky(const std::vector<Wide>& a, std::size_t d) {
    std::vector<Wide> l(d * d, 0.0L);
    Wide log_det = 0.0L;
    for (std::size_t j = 0; j < d; ++j) {
        Wide diag = a[j * d + j];
        for (std::size_t p = 0; p < j; ++p) diag -= l[j * d + p] * l[j * d + p];
        if (!(diag > 0.0L) || !std::isfinite(diag)) {
            throw Error(ErrorCode::SingularCovariance,
                        "covariance is not positive definite (pivot " + std::to_string(j) + ")");
        }
        const Wide ljj = std::sqrt(diag);
        l[j * d + j] = ljj;
        log_det += std::log(ljj);
        for (std::size_t i = j + 1; i < d; ++i) {
            Wide s = a[i * d + j];
            for (std::size_t p = 0; p < j; ++p) s -= l[i * d + p] * l[j * d + p];
            l[i * d + j] = s / ljj;
        }
    }
    return 2.0L * log_det;
}

struct WideFit {
    CovarianceSummary summary;
    Wide log_det = 0.0L;
};

WideFit fit(std::span<const MatrixView> blocks, double epsilon);

} // namespace

double log_det_spd(const Matrix& a) {
    const std::size_t d = a.rows();
    if (d == 0 || a.cols() != d) {
        throw Error(ErrorCode::InvalidInput, "log_det_spd: matrix must be square and non-empty");
    }
    const auto v = a.values();
    return static_cast<double>(log_det_cholesky(std::vector<Wide>(v.begin(), v.end()), d));
}

namespace {

WideFit fit(std::span<const MatrixView> blocks, double epsilon) {
    if (blocks.empty()) {
        throw Error(ErrorCode::InsufficientData, "ml_covariance: no data");
    }
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw Error(ErrorCode::InvalidInput, "ml_covariance: epsilon must be finite and >= 0");
    }
    const std::size_t d = blocks.front().cols();
    std::size_t n = 0;
    for (const auto& b : blocks) {
        if (b.cols() != d) {
            throw Error(ErrorCode::InvalidInput, "ml_covariance: blocks differ in dimensionality");
        }
        n += b.rows();
    }
    if (d == 0) throw Error(ErrorCode::InvalidInput, "ml_covariance: zero-dimensional window");
    if (n < 2) throw Error(ErrorCode::InsufficientData, "ml_covariance: need at least 2 rows");

    std::vector<Wide> total(d, 0.0L);
    std::vector<Wide> block_sum(d);
    for (const auto& b : blocks) {
        std::fill(block_sum.begin(), block_sum.end(), 0.0L);
        for (std::size_t r = 0; r < b.rows(); ++r) {
            const auto row = b.row(r);
            for (std::size_t c = 0; c < d; ++c) {
                if (!std::isfinite(row[c])) {
                    throw Error(ErrorCode::InvalidInput, "ml_covariance: non-finite value");
                }
                block_sum[c] += row[c];
            }
        }
        for (std::size_t c = 0; c < d; ++c) total[c] += block_sum[c];
    }

    const Wide nd = static_cast<Wide>(n);
    std::vector<Wide> mean(d);
    for (std::size_t c = 0; c < d; ++c) mean[c] = total[c] / nd;

    // Upper triangle of the scatter matrix about the pooled mean.
    std::vector<Wide> scatter(d * d, 0.0L);
    std::vector<Wide> block_scatter(d * d);
    std::vector<Wide> centered(d);
    for (const auto& b : blocks) {
        std::fill(block_scatter.begin(), block_scatter.end(), 0.0L);
        for (std::size_t r = 0; r < b.rows(); ++r) {
            const auto row = b.row(r);
            for (std::size_t c = 0; c < d; ++c) centered[c] = row[c] - mean[c];
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = i; j < d; ++j) block_scatter[i * d + j] += centered[i] * centered[j];
            }
        }
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = i; j < d; ++j) scatter[i * d + j] += block_scatter[i * d + j];
        }
    }

    std::vector<Wide> cov(d * d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) cov[i * d + j] = cov[j * d + i] = scatter[i * d + j] / nd;
        cov[i * d + i] += epsilon;
    }

    WideFit out;
    out.log_det = log_det_cholesky(cov, d);
    auto& s = out.summary;
    s.n = n;
    s.d = d;
    s.mean.assign(mean.begin(), mean.end());
    s.cov = Matrix(d, d, std::vector<double>(cov.begin(), cov.end()));
    s.log_det = static_cast<double>(out.log_det);
    return out;
}

} // namespace

CovarianceSummary ml_covariance(std::span<const MatrixView> blocks, double epsilon) {
    return fit(blocks, epsilon).summary;
}

CovarianceSummary ml_covariance(MatrixView window, double epsilon) {
    return ml_covariance(std::span<const MatrixView>(&window, 1), epsilon);
}

double bic_segment(MatrixView window, double lambda, double epsilon) {
    const WideFit f = fit(std::span<const MatrixView>(&window, 1), epsilon);
    const Wide n = static_cast<Wide>(f.summary.n);
    const Wide k = static_cast<Wide>(gaussian_free_parameters(f.summary.d));
    return static_cast<double>(0.5L * n * f.log_det + lambda * k * std::log(n));
}

double delta_bic(MatrixView x1, MatrixView x2, double epsilon) {
    if (x1.rows() != x2.rows() || x1.cols() != x2.cols()) {
        throw Error(ErrorCode::InvalidInput, "delta_bic: windows must have identical shape");
    }
    if (x1.rows() < 2) {
        throw Error(ErrorCode::InsufficientData, "delta_bic: window length must be >= 2");
    }
    const Wide delta = static_cast<Wide>(x1.rows());
    const Wide k = static_cast<Wide>(gaussian_free_parameters(x1.cols()));

    const MatrixView both[2] = {x1, x2};
    const Wide ld1 = fit(std::span<const MatrixView>(&x1, 1), epsilon).log_det;
    const Wide ld2 = fit(std::span<const MatrixView>(&x2, 1), epsilon).log_det;
    const Wide ld12 = fit(std::span<const MatrixView>(both), epsilon).log_det;

    // -2 (l_joint - l_sep) with l_sep = -(delta/2)(ld1 + ld2), l_joint = -delta * ld12.
    return static_cast<double>(2.0L * delta * ld12 - delta * (ld1 + ld2) + k * std::log(2.0L * delta));
}

} // namespace statstok
