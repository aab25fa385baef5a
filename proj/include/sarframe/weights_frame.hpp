#pragma once

#include "sarframe/signal_core.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace sarframe {

/// How the window transform (W) and the frame inner products (Psi) are
/// evaluated. All three have closed forms.
///
///  - grid:          both as averages over the reconstruction samples x_k = k/M.
///                   W * Psi is exactly the identity on uniform integer data,
///                   which makes every frame method collapse to the IDFT.
///  - unit_interval: both as integrals over x in [0, 1].
///  - whole_line:    W from the transform over the whole real line
///                   (window_hat_eval), Psi as the [0, 1] integral. The W
///                   rows then scale like 2/a, so A = W Psi is far from I.
enum class FrameRule { grid, unit_interval, whole_line };

struct FrameOptions {
    WindowSpec window{};
    /// Truncation radius in grid steps: W[m, p] = 0 when |l_m - lambda_p| >= q * step.
    double q = 6.0;
    FrameRule rule = FrameRule::grid;

    void validate() const;
};

/// Trapezoidal quadrature weights for strictly increasing nodes.
std::vector<double> trapezoidal_weights(std::span<const double> freqs);

/// W entry for frequency offset delta = (l_m - lambda_p) / step, measured in grid steps.
Complex window_kernel(const WindowSpec& window, FrameRule rule, double delta, std::size_t m_count);

/// Psi entry <exp(2 pi i lambda x), exp(2 pi i l x) / w(x)> for delta = (l - lambda) / step.
/// The inner product is conjugate-linear in its first argument, i.e. the
/// integrand is exp(2 pi i delta x) / w(x).
Complex psi_kernel(const WindowSpec& window, FrameRule rule, double delta, std::size_t m_count);

struct FrameMatrices {
    Eigen::MatrixXcd W;    // M x P
    Eigen::MatrixXcd Psi;  // P x M
    Eigen::MatrixXcd A;    // M x M, W * Psi
};

FrameMatrices build_frame_matrices(std::span<const double> range_freqs, const UniformGrid1D& grid,
                                   const FrameOptions& opts);

/// Row-banded storage of the (q-truncated) W matrix. Row m holds the
/// contiguous sample range [first(m), first(m) + row(m).size()).
class WindowBand {
public:
    WindowBand(std::span<const double> range_freqs, const UniformGrid1D& grid, const FrameOptions& opts);

    std::size_t rows() const noexcept { return first_.size(); }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t first(std::size_t m) const { return first_[m]; }
    std::span<const Complex> row(std::size_t m) const { return entries_[m]; }

    /// W * diag(weights) * values; weights may be empty (all ones).
    Eigen::VectorXcd apply(std::span<const Complex> values, std::span<const double> weights = {}) const;
    Eigen::MatrixXcd to_dense() const;

private:
    std::size_t cols_ = 0;
    std::vector<std::size_t> first_;
    std::vector<std::vector<Complex>> entries_;
};

/// Diagonal of A = W * Psi computed from the band of W alone (never forms Psi or A).
Eigen::VectorXcd frame_product_diagonal(std::span<const double> range_freqs, const UniformGrid1D& grid,
                                        const FrameOptions& opts);
Eigen::VectorXcd frame_product_diagonal(const WindowBand& band, std::span<const double> range_freqs,
                                        const UniformGrid1D& grid, const FrameOptions& opts);

enum class CorrectionKind { diagonal_quadrature, full_pinv, banded, thresholded, thresholded_fast };

const char* to_string(CorrectionKind kind);

/// Square correction matrix D plus its sparsity statistics. Diagonal kinds
/// keep only the diagonal; the others store a dense matrix with explicit zeros.
class CorrectionMatrix {
public:
    static CorrectionMatrix from_dense(CorrectionKind kind, Eigen::MatrixXcd d, double tau = 0.0,
                                       std::size_t band_r = 0);
    static CorrectionMatrix from_diagonal(CorrectionKind kind, Eigen::VectorXcd diag, double tau = 0.0);

    CorrectionKind kind() const noexcept { return kind_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t nnz() const noexcept { return nnz_; }
    double tau() const noexcept { return tau_; }
    std::size_t band_r() const noexcept { return band_r_; }
    bool is_diagonal() const noexcept { return diagonal_only_; }

    Complex entry(std::size_t n, std::size_t m) const;
    Eigen::MatrixXcd to_dense() const;
    const Eigen::MatrixXcd& dense() const noexcept { return dense_; }
    const Eigen::VectorXcd& diagonal() const noexcept { return diag_; }

    /// D * v. Banded matrices only touch their band.
    Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;

private:
    CorrectionKind kind_ = CorrectionKind::full_pinv;
    std::size_t dim_ = 0;
    std::size_t nnz_ = 0;
    double tau_ = 0.0;
    std::size_t band_r_ = 0;
    bool diagonal_only_ = false;
    Eigen::MatrixXcd dense_;
    Eigen::VectorXcd diag_;
};

inline constexpr double kPinvRtol = 1e-12;

/// Moore-Penrose pseudo-inverse by SVD; singular values below rtol * sigma_max are dropped.
Eigen::MatrixXcd pseudo_inverse(const Eigen::MatrixXcd& a, double rtol = kPinvRtol);

/// NUFFT correction: diag(alpha) with the quadrature weights.
CorrectionMatrix correction_quadrature(std::span<const double> weights);

/// FA correction: D = pinv(A).
CorrectionMatrix correction_full_pinv(const FrameMatrices& frames);
CorrectionMatrix correction_full_pinv(const Eigen::MatrixXcd& a);

/// Keep |n - m| <= r, zero the rest.
CorrectionMatrix band_restrict(const CorrectionMatrix& d_full, std::size_t r);

/// Keep entries with |x| >= tau, zero the rest.
CorrectionMatrix threshold_restrict(const CorrectionMatrix& d_full, double tau);

/// FFR correction band_restrict(pinv(A), r). When A is numerically invertible
/// the inverse comes from a partial-pivot LU instead of the SVD; otherwise it
/// falls back to pseudo_inverse.
CorrectionMatrix correction_banded(const Eigen::MatrixXcd& a, std::size_t r);

/// Diagonal-only tFFR: D[m, m] = 1 / A[m, m] when |1 / A[m, m]| >= tau, else 0.
CorrectionMatrix correction_thresholded_fast(const FrameMatrices& frames, double tau);
CorrectionMatrix correction_thresholded_fast(const Eigen::VectorXcd& a_diagonal, double tau);

struct BoundResiduals {
    double lhs = 0.0;             // == residual_right
    double rhs = 0.0;             // ||D||_F^2 * ||A - pinv(D)||_F^2
    double residual_left = 0.0;   // ||D A - I||_F^2
    double residual_right = 0.0;  // ||A D - I||_F^2
    bool d_invertible = false;    // the inequality lhs <= rhs is only guaranteed when true
};

BoundResiduals bound_residuals(const FrameMatrices& frames, const CorrectionMatrix& d);
BoundResiduals bound_residuals(const Eigen::MatrixXcd& a, const CorrectionMatrix& d);

}  // namespace sarframe
