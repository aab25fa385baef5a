#include "sarframe/weights_frame.hpp"

#include "complex_math.hpp"
#include "sarframe/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sarframe {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

void require_increasing(std::span<const double> freqs, const char* who) {
    for (std::size_t i = 1; i < freqs.size(); ++i) {
        if (!(freqs[i] > freqs[i - 1])) {
            throw ValidationError(std::string(who) + ": frequencies must be strictly increasing");
        }
    }
}

// Number of samples k/M that fall left of the window center.
long left_count(double center, std::size_t m_count) {
    const double c = std::ceil(center * static_cast<double>(m_count));
    return static_cast<long>(std::clamp(c, 0.0, static_cast<double>(m_count)));
}

// Integral over [0, 1] of exp(-beta x) * w(x)^sign with w = exp(-a|x - c|) split at c.
// sign = +1 gives the window, -1 its reciprocal.
Complex interval_integral(const WindowSpec& win, Complex beta, double sign) {
    const double a = win.decay * sign;
    const double c = win.center;
    const double cc = std::clamp(c, 0.0, 1.0);
    // left of c: w^sign = exp(-a c) exp(a x); right: exp(a c) exp(-a x)
    return std::exp(-a * c) * detail::exp_integral(a - beta, 0.0, cc) +
           std::exp(a * c) * detail::exp_integral(-a - beta, cc, 1.0);
}

// (1/M) sum_k exp(-beta x_k) * w(x_k)^sign over x_k = k/M.
Complex grid_average(const WindowSpec& win, Complex beta, double sign, std::size_t m_count) {
    const double a = win.decay * sign;
    const double c = win.center;
    const double inv_m = 1.0 / static_cast<double>(m_count);
    const long kc = left_count(c, m_count);
    const long mm = static_cast<long>(m_count);
    const Complex left = std::exp(-a * c) * detail::geometric_sum((a - beta) * inv_m, 0, kc);
    const Complex right = std::exp(a * c) * detail::geometric_sum((-a - beta) * inv_m, kc, mm);
    return (left + right) * inv_m;
}

}  // namespace

void FrameOptions::validate() const {
    window.validate();
    if (!(q > 0.0) || std::isnan(q)) throw ValidationError("FrameOptions: q must be > 0");
}

std::vector<double> trapezoidal_weights(std::span<const double> freqs) {
    if (freqs.size() < 2) throw ValidationError("trapezoidal_weights: need at least 2 nodes");
    require_increasing(freqs, "trapezoidal_weights");
    const std::size_t n = freqs.size();
    std::vector<double> w(n);
    w[0] = 0.5 * (freqs[1] - freqs[0]);
    for (std::size_t i = 1; i + 1 < n; ++i) w[i] = 0.5 * (freqs[i + 1] - freqs[i - 1]);
    w[n - 1] = 0.5 * (freqs[n - 1] - freqs[n - 2]);
    return w;
}

Complex window_kernel(const WindowSpec& window, FrameRule rule, double delta, std::size_t m_count) {
    const Complex beta = kTwoPi * delta * kI;
    switch (rule) {
        case FrameRule::grid: return grid_average(window, beta, 1.0, m_count);
        case FrameRule::unit_interval: return interval_integral(window, beta, 1.0);
        case FrameRule::whole_line: return window_hat_eval(window, delta);
    }
    return {};
}

Complex psi_kernel(const WindowSpec& window, FrameRule rule, double delta, std::size_t m_count) {
    // exp(+2 pi i delta x) / w(x)
    const Complex beta = -kTwoPi * delta * kI;
    if (rule == FrameRule::grid) return grid_average(window, beta, -1.0, m_count);
    return interval_integral(window, beta, -1.0);
}

WindowBand::WindowBand(std::span<const double> freqs, const UniformGrid1D& grid, const FrameOptions& opts)
    : cols_(freqs.size()), first_(grid.count, 0), entries_(grid.count) {
    if (freqs.empty()) throw ValidationError("WindowBand: empty frequency list");
    grid.validate();
    opts.validate();
    require_increasing(freqs, "WindowBand");
    const double inv_step = 1.0 / grid.step;
    std::size_t lo = 0;
    for (std::size_t m = 0; m < grid.count; ++m) {
        const double ell = grid.coordinate(m);
        while (lo < freqs.size() && (ell - freqs[lo]) * inv_step >= opts.q) ++lo;
        first_[m] = lo;
        auto& row = entries_[m];
        for (std::size_t p = lo; p < freqs.size(); ++p) {
            const double delta = (ell - freqs[p]) * inv_step;
            if (delta <= -opts.q) break;
            row.push_back(window_kernel(opts.window, opts.rule, delta, grid.count));
        }
    }
}

Eigen::VectorXcd WindowBand::apply(std::span<const Complex> values, std::span<const double> weights) const {
    if (values.size() != cols_ || (!weights.empty() && weights.size() != cols_)) {
        throw ValidationError("WindowBand::apply: length mismatch");
    }
    Eigen::VectorXcd out(static_cast<Eigen::Index>(rows()));
    for (std::size_t m = 0; m < rows(); ++m) {
        Complex acc{};
        const auto& row = entries_[m];
        const std::size_t p0 = first_[m];
        if (weights.empty()) {
            for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * values[p0 + j];
        } else {
            for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * (weights[p0 + j] * values[p0 + j]);
        }
        out[static_cast<Eigen::Index>(m)] = acc;
    }
    return out;
}

Eigen::MatrixXcd WindowBand::to_dense() const {
    Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows()), static_cast<Eigen::Index>(cols_));
    for (std::size_t m = 0; m < rows(); ++m) {
        for (std::size_t j = 0; j < entries_[m].size(); ++j) {
            w(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(first_[m] + j)) = entries_[m][j];
        }
    }
    return w;
}

FrameMatrices build_frame_matrices(std::span<const double> freqs, const UniformGrid1D& grid,
                                   const FrameOptions& opts) {
    if (freqs.empty()) throw ValidationError("build_frame_matrices: empty frequency list");
    FrameMatrices f;
    f.W = WindowBand(freqs, grid, opts).to_dense();
    const auto P = static_cast<Eigen::Index>(freqs.size());
    const auto M = static_cast<Eigen::Index>(grid.count);
    const double inv_step = 1.0 / grid.step;
    f.Psi.resize(P, M);
    for (Eigen::Index m = 0; m < M; ++m) {
        const double ell = grid.coordinate(static_cast<std::size_t>(m));
        for (Eigen::Index p = 0; p < P; ++p) {
            f.Psi(p, m) = psi_kernel(opts.window, opts.rule, (ell - freqs[static_cast<std::size_t>(p)]) * inv_step,
                                     grid.count);
        }
    }
    f.A = f.W * f.Psi;
    return f;
}

Eigen::VectorXcd frame_product_diagonal(std::span<const double> freqs, const UniformGrid1D& grid,
                                        const FrameOptions& opts) {
    return frame_product_diagonal(WindowBand(freqs, grid, opts), freqs, grid, opts);
}

Eigen::VectorXcd frame_product_diagonal(const WindowBand& band, std::span<const double> freqs,
                                        const UniformGrid1D& grid, const FrameOptions& opts) {
    if (band.rows() != grid.count || band.cols() != freqs.size()) {
        throw ValidationError("frame_product_diagonal: band does not match grid/frequencies");
    }
    const double inv_step = 1.0 / grid.step;
    Eigen::VectorXcd d(static_cast<Eigen::Index>(grid.count));
    for (std::size_t m = 0; m < grid.count; ++m) {
        const double ell = grid.coordinate(m);
        const auto row = band.row(m);
        Complex acc{};
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double delta = (ell - freqs[band.first(m) + j]) * inv_step;
            acc += row[j] * psi_kernel(opts.window, opts.rule, delta, grid.count);
        }
        d[static_cast<Eigen::Index>(m)] = acc;
    }
    return d;
}

const char* to_string(CorrectionKind kind) {
    switch (kind) {
        case CorrectionKind::diagonal_quadrature: return "diagonal-quadrature";
        case CorrectionKind::full_pinv: return "full-pinv";
        case CorrectionKind::banded: return "banded";
        case CorrectionKind::thresholded: return "thresholded";
        case CorrectionKind::thresholded_fast: return "thresholded-fast";
    }
    return "?";
}

CorrectionMatrix CorrectionMatrix::from_dense(CorrectionKind kind, Eigen::MatrixXcd d, double tau,
                                              std::size_t band_r) {
    if (d.rows() != d.cols()) throw ValidationError("CorrectionMatrix: D must be square");
    CorrectionMatrix c;
    c.kind_ = kind;
    c.dim_ = static_cast<std::size_t>(d.rows());
    c.tau_ = tau;
    c.band_r_ = band_r;
    c.nnz_ = static_cast<std::size_t>((d.array() != Complex{}).count());
    c.dense_ = std::move(d);
    return c;
}

CorrectionMatrix CorrectionMatrix::from_diagonal(CorrectionKind kind, Eigen::VectorXcd diag, double tau) {
    CorrectionMatrix c;
    c.kind_ = kind;
    c.dim_ = static_cast<std::size_t>(diag.size());
    c.tau_ = tau;
    c.diagonal_only_ = true;
    c.nnz_ = static_cast<std::size_t>((diag.array() != Complex{}).count());
    c.diag_ = std::move(diag);
    return c;
}

Complex CorrectionMatrix::entry(std::size_t n, std::size_t m) const {
    if (diagonal_only_) return n == m ? diag_[static_cast<Eigen::Index>(n)] : Complex{};
    return dense_(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
}

Eigen::MatrixXcd CorrectionMatrix::to_dense() const {
    if (!diagonal_only_) return dense_;
    return diag_.asDiagonal();
}

Eigen::VectorXcd CorrectionMatrix::apply(const Eigen::VectorXcd& v) const {
    if (static_cast<std::size_t>(v.size()) != dim_) throw ValidationError("CorrectionMatrix::apply: size mismatch");
    if (diagonal_only_) return diag_.cwiseProduct(v);
    if (kind_ == CorrectionKind::banded) {
        const auto n = static_cast<Eigen::Index>(dim_);
        const auto r = static_cast<Eigen::Index>(std::min(band_r_, dim_));
        Eigen::VectorXcd out(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::Index j0 = std::max<Eigen::Index>(0, i - r);
            const Eigen::Index j1 = std::min<Eigen::Index>(n - 1, i + r);
            Complex acc{};
            for (Eigen::Index j = j0; j <= j1; ++j) acc += dense_(i, j) * v[j];
            out[i] = acc;
        }
        return out;
    }
    return dense_ * v;
}

Eigen::MatrixXcd pseudo_inverse(const Eigen::MatrixXcd& a, double rtol) {
    if (a.size() == 0) return Eigen::MatrixXcd(a.cols(), a.rows());
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const double cutoff = rtol * (s.size() > 0 ? s[0] : 0.0);
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s[i] > cutoff && s[i] > 0.0) inv[i] = 1.0 / s[i];
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

CorrectionMatrix correction_quadrature(std::span<const double> weights) {
    Eigen::VectorXcd d(static_cast<Eigen::Index>(weights.size()));
    for (std::size_t i = 0; i < weights.size(); ++i) d[static_cast<Eigen::Index>(i)] = weights[i];
    return CorrectionMatrix::from_diagonal(CorrectionKind::diagonal_quadrature, std::move(d));
}

CorrectionMatrix correction_full_pinv(const FrameMatrices& frames) { return correction_full_pinv(frames.A); }

CorrectionMatrix correction_full_pinv(const Eigen::MatrixXcd& a) {
    if (a.rows() != a.cols()) throw ValidationError("correction_full_pinv: A must be square");
    return CorrectionMatrix::from_dense(CorrectionKind::full_pinv, pseudo_inverse(a));
}

CorrectionMatrix band_restrict(const CorrectionMatrix& d_full, std::size_t r) {
    const auto n = static_cast<Eigen::Index>(d_full.dim());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (static_cast<std::size_t>(std::abs(i - j)) <= r) {
                out(i, j) = d_full.entry(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            }
        }
    }
    return CorrectionMatrix::from_dense(CorrectionKind::banded, std::move(out), 0.0, r);
}

CorrectionMatrix threshold_restrict(const CorrectionMatrix& d_full, double tau) {
    if (!(tau >= 0.0)) throw ValidationError("threshold_restrict: tau must be >= 0");
    if (d_full.is_diagonal()) {
        Eigen::VectorXcd d = d_full.diagonal();
        for (auto& z : d) {
            if (!(std::abs(z) >= tau)) z = Complex{};
        }
        return CorrectionMatrix::from_diagonal(CorrectionKind::thresholded, std::move(d), tau);
    }
    Eigen::MatrixXcd d = d_full.dense();
    for (auto& z : d.reshaped()) {
        if (!(std::abs(z) >= tau)) z = Complex{};
    }
    return CorrectionMatrix::from_dense(CorrectionKind::thresholded, std::move(d), tau);
}

CorrectionMatrix correction_banded(const Eigen::MatrixXcd& a, std::size_t r) {
    if (a.rows() != a.cols()) throw ValidationError("correction_banded: A must be square");
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    Eigen::MatrixXcd inv;
    if (a.size() > 0 && lu.rcond() > kPinvRtol) {
        inv = lu.inverse();
    } else {
        inv = pseudo_inverse(a);
    }
    return band_restrict(CorrectionMatrix::from_dense(CorrectionKind::full_pinv, std::move(inv)), r);
}

CorrectionMatrix correction_thresholded_fast(const FrameMatrices& frames, double tau) {
    const auto m = frames.W.rows();
    if (frames.Psi.cols() != m || frames.Psi.rows() != frames.W.cols()) {
        throw ValidationError("correction_thresholded_fast: W/Psi shapes do not conform");
    }
    Eigen::VectorXcd d(m);
    for (Eigen::Index i = 0; i < m; ++i) d[i] = frames.W.row(i).transpose().cwiseProduct(frames.Psi.col(i)).sum();
    return correction_thresholded_fast(d, tau);
}

CorrectionMatrix correction_thresholded_fast(const Eigen::VectorXcd& a_diagonal, double tau) {
    if (!(tau >= 0.0)) throw ValidationError("correction_thresholded_fast: tau must be >= 0");
    Eigen::VectorXcd d(a_diagonal.size());
    for (Eigen::Index i = 0; i < a_diagonal.size(); ++i) {
        const Complex x = a_diagonal[i];
        Complex inv{};
        if (x != Complex{}) inv = 1.0 / x;
        d[i] = (std::isfinite(std::abs(inv)) && std::abs(inv) >= tau) ? inv : Complex{};
    }
    return CorrectionMatrix::from_diagonal(CorrectionKind::thresholded_fast, std::move(d), tau);
}

BoundResiduals bound_residuals(const FrameMatrices& frames, const CorrectionMatrix& d) {
    return bound_residuals(frames.A, d);
}

BoundResiduals bound_residuals(const Eigen::MatrixXcd& a, const CorrectionMatrix& d) {
    if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != d.dim()) {
        throw ValidationError("bound_residuals: shape mismatch");
    }
    const Eigen::MatrixXcd dm = d.to_dense();
    const auto n = a.rows();
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(n, n);
    BoundResiduals r;
    r.residual_right = (a * dm - eye).squaredNorm();
    r.residual_left = (dm * a - eye).squaredNorm();
    r.lhs = r.residual_right;
    r.rhs = dm.squaredNorm() * (a - pseudo_inverse(dm)).squaredNorm();
    if (n > 0) {
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(dm);
        const auto& s = svd.singularValues();
        r.d_invertible = s[n - 1] > kPinvRtol * s[0];
    }
    return r;
}

}  // namespace sarframe
