#include "sarframe/reconstructors.hpp"

#include "sarframe/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace sarframe {

namespace {

std::vector<Complex> to_vector(const Eigen::VectorXcd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXcd to_eigen(std::span<const Complex> v) {
    return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void require_slice(std::span<const double> freqs, std::span<const Complex> values, const char* who) {
    if (freqs.size() != values.size()) throw ValidationError(std::string(who) + ": freqs/values length mismatch");
    if (freqs.size() < 2) throw ValidationError(std::string(who) + ": need at least 2 samples");
    for (std::size_t i = 1; i < freqs.size(); ++i) {
        if (!(freqs[i] > freqs[i - 1])) {
            throw ValidationError(std::string(who) + ": frequencies must be strictly increasing");
        }
    }
}

bool is_windowed(Method m) { return m != Method::stolt; }

}  // namespace

void PhaseHistory::validate() const {
    if (n_azimuth == 0 || n_range == 0) throw ValidationError("PhaseHistory: empty dimensions");
    if (azimuth_freqs.size() != n_azimuth) throw ValidationError("PhaseHistory: azimuth_freqs length mismatch");
    if (range_freqs.size() != n_azimuth * n_range) throw ValidationError("PhaseHistory: range_freqs length mismatch");
    if (values.size() != n_azimuth * n_range) throw ValidationError("PhaseHistory: values length mismatch");
    if (n_azimuth >= 2) {
        // Least-squares affine fit of frequency against index.
        const double n = static_cast<double>(n_azimuth);
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < n_azimuth; ++i) {
            const double x = static_cast<double>(i);
            sx += x;
            sy += azimuth_freqs[i];
            sxx += x * x;
            sxy += x * azimuth_freqs[i];
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        const double icept = (sy - slope * sx) / n;
        if (!(std::abs(slope) > 0.0) || !std::isfinite(slope)) {
            throw ValidationError("PhaseHistory: azimuth frequencies are not uniformly spaced");
        }
        for (std::size_t i = 0; i < n_azimuth; ++i) {
            const double dev = std::abs(azimuth_freqs[i] - (icept + slope * static_cast<double>(i)));
            if (dev > 1e-9 * std::abs(slope)) {
                throw ValidationError("PhaseHistory: azimuth frequencies are not uniformly spaced");
            }
        }
    }
    for (std::size_t s = 0; s < n_azimuth; ++s) {
        const auto row = range_slice(s);
        for (std::size_t p = 1; p < row.size(); ++p) {
            if (!(row[p] > row[p - 1])) {
                throw ValidationError("PhaseHistory: range frequencies of slice " + std::to_string(s) +
                                      " are not strictly increasing");
            }
        }
    }
    for (const auto& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw ValidationError("PhaseHistory: non-finite sample value");
        }
    }
}

const char* to_string(Method m) {
    switch (m) {
        case Method::stolt: return "stolt";
        case Method::nufft: return "nufft";
        case Method::fa: return "fa";
        case Method::ffr: return "ffr";
        case Method::tffr: return "tffr";
        case Method::tffr_fast: return "tffr-fast";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view name) {
    for (Method m : all_methods()) {
        if (name == to_string(m)) return m;
    }
    return std::nullopt;
}

std::vector<Method> all_methods() {
    return {Method::stolt, Method::nufft, Method::fa, Method::ffr, Method::tffr, Method::tffr_fast};
}

UniformGrid1D default_grid(const PhaseHistory& ph, std::size_t m_count) {
    ph.validate();
    if (ph.n_range < 2) throw ValidationError("default_grid: need at least 2 range samples per slice");
    double start = -std::numeric_limits<double>::infinity();
    double end = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < ph.n_azimuth; ++n) {
        const auto row = ph.range_slice(n);
        start = std::max(start, row.front());
        end = std::max(end, row.back());
    }
    UniformGrid1D g;
    g.count = m_count == 0 ? ph.n_range : m_count;
    g.start = start;
    g.step = (end - start) / static_cast<double>(ph.n_range - 1);
    g.validate();
    return g;
}

std::vector<Complex> stolt_slice(std::span<const double> freqs, std::span<const Complex> values,
                                 const UniformGrid1D& grid) {
    require_slice(freqs, values, "stolt_slice");
    grid.validate();
    std::vector<Complex> out(grid.count);
    std::size_t seg = 0;
    const double lo = freqs.front();
    const double hi = freqs.back();
    for (std::size_t m = 0; m < grid.count; ++m) {
        const double ell = grid.coordinate(m);
        if (ell < lo || ell > hi) continue;
        while (seg + 2 < freqs.size() && freqs[seg + 1] < ell) ++seg;
        const double t = (ell - freqs[seg]) / (freqs[seg + 1] - freqs[seg]);
        const Complex& a = values[seg];
        const Complex& b = values[seg + 1];
        out[m] = {a.real() + t * (b.real() - a.real()), a.imag() + t * (b.imag() - a.imag())};
    }
    return out;
}

std::vector<Complex> nufft_slice(std::span<const double> freqs, std::span<const Complex> values,
                                 const UniformGrid1D& grid, const FrameOptions& opts, Quadrature quadrature) {
    require_slice(freqs, values, "nufft_slice");
    const WindowBand band(freqs, grid, opts);
    std::vector<double> alpha;
    if (quadrature == Quadrature::trapezoidal) {
        alpha = trapezoidal_weights(freqs);
        for (auto& a : alpha) a /= grid.step;
    } else {
        alpha.assign(freqs.size(), 1.0);
    }
    return to_vector(band.apply(values, alpha));
}

FrameSliceResult frame_slice(std::span<const double> freqs, std::span<const Complex> values,
                             const UniformGrid1D& grid, const FrameOptions& opts, CorrectionKind kind, double tau,
                             std::size_t band_r) {
    require_slice(freqs, values, "frame_slice");
    FrameSliceResult res;
    if (kind == CorrectionKind::thresholded_fast) {
        const WindowBand band(freqs, grid, opts);
        const CorrectionMatrix d =
            correction_thresholded_fast(frame_product_diagonal(band, freqs, grid, opts), tau);
        res.spectrum = to_vector(d.apply(band.apply(values)));
        res.d_nnz = d.nnz();
        return res;
    }
    const FrameMatrices frames = build_frame_matrices(freqs, grid, opts);
    const Eigen::VectorXcd wf = frames.W * to_eigen(values);
    auto finish = [&](const CorrectionMatrix& d) {
        res.spectrum = to_vector(d.apply(wf));
        res.d_nnz = d.nnz();
    };
    switch (kind) {
        case CorrectionKind::full_pinv: finish(correction_full_pinv(frames)); break;
        case CorrectionKind::thresholded: finish(threshold_restrict(correction_full_pinv(frames), tau)); break;
        case CorrectionKind::banded: finish(correction_banded(frames.A, band_r)); break;
        default: throw ValidationError(std::string("frame_slice: unsupported correction kind ") + to_string(kind));
    }
    return res;
}

SarImage reconstruct_image(const PhaseHistory& ph, const ReconstructionConfig& cfg) {
    ph.validate();
    if (ph.n_range < 2) throw ValidationError("reconstruct_image: slices need at least 2 samples");
    cfg.grid.validate();
    const FrameOptions opts = cfg.frame_options();
    opts.validate();

    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t N = ph.n_azimuth;
    const std::size_t M = cfg.grid.count;
    ComplexGrid spectrum(N, M);
    std::size_t nnz = 0;
    for (std::size_t n = 0; n < N; ++n) {
        const auto freqs = ph.range_slice(n);
        const auto vals = ph.value_slice(n);
        std::vector<Complex> row;
        switch (cfg.method) {
            case Method::stolt: row = stolt_slice(freqs, vals, cfg.grid); break;
            case Method::nufft: row = nufft_slice(freqs, vals, cfg.grid, opts, cfg.quadrature); break;
            default: {
                CorrectionKind kind = CorrectionKind::full_pinv;
                if (cfg.method == Method::ffr) kind = CorrectionKind::banded;
                if (cfg.method == Method::tffr) kind = CorrectionKind::thresholded;
                if (cfg.method == Method::tffr_fast) kind = CorrectionKind::thresholded_fast;
                auto r = frame_slice(freqs, vals, cfg.grid, opts, kind, cfg.tau, cfg.band_r);
                row = std::move(r.spectrum);
                nnz += r.d_nnz;
            }
        }
        std::copy(row.begin(), row.end(), spectrum.row(n).begin());
    }
    ComplexGrid image = ifft2_uniform(spectrum);
    if (is_windowed(cfg.method)) {
        std::vector<double> inv_w(M);
        for (std::size_t k = 0; k < M; ++k) inv_w[k] = 1.0 / window_eval(cfg.window, spatial_coordinate(k, M));
        for (std::size_t n = 0; n < N; ++n) {
            auto row = image.row(n);
            for (std::size_t k = 0; k < M; ++k) row[k] *= inv_w[k];
        }
    }
    const auto t1 = std::chrono::steady_clock::now();

    SarImage out;
    out.grid = std::move(image);
    out.method = cfg.method;
    out.timing_seconds = std::chrono::duration<double>(t1 - t0).count();
    out.d_nnz = nnz;
    return out;
}

}  // namespace sarframe
