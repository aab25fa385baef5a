#pragma once

#include "sarframe/signal_core.hpp"
#include "sarframe/weights_frame.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sarframe {

/// Non-uniform 2D Fourier data: uniform azimuth frequencies, and per
/// azimuth slice a strictly increasing set of range frequencies.
struct PhaseHistory {
    std::size_t n_azimuth = 0;
    std::size_t n_range = 0;
    std::vector<double> azimuth_freqs;  // n_azimuth
    std::vector<double> range_freqs;    // n_azimuth x n_range, row-major
    std::vector<Complex> values;        // n_azimuth x n_range, row-major

    std::span<const double> range_slice(std::size_t n) const {
        return std::span<const double>(range_freqs).subspan(n * n_range, n_range);
    }
    std::span<const Complex> value_slice(std::size_t n) const {
        return std::span<const Complex>(values).subspan(n * n_range, n_range);
    }

    /// Throws ValidationError when an invariant does not hold.
    void validate() const;

    friend bool operator==(const PhaseHistory&, const PhaseHistory&) = default;
};

enum class Method { stolt, nufft, fa, ffr, tffr, tffr_fast };

const char* to_string(Method m);
std::optional<Method> parse_method(std::string_view name);
/// Every method, in the order the toolkit reports them.
std::vector<Method> all_methods();

enum class Quadrature {
    trapezoidal,  // trapezoidal_weights of the slice frequencies
    uniform,      // every weight equal to one grid step (on-grid surrogate)
};

struct ReconstructionConfig {
    Method method = Method::tffr;
    UniformGrid1D grid{};
    WindowSpec window{};
    double tau = 0.97;
    std::size_t band_r = 2;
    double q = 6.0;  // grid steps
    FrameRule rule = FrameRule::grid;
    Quadrature quadrature = Quadrature::trapezoidal;

    FrameOptions frame_options() const { return FrameOptions{window, q, rule}; }
};

/// Default target grid for a phase history: M points starting at the largest
/// per-slice minimum range frequency, spaced by the data's mean range step.
/// m_count = 0 means M = n_range.
UniformGrid1D default_grid(const PhaseHistory& ph, std::size_t m_count = 0);

struct SarImage {
    ComplexGrid grid;
    Method method = Method::tffr;
    double timing_seconds = 0.0;
    std::size_t d_nnz = 0;
};

/// Linear interpolation of real and imaginary parts onto the grid; grid
/// points outside the sample hull map to 0.
std::vector<Complex> stolt_slice(std::span<const double> range_freqs, std::span<const Complex> values,
                                 const UniformGrid1D& grid);

/// W * diag(alpha) * values with trapezoidal (or uniform) alpha in grid-step units.
std::vector<Complex> nufft_slice(std::span<const double> range_freqs, std::span<const Complex> values,
                                 const UniformGrid1D& grid, const FrameOptions& opts,
                                 Quadrature quadrature = Quadrature::trapezoidal);

struct FrameSliceResult {
    std::vector<Complex> spectrum;
    std::size_t d_nnz = 0;
};

/// D * (W * values) with D picked by kind: full_pinv (FA), banded (FFR),
/// thresholded (tFFR), thresholded_fast (diagonal-only tFFR).
FrameSliceResult frame_slice(std::span<const double> range_freqs, std::span<const Complex> values,
                             const UniformGrid1D& grid, const FrameOptions& opts, CorrectionKind kind,
                             double tau, std::size_t band_r);

/// Slice-wise regridding onto cfg.grid, 2D inverse FFT, then division of every
/// range column k by w(k/M) for the windowed methods.
SarImage reconstruct_image(const PhaseHistory& ph, const ReconstructionConfig& cfg);

}  // namespace sarframe
