#pragma once

#include "sarframe/metrics.hpp"
#include "sarframe/reconstructors.hpp"
#include "sarframe/signal_core.hpp"

#include <cstdint>
#include <vector>

namespace sarframe {

struct Scatterer {
    double x = 0.0;  // azimuth position in [0, 1)
    double y = 0.0;  // range position in [0, 1)
    Complex amplitude{1.0, 0.0};
};

struct Scene {
    std::vector<Scatterer> scatterers;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Stolt-curved lattice: azimuth frequencies n - N/2, range frequencies
/// sqrt(k_p^2 - curvature * lambda1_n^2) over uniformly spaced k_p in [k_min, k_max].
struct SamplingPattern {
    std::size_t n_azimuth = 64;
    std::size_t n_range = 64;
    double k_min = 128.0;
    double k_max = 191.0;
    double curvature = 0.1;

    void validate() const;
    std::vector<double> azimuth_freqs() const;
    /// The uncurved wavenumbers k_p as a grid (start k_min, step (k_max - k_min)/(P - 1)).
    UniformGrid1D wavenumber_grid() const;
};

/// sum_t amplitude_t exp(-2 pi i (lambda1 x_t + lambda2 y_t)) plus circular
/// complex Gaussian noise of standard deviation noise_sigma.
PhaseHistory synthesize_phase_history(const Scene& scene, const SamplingPattern& pattern);

/// Per slice, keep percent/10 of every contiguous stratum of 10 range samples
/// (ceil(len * percent / 100) for a shorter trailing stratum), drawn without
/// replacement from a seeded generator. percent = 100 returns the input.
PhaseHistory stratified_subsample(const PhaseHistory& ph, int percent, std::uint64_t seed);

/// Retained-sample count per full or trailing stratum for a slice of length n_range.
std::size_t stratified_count(std::size_t n_range, int percent);

/// Target = union of (2 halo + 1)^2 pixel squares around each scatterer's
/// nearest pixel (wrapping at the edges). Throws ValidationError when the
/// squares cover every pixel and no background is left.
RegionMask ground_truth_mask(const Scene& scene, std::size_t rows, std::size_t cols, std::size_t halo);

/// Three-scatterer scene used by the default scenario and the benchmarks.
Scene default_scene();

/// Noiseless image of the scene sampled exactly on (azimuth_freqs x grid), inverse transformed.
ComplexGrid reference_image(const Scene& scene, std::span<const double> azimuth_freqs, const UniformGrid1D& grid);

}  // namespace sarframe
