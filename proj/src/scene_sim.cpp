#include "sarframe/scene_sim.hpp"

#include "sarframe/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace sarframe {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Uniform in (0, 1] from the raw 64-bit engine output; the engine sequence is
// fixed by the standard, so draws are reproducible across standard libraries.
double unit_open(std::mt19937_64& rng) { return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53; }

Complex gaussian_pair(std::mt19937_64& rng, double sigma) {
    const double r = std::sqrt(-2.0 * std::log(unit_open(rng)));
    const double t = kTwoPi * unit_open(rng);
    const double s = sigma / std::numbers::sqrt2;
    return {s * r * std::cos(t), s * r * std::sin(t)};
}

bool allowed_percent(int percent) { return percent >= 30 && percent <= 100 && percent % 10 == 0; }

std::size_t wrap(long v, std::size_t n) {
    const long m = static_cast<long>(n);
    return static_cast<std::size_t>(((v % m) + m) % m);
}

}  // namespace

void Scene::validate() const {
    if (scatterers.empty()) throw ValidationError("Scene: at least one scatterer required");
    for (const auto& s : scatterers) {
        if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.amplitude.real()) ||
            !std::isfinite(s.amplitude.imag())) {
            throw ValidationError("Scene: scatterer fields must be finite");
        }
    }
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) throw ValidationError("Scene: noise_sigma must be >= 0");
}

void SamplingPattern::validate() const {
    if (n_azimuth == 0) throw ValidationError("SamplingPattern: n_azimuth must be >= 1");
    if (n_range < 2) throw ValidationError("SamplingPattern: n_range must be >= 2");
    if (!(k_max > k_min) || !std::isfinite(k_min) || !std::isfinite(k_max)) {
        throw ValidationError("SamplingPattern: need finite k_min < k_max");
    }
    if (!(curvature >= 0.0)) throw ValidationError("SamplingPattern: curvature must be >= 0");
    const auto lam = azimuth_freqs();
    double max_sq = 0.0;
    for (double l : lam) max_sq = std::max(max_sq, l * l);
    if (k_min * k_min < curvature * max_sq) {
        throw ValidationError("SamplingPattern: k_min^2 < curvature * max(lambda1^2), range frequencies would be complex");
    }
}

std::vector<double> SamplingPattern::azimuth_freqs() const {
    std::vector<double> out(n_azimuth);
    const double half = static_cast<double>(n_azimuth / 2);
    for (std::size_t n = 0; n < n_azimuth; ++n) out[n] = static_cast<double>(n) - half;
    return out;
}

UniformGrid1D SamplingPattern::wavenumber_grid() const {
    return UniformGrid1D{n_range, k_min, (k_max - k_min) / static_cast<double>(n_range - 1)};
}

Scene default_scene() {
    Scene s;
    s.scatterers = {{0.3123, 0.5511, {1.0, 0.0}},
                    {0.6520, 0.2734, std::polar(0.8, 0.7)},
                    {0.1875, 0.8047, {0.0, 0.6}}};
    s.noise_sigma = 0.02;
    s.seed = 7;
    return s;
}

PhaseHistory synthesize_phase_history(const Scene& scene, const SamplingPattern& pattern) {
    scene.validate();
    pattern.validate();
    PhaseHistory ph;
    ph.n_azimuth = pattern.n_azimuth;
    ph.n_range = pattern.n_range;
    ph.azimuth_freqs = pattern.azimuth_freqs();
    ph.range_freqs.resize(ph.n_azimuth * ph.n_range);
    ph.values.resize(ph.n_azimuth * ph.n_range);
    const UniformGrid1D k = pattern.wavenumber_grid();
    std::mt19937_64 rng(scene.seed);
    for (std::size_t n = 0; n < ph.n_azimuth; ++n) {
        const double l1 = ph.azimuth_freqs[n];
        for (std::size_t p = 0; p < ph.n_range; ++p) {
            const double kp = k.coordinate(p);
            const double l2 = std::sqrt(kp * kp - pattern.curvature * l1 * l1);
            Complex v{};
            for (const auto& s : scene.scatterers) v += s.amplitude * std::polar(1.0, -kTwoPi * (l1 * s.x + l2 * s.y));
            if (scene.noise_sigma > 0.0) v += gaussian_pair(rng, scene.noise_sigma);
            ph.range_freqs[n * ph.n_range + p] = l2;
            ph.values[n * ph.n_range + p] = v;
        }
    }
    return ph;
}

std::size_t stratified_count(std::size_t n_range, int percent) {
    if (!allowed_percent(percent)) throw ValidationError("stratified_subsample: percent must be one of 30, 40, ..., 100");
    const std::size_t per10 = static_cast<std::size_t>(percent / 10);
    const std::size_t rem = n_range % 10;
    return (n_range / 10) * per10 + (rem * static_cast<std::size_t>(percent) + 99) / 100;
}

PhaseHistory stratified_subsample(const PhaseHistory& ph, int percent, std::uint64_t seed) {
    if (!allowed_percent(percent)) throw ValidationError("stratified_subsample: percent must be one of 30, 40, ..., 100");
    ph.validate();
    if (percent == 100) return ph;
    if (ph.n_range < 10) throw ValidationError("stratified_subsample: slice too short to stratify (< 10 samples)");

    const std::size_t kept = stratified_count(ph.n_range, percent);
    PhaseHistory out;
    out.n_azimuth = ph.n_azimuth;
    out.n_range = kept;
    out.azimuth_freqs = ph.azimuth_freqs;
    out.range_freqs.reserve(ph.n_azimuth * kept);
    out.values.reserve(ph.n_azimuth * kept);

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> idx;
    std::vector<std::size_t> chosen;
    for (std::size_t n = 0; n < ph.n_azimuth; ++n) {
        chosen.clear();
        for (std::size_t s0 = 0; s0 < ph.n_range; s0 += 10) {
            const std::size_t len = std::min<std::size_t>(10, ph.n_range - s0);
            const std::size_t quota = len == 10 ? static_cast<std::size_t>(percent / 10)
                                                : (len * static_cast<std::size_t>(percent) + 99) / 100;
            idx.resize(len);
            for (std::size_t i = 0; i < len; ++i) idx[i] = s0 + i;
            // partial Fisher-Yates
            for (std::size_t i = 0; i < quota; ++i) {
                const std::size_t j = i + static_cast<std::size_t>(rng() % (len - i));
                std::swap(idx[i], idx[j]);
            }
            chosen.insert(chosen.end(), idx.begin(), idx.begin() + static_cast<long>(quota));
        }
        std::sort(chosen.begin(), chosen.end());
        const auto freqs = ph.range_slice(n);
        const auto vals = ph.value_slice(n);
        for (auto i : chosen) {
            out.range_freqs.push_back(freqs[i]);
            out.values.push_back(vals[i]);
        }
    }
    return out;
}

RegionMask ground_truth_mask(const Scene& scene, std::size_t rows, std::size_t cols, std::size_t halo) {
    scene.validate();
    if (rows == 0 || cols == 0) throw ValidationError("ground_truth_mask: empty image");
    std::vector<bool> target(rows * cols, false);
    const long h = static_cast<long>(halo);
    for (const auto& s : scene.scatterers) {
        const long r0 = std::lround(s.x * static_cast<double>(rows));
        const long c0 = std::lround(s.y * static_cast<double>(cols));
        for (long dr = -h; dr <= h; ++dr) {
            for (long dc = -h; dc <= h; ++dc) target[wrap(r0 + dr, rows) * cols + wrap(c0 + dc, cols)] = true;
        }
    }
    return RegionMask(rows, cols, target);
}

ComplexGrid reference_image(const Scene& scene, std::span<const double> azimuth_freqs, const UniformGrid1D& grid) {
    scene.validate();
    grid.validate();
    if (azimuth_freqs.empty()) throw ValidationError("reference_image: no azimuth frequencies");
    ComplexGrid spec(azimuth_freqs.size(), grid.count);
    for (std::size_t n = 0; n < azimuth_freqs.size(); ++n) {
        for (std::size_t m = 0; m < grid.count; ++m) {
            Complex v{};
            for (const auto& s : scene.scatterers) {
                v += s.amplitude * std::polar(1.0, -kTwoPi * (azimuth_freqs[n] * s.x + grid.coordinate(m) * s.y));
            }
            spec(n, m) = v;
        }
    }
    return ifft2_uniform(spec);
}

}  // namespace sarframe
