#include "sarframe/signal_core.hpp"

#include "sarframe/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>

namespace sarframe {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwBuffer {
    explicit FftwBuffer(std::size_t n) : ptr(fftw_alloc_complex(n)) {
        if (ptr == nullptr) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(ptr); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    fftw_complex* ptr;
};

ComplexGrid transform2(const ComplexGrid& in, int sign) {
    if (in.rows() == 0 || in.cols() == 0) throw ValidationError("2D transform needs rows, cols >= 1");
    const std::size_t n = in.size();
    FftwBuffer buf(n);
    static_assert(sizeof(Complex) == sizeof(fftw_complex));
    std::memcpy(buf.ptr, in.data().data(), n * sizeof(Complex));
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_2d(static_cast<int>(in.rows()), static_cast<int>(in.cols()), buf.ptr, buf.ptr,
                                sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    ComplexGrid out(in.rows(), in.cols(), in.axis_labels());
    const auto* res = reinterpret_cast<const Complex*>(buf.ptr);  // layout-compatible by [complex.numbers]
    std::copy(res, res + n, out.data().begin());
    return out;
}

}  // namespace

ComplexGrid::ComplexGrid(std::size_t rows, std::size_t cols, Labels labels)
    : rows_(rows), cols_(cols), data_(rows * cols), labels_(std::move(labels)) {
    if (rows == 0 || cols == 0) throw ValidationError("ComplexGrid needs rows, cols >= 1");
}

ComplexGrid::ComplexGrid(std::size_t rows, std::size_t cols, std::vector<Complex> data, Labels labels)
    : rows_(rows), cols_(cols), data_(std::move(data)), labels_(std::move(labels)) {
    if (rows == 0 || cols == 0) throw ValidationError("ComplexGrid needs rows, cols >= 1");
    if (data_.size() != rows * cols) {
        throw ValidationError("ComplexGrid data length " + std::to_string(data_.size()) + " != rows*cols " +
                              std::to_string(rows * cols));
    }
}

bool ComplexGrid::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

double ComplexGrid::frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

NonUniformSamples1D::NonUniformSamples1D(std::vector<double> f, std::vector<Complex> v)
    : freqs(std::move(f)), values(std::move(v)) {
    if (freqs.empty()) throw ValidationError("NonUniformSamples1D needs at least one sample");
    if (freqs.size() != values.size()) throw ValidationError("NonUniformSamples1D: freqs/values length mismatch");
    for (std::size_t i = 1; i < freqs.size(); ++i) {
        if (!(freqs[i] > freqs[i - 1])) throw ValidationError("NonUniformSamples1D: freqs not strictly increasing");
    }
}

void UniformGrid1D::validate() const {
    if (count == 0) throw ValidationError("UniformGrid1D: count must be >= 1");
    if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(start)) {
        throw ValidationError("UniformGrid1D: step must be finite and > 0");
    }
}

void WindowSpec::validate() const {
    if (!(decay > 0.0) || !std::isfinite(decay) || !std::isfinite(center)) {
        throw ValidationError("WindowSpec: decay must be finite and > 0");
    }
}

double window_eval(const WindowSpec& spec, double x) { return std::exp(-spec.decay * std::abs(x - spec.center)); }

Complex window_hat_eval(const WindowSpec& spec, double xi) {
    const double a = spec.decay;
    const double mag = 2.0 * a / (a * a + kTwoPi * kTwoPi * xi * xi);
    return std::polar(mag, -kTwoPi * xi * spec.center);
}

std::vector<Complex> nudft_direct(std::span<const double> freqs, std::span<const Complex> values,
                                  std::span<const double> weights, std::span<const double> points) {
    if (freqs.size() != values.size() || weights.size() != values.size()) {
        throw ValidationError("nudft_direct: freqs/values/weights length mismatch");
    }
    std::vector<Complex> out(points.size());
    for (std::size_t k = 0; k < points.size(); ++k) {
        Complex acc{};
        for (std::size_t n = 0; n < freqs.size(); ++n) {
            acc += weights[n] * values[n] * std::polar(1.0, kTwoPi * freqs[n] * points[k]);
        }
        out[k] = acc;
    }
    return out;
}

std::vector<Complex> nudft_direct(std::span<const Point2> freqs, std::span<const Complex> values,
                                  std::span<const double> weights, std::span<const Point2> points) {
    if (freqs.size() != values.size() || weights.size() != values.size()) {
        throw ValidationError("nudft_direct: freqs/values/weights length mismatch");
    }
    std::vector<Complex> out(points.size());
    for (std::size_t k = 0; k < points.size(); ++k) {
        Complex acc{};
        for (std::size_t n = 0; n < freqs.size(); ++n) {
            const double phase = freqs[n][0] * points[k][0] + freqs[n][1] * points[k][1];
            acc += weights[n] * values[n] * std::polar(1.0, kTwoPi * phase);
        }
        out[k] = acc;
    }
    return out;
}

ComplexGrid ifft2_uniform(const ComplexGrid& spectrum) {
    ComplexGrid out = transform2(spectrum, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(spectrum.size());
    for (auto& z : out.data()) z *= scale;
    return out;
}

ComplexGrid fft2_uniform(const ComplexGrid& image) { return transform2(image, FFTW_FORWARD); }

}  // namespace sarframe
