#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sarframe {

using Complex = std::complex<double>;

/// Dense row-major 2D complex array (image or spectrum). Rows run along
/// azimuth, columns along range unless the axis labels say otherwise.
class ComplexGrid {
public:
    using Labels = std::array<std::string, 2>;

    ComplexGrid() = default;
    ComplexGrid(std::size_t rows, std::size_t cols, Labels labels = {"azimuth", "range"});
    ComplexGrid(std::size_t rows, std::size_t cols, std::vector<Complex> data,
                Labels labels = {"azimuth", "range"});

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<Complex> data() noexcept { return data_; }
    std::span<const Complex> data() const noexcept { return data_; }
    std::span<Complex> row(std::size_t r) { return std::span<Complex>(data_).subspan(r * cols_, cols_); }
    std::span<const Complex> row(std::size_t r) const {
        return std::span<const Complex>(data_).subspan(r * cols_, cols_);
    }

    const Labels& axis_labels() const noexcept { return labels_; }
    void set_axis_labels(Labels labels) { labels_ = std::move(labels); }

    bool all_finite() const;
    double frobenius_norm() const;

    friend bool operator==(const ComplexGrid& a, const ComplexGrid& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
    Labels labels_{"azimuth", "range"};
};

/// Non-uniform 1D Fourier samples; frequencies strictly increasing.
struct NonUniformSamples1D {
    std::vector<double> freqs;
    std::vector<Complex> values;

    NonUniformSamples1D(std::vector<double> freqs, std::vector<Complex> values);
};

/// Uniform frequency grid: coordinate(m) = start + m * step, m in [0, count).
struct UniformGrid1D {
    std::size_t count = 0;
    double start = 0.0;
    double step = 1.0;

    double coordinate(std::size_t m) const noexcept { return start + static_cast<double>(m) * step; }
    void validate() const;
};

/// Exponential mollifier w(x) = exp(-decay * |x - center|).
struct WindowSpec {
    double decay = 0.01;
    double center = 0.5;

    void validate() const;
};

double window_eval(const WindowSpec& spec, double x);

/// Continuous Fourier transform of the window over the whole real line,
/// exp(-2 pi i xi c) * 2a / (a^2 + 4 pi^2 xi^2).
Complex window_hat_eval(const WindowSpec& spec, double xi);

/// Spatial sample k of an M-point reconstruction, x_k = k / M.
inline double spatial_coordinate(std::size_t k, std::size_t m_count) noexcept {
    return static_cast<double>(k) / static_cast<double>(m_count);
}

/// Brute-force weighted inverse transform sum_n weights[n] * values[n] * exp(2 pi i freqs[n] x)
/// at each spatial point x. Throws ValidationError on length mismatch.
std::vector<Complex> nudft_direct(std::span<const double> freqs, std::span<const Complex> values,
                                  std::span<const double> weights, std::span<const double> points);

using Point2 = std::array<double, 2>;

/// 2D variant: exponent 2 pi i (lambda . x).
std::vector<Complex> nudft_direct(std::span<const Point2> freqs, std::span<const Complex> values,
                                  std::span<const double> weights, std::span<const Point2> points);

/// Standard 2D inverse DFT with 1/(rows*cols) normalization.
ComplexGrid ifft2_uniform(const ComplexGrid& spectrum);

/// Unnormalized 2D forward DFT (the exact inverse of ifft2_uniform).
ComplexGrid fft2_uniform(const ComplexGrid& image);

}  // namespace sarframe
