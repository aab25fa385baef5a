#pragma once

#include "sarframe/signal_core.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace sarframe {

/// Partition of an image's pixels into target and background (flat row-major indices).
class RegionMask {
public:
    /// Build from a per-pixel flag (true = target). Throws ValidationError
    /// if either region ends up empty.
    RegionMask(std::size_t rows, std::size_t cols, const std::vector<bool>& is_target);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::span<const std::size_t> target() const noexcept { return target_; }
    std::span<const std::size_t> background() const noexcept { return background_; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::size_t> target_;
    std::vector<std::size_t> background_;
};

/// Target-to-background ratio in dB: 20 log10(max_T |I| / mean_B |I|).
double tbr(const ComplexGrid& image, const RegionMask& mask);

/// Shannon entropy (bits) of the intensity distribution |I|^2 / sum |I|^2 over a region.
double region_entropy(const ComplexGrid& image, std::span<const std::size_t> region);

/// Target-to-background entropy difference |H(T) - H(B)| in bits.
double tbed(const ComplexGrid& image, const RegionMask& mask);

/// ||image - reference||_F / ||reference||_F.
double relative_l2(const ComplexGrid& image, const ComplexGrid& reference);

}  // namespace sarframe
