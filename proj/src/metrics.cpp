#include "sarframe/metrics.hpp"

#include "sarframe/error.hpp"

#include <algorithm>
#include <cmath>

namespace sarframe {

namespace {

void require_dims(const ComplexGrid& image, const RegionMask& mask) {
    if (image.rows() != mask.rows() || image.cols() != mask.cols()) {
        throw ValidationError("mask dimensions do not match the image");
    }
}

}  // namespace

RegionMask::RegionMask(std::size_t rows, std::size_t cols, const std::vector<bool>& is_target)
    : rows_(rows), cols_(cols) {
    if (is_target.size() != rows * cols) throw ValidationError("RegionMask: flag count != rows*cols");
    for (std::size_t i = 0; i < is_target.size(); ++i) (is_target[i] ? target_ : background_).push_back(i);
    if (target_.empty()) throw ValidationError("RegionMask: target region is empty");
    if (background_.empty()) throw ValidationError("RegionMask: background region is empty");
}

double tbr(const ComplexGrid& image, const RegionMask& mask) {
    require_dims(image, mask);
    const auto data = image.data();
    double peak = 0.0;
    for (auto i : mask.target()) peak = std::max(peak, std::abs(data[i]));
    double sum = 0.0;
    for (auto i : mask.background()) sum += std::abs(data[i]);
    const double mean = sum / static_cast<double>(mask.background().size());
    if (!(mean > 0.0)) throw ValidationError("tbr: background mean magnitude is zero");
    return 20.0 * std::log10(peak / mean);
}

double region_entropy(const ComplexGrid& image, std::span<const std::size_t> region) {
    if (region.empty()) throw ValidationError("region_entropy: empty region");
    const auto data = image.data();
    double total = 0.0;
    for (auto i : region) {
        if (i >= data.size()) throw ValidationError("region_entropy: pixel index out of range");
        total += std::norm(data[i]);
    }
    if (!(total > 0.0)) throw ValidationError("region_entropy: all-zero region");
    double h = 0.0;
    for (auto i : region) {
        const double p = std::norm(data[i]) / total;
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

double tbed(const ComplexGrid& image, const RegionMask& mask) {
    require_dims(image, mask);
    return std::abs(region_entropy(image, mask.target()) - region_entropy(image, mask.background()));
}

double relative_l2(const ComplexGrid& image, const ComplexGrid& reference) {
    if (image.rows() != reference.rows() || image.cols() != reference.cols()) {
        throw ValidationError("relative_l2: dimension mismatch");
    }
    const double ref = reference.frobenius_norm();
    if (!(ref > 0.0)) throw ValidationError("relative_l2: zero reference");
    double s = 0.0;
    const auto a = image.data();
    const auto b = reference.data();
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s) / ref;
}

}  // namespace sarframe
