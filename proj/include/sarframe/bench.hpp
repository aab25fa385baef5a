#pragma once

#include "sarframe/reconstructors.hpp"
#include "sarframe/scene_sim.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace sarframe {

struct BenchRow {
    Method method = Method::tffr;
    int percent = 100;
    double seconds = 0.0;  // median over repeats
    std::size_t d_nnz = 0;
    double tbr_db = 0.0;
    double tbed_bits = 0.0;
    double rel_l2 = 0.0;
};

struct BenchReport {
    std::vector<BenchRow> rows;

    const BenchRow* find(Method m, int percent) const;
};

struct BenchOptions {
    std::size_t repeats = 5;
    std::uint64_t subsample_seed = 1;
    std::size_t halo = 1;
    /// Method-independent settings (tau, band, q, window, rule, quadrature).
    /// method and grid are filled in per cell.
    ReconstructionConfig base{};
};

/// Every (method, percent) cell, in methods-major order. Cells run
/// sequentially; the grid is the default grid of the fully sampled history.
BenchReport run_matrix(const Scene& scene, const SamplingPattern& pattern, const std::vector<Method>& methods,
                       const std::vector<int>& percents, const BenchOptions& opts = {});

struct ScalingRow {
    std::size_t n_range = 0;
    double seconds = 0.0;
};

/// Median timing of one method as the range size P grows (unit wavenumber step, N fixed).
std::vector<ScalingRow> scaling_probe(const Scene& scene, const SamplingPattern& pattern,
                                      const std::vector<std::size_t>& sizes, Method method,
                                      const BenchOptions& opts = {});

double median(std::vector<double> v);

inline constexpr const char* kBenchCsvHeader = "method,percent,seconds,d_nnz,tbr_db,tbed_bits,rel_l2";

void write_csv(std::ostream& os, const BenchReport& report);
void write_json(std::ostream& os, const BenchReport& report);
void write_scaling_csv(std::ostream& os, const std::vector<ScalingRow>& rows);

}  // namespace sarframe
