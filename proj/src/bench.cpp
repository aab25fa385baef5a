#include "sarframe/bench.hpp"

#include "sarframe/error.hpp"
#include "sarframe/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace sarframe {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double timed_median(const PhaseHistory& ph, const ReconstructionConfig& cfg, std::size_t repeats, SarImage* last) {
    std::vector<double> t;
    t.reserve(repeats);
    for (std::size_t r = 0; r < repeats; ++r) {
        SarImage img = reconstruct_image(ph, cfg);
        t.push_back(img.timing_seconds);
        if (r + 1 == repeats && last != nullptr) *last = std::move(img);
    }
    return median(std::move(t));
}

}  // namespace

const BenchRow* BenchReport::find(Method m, int percent) const {
    for (const auto& r : rows) {
        if (r.method == m && r.percent == percent) return &r;
    }
    return nullptr;
}

double median(std::vector<double> v) {
    if (v.empty()) throw ValidationError("median of empty list");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

BenchReport run_matrix(const Scene& scene, const SamplingPattern& pattern, const std::vector<Method>& methods,
                       const std::vector<int>& percents, const BenchOptions& opts) {
    if (opts.repeats < 1) throw ValidationError("run_matrix: repeats must be >= 1");
    if (methods.empty() || percents.empty()) throw ValidationError("run_matrix: empty method or percent list");

    const PhaseHistory full = synthesize_phase_history(scene, pattern);
    const UniformGrid1D grid = default_grid(full);
    Scene clean = scene;
    clean.noise_sigma = 0.0;
    const ComplexGrid reference = reference_image(clean, full.azimuth_freqs, grid);
    const RegionMask mask = ground_truth_mask(scene, full.n_azimuth, grid.count, opts.halo);

    std::vector<PhaseHistory> sub;
    sub.reserve(percents.size());
    for (int p : percents) sub.push_back(stratified_subsample(full, p, opts.subsample_seed));

    BenchReport report;
    for (Method m : methods) {
        for (std::size_t i = 0; i < percents.size(); ++i) {
            ReconstructionConfig cfg = opts.base;
            cfg.method = m;
            cfg.grid = grid;
            SarImage img;
            BenchRow row;
            row.method = m;
            row.percent = percents[i];
            row.seconds = timed_median(sub[i], cfg, opts.repeats, &img);
            row.d_nnz = img.d_nnz;
            row.tbr_db = tbr(img.grid, mask);
            row.tbed_bits = tbed(img.grid, mask);
            row.rel_l2 = relative_l2(img.grid, reference);
            report.rows.push_back(row);
        }
    }
    return report;
}

std::vector<ScalingRow> scaling_probe(const Scene& scene, const SamplingPattern& pattern,
                                      const std::vector<std::size_t>& sizes, Method method,
                                      const BenchOptions& opts) {
    if (opts.repeats < 1) throw ValidationError("scaling_probe: repeats must be >= 1");
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        if (sizes[i] <= sizes[i - 1]) throw ValidationError("scaling_probe: sizes must be increasing");
    }
    std::vector<ScalingRow> out;
    for (std::size_t p : sizes) {
        SamplingPattern pat = pattern;
        pat.n_range = p;
        pat.k_max = pat.k_min + static_cast<double>(p) - 1.0;
        const PhaseHistory ph = synthesize_phase_history(scene, pat);
        ReconstructionConfig cfg = opts.base;
        cfg.method = method;
        cfg.grid = default_grid(ph);
        out.push_back({p, timed_median(ph, cfg, opts.repeats, nullptr)});
    }
    return out;
}

void write_csv(std::ostream& os, const BenchReport& report) {
    os << kBenchCsvHeader << '\n';
    for (const auto& r : report.rows) {
        os << to_string(r.method) << ',' << r.percent << ',' << num(r.seconds) << ',' << r.d_nnz << ','
           << num(r.tbr_db) << ',' << num(r.tbed_bits) << ',' << num(r.rel_l2) << '\n';
    }
}

void write_json(std::ostream& os, const BenchReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"method", to_string(r.method)},
                        {"percent", r.percent},
                        {"seconds", r.seconds},
                        {"d_nnz", r.d_nnz},
                        {"tbr_db", r.tbr_db},
                        {"tbed_bits", r.tbed_bits},
                        {"rel_l2", r.rel_l2}});
    }
    os << nlohmann::json{{"rows", rows}}.dump(2) << '\n';
}

void write_scaling_csv(std::ostream& os, const std::vector<ScalingRow>& rows) {
    os << "n_range,seconds\n";
    for (const auto& r : rows) os << r.n_range << ',' << num(r.seconds) << '\n';
}

}  // namespace sarframe
