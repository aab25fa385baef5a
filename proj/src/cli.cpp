#include "sarframe/cli.hpp"

#include "sarframe/bench.hpp"
#include "sarframe/error.hpp"
#include "sarframe/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace sarframe {

namespace {

struct ReconOpts {
    std::string method = "tffr";
    double tau = 0.97;
    std::size_t band = 2;
    double q = 6.0;
    std::string rule = "grid";
    std::string quadrature = "trapezoidal";
    double decay = 0.01;
    double center = 0.5;
};

void add_recon_options(CLI::App* app, ReconOpts& o, bool with_method) {
    if (with_method) app->add_option("--method", o.method, "stolt|nufft|fa|ffr|tffr|tffr-fast")->capture_default_str();
    app->add_option("--tau", o.tau, "tFFR threshold")->capture_default_str();
    app->add_option("--band", o.band, "FFR band radius r")->capture_default_str();
    app->add_option("--q", o.q, "window truncation radius, grid steps")->capture_default_str();
    app->add_option("--rule", o.rule, "frame evaluation rule: grid|unit_interval|whole_line")->capture_default_str();
    app->add_option("--quadrature", o.quadrature, "NUFFT weights: trapezoidal|uniform")->capture_default_str();
    app->add_option("--decay", o.decay, "window decay a")->capture_default_str();
    app->add_option("--center", o.center, "window center")->capture_default_str();
}

Method method_or_throw(const std::string& name) {
    const auto m = parse_method(name);
    if (!m) throw ParseError("unknown method '" + name + "' (expected stolt, nufft, fa, ffr, tffr or tffr-fast)");
    return *m;
}

ReconstructionConfig to_config(const ReconOpts& o) {
    ReconstructionConfig cfg;
    cfg.method = method_or_throw(o.method);
    cfg.tau = o.tau;
    cfg.band_r = o.band;
    cfg.q = o.q;
    cfg.window = WindowSpec{o.decay, o.center};
    if (o.rule == "grid") {
        cfg.rule = FrameRule::grid;
    } else if (o.rule == "unit_interval") {
        cfg.rule = FrameRule::unit_interval;
    } else if (o.rule == "whole_line") {
        cfg.rule = FrameRule::whole_line;
    } else {
        throw ParseError("unknown --rule '" + o.rule + "'");
    }
    if (o.quadrature == "trapezoidal") {
        cfg.quadrature = Quadrature::trapezoidal;
    } else if (o.quadrature == "uniform") {
        cfg.quadrature = Quadrature::uniform;
    } else {
        throw ParseError("unknown --quadrature '" + o.quadrature + "'");
    }
    if (!(cfg.tau >= 0.0)) throw ParseError("--tau must be >= 0");
    if (!(cfg.q > 0.0)) throw ParseError("--q must be > 0");
    return cfg;
}

void check_percent(int p) {
    if (p < 30 || p > 100 || p % 10 != 0) {
        throw ParseError("percent " + std::to_string(p) + " not in {30, 40, ..., 100}");
    }
}

std::string json_number(double v) {
    return std::isfinite(v) ? nlohmann::json(v).dump() : std::string("null");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stripmap SAR Fourier-domain reconstruction toolkit"};
    app.require_subcommand(1);
    std::function<void()> action;

    // simulate
    std::string scen_path, out_path, in_path;
    auto* sim = app.add_subcommand("simulate", "synthesize a phase history from a scenario file");
    sim->add_option("scenario", scen_path)->required();
    sim->add_option("out", out_path, "output .sarph file")->required();
    sim->callback([&] {
        action = [&] {
            const Scenario s = load_scenario(scen_path);
            write_phase_history(out_path, synthesize_phase_history(s.scene, s.pattern));
        };
    });

    // reconstruct
    ReconOpts ro;
    std::size_t grid_size = 0;
    int percent = 100;
    std::uint64_t seed = 1;
    auto* rec = app.add_subcommand("reconstruct", "re-grid a phase history and form the image");
    rec->add_option("in", in_path, "input .sarph file")->required();
    rec->add_option("out", out_path, "output .sarim file")->required();
    add_recon_options(rec, ro, true);
    rec->add_option("--grid-size", grid_size, "range grid size M (0 = n_range)")->capture_default_str();
    rec->add_option("--percent", percent, "stratified subsampling percentage")->capture_default_str();
    rec->add_option("--seed", seed, "subsampling seed")->capture_default_str();
    rec->callback([&] {
        action = [&] {
            ReconstructionConfig cfg = to_config(ro);
            check_percent(percent);
            const PhaseHistory full = read_phase_history(in_path);
            cfg.grid = default_grid(full, grid_size);
            const PhaseHistory ph = stratified_subsample(full, percent, seed);
            const SarImage img = reconstruct_image(ph, cfg);
            write_image(out_path, ImageFile{img.grid, cfg.grid});
            nlohmann::json summary = {
                {"method", to_string(img.method)}, {"seconds", img.timing_seconds}, {"d_nnz", img.d_nnz}};
            out << summary.dump() << '\n';
        };
    });

    // metrics
    std::string regions_path, ref_path;
    std::size_t halo = 1;
    auto* met = app.add_subcommand("metrics", "TBR / TBED / relative L2 of an image");
    met->add_option("image", in_path, "input .sarim file")->required();
    met->add_option("regions", regions_path, "mask JSON or scenario JSON")->required();
    met->add_option("reference", ref_path, "optional reference .sarim file");
    met->add_option("--halo", halo, "target halo (pixels) when regions is a scenario")->capture_default_str();
    met->callback([&] {
        action = [&] {
            const ImageFile img = read_image(in_path);
            const std::string text = read_file(regions_path);
            std::optional<RegionMask> mask;
            if (is_mask_document(text)) {
                mask.emplace(parse_mask(text));
            } else {
                const Scenario s = parse_scenario(text);
                mask.emplace(ground_truth_mask(s.scene, img.image.rows(), img.image.cols(), halo));
            }
            if (mask->rows() != img.image.rows() || mask->cols() != img.image.cols()) {
                throw ValidationError("mask is " + std::to_string(mask->rows()) + "x" + std::to_string(mask->cols()) +
                                      " but image is " + std::to_string(img.image.rows()) + "x" +
                                      std::to_string(img.image.cols()));
            }
            const double t = tbr(img.image, *mask);
            const double h = tbed(img.image, *mask);
            std::string rel = "null";
            if (!ref_path.empty()) rel = json_number(relative_l2(img.image, read_image(ref_path).image));
            out << "{\"tbr_db\":" << json_number(t) << ",\"tbed_bits\":" << json_number(h) << ",\"rel_l2\":" << rel
                << "}\n";
        };
    });

    // bench / sweep
    std::vector<std::string> methods;
    std::vector<int> percents{100};
    std::size_t repeats = 5;
    std::string format;
    ReconOpts bo;
    auto* ben = app.add_subcommand("bench", "timing / quality matrix over methods and sampling percentages");
    ben->alias("sweep");
    ben->add_option("scenario", scen_path)->required();
    ben->add_option("--methods", methods, "comma-separated methods (default: all)")->delimiter(',');
    ben->add_option("--percents", percents, "comma-separated percentages")->delimiter(',')->capture_default_str();
    ben->add_option("--repeats", repeats, "timing repeats per cell (median reported)")->capture_default_str();
    ben->add_option("--seed", seed, "subsampling seed")->capture_default_str();
    ben->add_option("--halo", halo, "target halo for the metrics")->capture_default_str();
    ben->add_option("--out", out_path, "report path")->required();
    ben->add_option("--format", format, "csv|json (default from the extension, else csv)");
    add_recon_options(ben, bo, false);
    ben->callback([&] {
        action = [&] {
            BenchOptions opts;
            opts.base = to_config(bo);
            if (repeats < 1) throw ParseError("--repeats must be >= 1");
            opts.repeats = repeats;
            opts.subsample_seed = seed;
            opts.halo = halo;
            std::vector<Method> ms;
            for (const auto& m : methods) ms.push_back(method_or_throw(m));
            if (ms.empty()) ms = all_methods();
            for (int p : percents) check_percent(p);
            if (format.empty()) format = out_path.size() >= 5 && out_path.ends_with(".json") ? "json" : "csv";
            if (format != "csv" && format != "json") throw ParseError("unknown --format '" + format + "'");
            const Scenario s = load_scenario(scen_path);
            const BenchReport rep = run_matrix(s.scene, s.pattern, ms, percents, opts);
            std::ostringstream os;
            if (format == "json") {
                write_json(os, rep);
            } else {
                write_csv(os, rep);
            }
            write_file(out_path, os.str());
        };
    });

    // scaling probe
    std::vector<std::size_t> sizes{32, 64, 128};
    ReconOpts so;
    so.method = "tffr-fast";
    auto* sca = app.add_subcommand("scale", "median timing of one method over growing range sizes");
    sca->add_option("scenario", scen_path)->required();
    sca->add_option("--sizes", sizes, "comma-separated range sizes P")->delimiter(',')->capture_default_str();
    sca->add_option("--repeats", repeats, "timing repeats")->capture_default_str();
    sca->add_option("--out", out_path, "CSV path")->required();
    add_recon_options(sca, so, true);
    sca->callback([&] {
        action = [&] {
            BenchOptions opts;
            opts.base = to_config(so);
            if (repeats < 1) throw ParseError("--repeats must be >= 1");
            opts.repeats = repeats;
            const Scenario s = load_scenario(scen_path);
            std::ostringstream os;
            write_scaling_csv(os, scaling_probe(s.scene, s.pattern, sizes, opts.base.method, opts));
            write_file(out_path, os.str());
        };
    });

    // export-pgm
    double floor_db = -60.0;
    auto* pgm = app.add_subcommand("export-pgm", "render |image| in dB as a binary PGM");
    pgm->add_option("image", in_path, "input .sarim file")->required();
    pgm->add_option("out", out_path, "output .pgm file")->required();
    pgm->add_option("--floor-db", floor_db, "dB level mapped to black")->capture_default_str();
    pgm->callback([&] {
        action = [&] { write_file(out_path, encode_pgm(read_image(in_path).image, floor_db)); };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (action) action();
        return kExitOk;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace sarframe
