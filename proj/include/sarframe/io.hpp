#pragma once

#include "sarframe/metrics.hpp"
#include "sarframe/reconstructors.hpp"
#include "sarframe/scene_sim.hpp"

#include <string>
#include <string_view>

namespace sarframe {

inline constexpr std::string_view kPhaseHistoryMagic = "SARPH1\n";
inline constexpr std::string_view kImageMagic = "SARIM1\n";

/// Reconstructed image plus the range grid it lives on.
struct ImageFile {
    ComplexGrid image;
    UniformGrid1D grid;

    friend bool operator==(const ImageFile& a, const ImageFile& b) {
        return a.image == b.image && a.grid.count == b.grid.count && a.grid.start == b.grid.start &&
               a.grid.step == b.grid.step;
    }
};

// In-memory encoders/decoders. Decoders throw FormatError when the bytes are
// not a well-formed document, ValidationError when the content is.
std::string encode_phase_history(const PhaseHistory& ph);
PhaseHistory decode_phase_history(std::string_view bytes);
std::string encode_image(const ImageFile& img);
ImageFile decode_image(std::string_view bytes);

// File wrappers; IoError when the file cannot be read or written.
void write_phase_history(const std::string& path, const PhaseHistory& ph);
PhaseHistory read_phase_history(const std::string& path);
void write_image(const std::string& path, const ImageFile& img);
ImageFile read_image(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

struct Scenario {
    Scene scene;
    SamplingPattern pattern;
};

/// Scenario JSON:
///   {"scene": {"scatterers": [{"x", "y", "amp_re", "amp_im"}], "noise_sigma", "seed"},
///    "pattern": {"n_azimuth", "n_range", "k_min", "k_max", "curvature"}}
/// amp_re/amp_im default to 1/0, noise_sigma and seed to 0, "pattern" to the
/// default lattice. Throws ParseError naming the line or field at fault.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);
std::string scenario_to_json(const Scenario& s);

/// Mask JSON: {"rows", "cols", "target": [flat row-major indices]}.
RegionMask parse_mask(std::string_view text);
std::string mask_to_json(const RegionMask& mask);

/// True when the JSON text looks like a mask document rather than a scenario.
bool is_mask_document(std::string_view text);

/// Binary 8-bit PGM of 20 log10(|I| / max |I|) mapped from [floor_db, 0] to
/// [0, 255]. Throws ValidationError on an all-zero image or floor_db >= 0.
std::string encode_pgm(const ComplexGrid& image, double floor_db = -60.0);

}  // namespace sarframe
