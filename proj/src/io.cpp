#include "sarframe/io.hpp"

#include "sarframe/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>

namespace sarframe {

using nlohmann::json;

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

std::uint32_t get_u32(std::string_view b) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return v;
}

void put_f64(std::string& out, double d) {
    const auto u = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((u >> (8 * i)) & 0xFFu));
}

double get_f64(const char* p) {
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return std::bit_cast<double>(u);
}

std::string frame(std::string_view magic, const json& header, std::span<const Complex> payload) {
    const std::string h = header.dump();
    std::string out;
    out.reserve(magic.size() + 4 + h.size() + 16 * payload.size());
    out.append(magic);
    put_u32(out, static_cast<std::uint32_t>(h.size()));
    out.append(h);
    for (const auto& z : payload) {
        put_f64(out, z.real());
        put_f64(out, z.imag());
    }
    return out;
}

struct Unframed {
    json header;
    std::string_view payload;
};

Unframed unframe(std::string_view bytes, std::string_view magic, const char* what) {
    if (bytes.size() < magic.size() || bytes.substr(0, magic.size()) != magic) {
        throw FormatError(std::string(what) + ": bad magic (expected " + std::string(magic.substr(0, 6)) + ")");
    }
    bytes.remove_prefix(magic.size());
    if (bytes.size() < 4) throw FormatError(std::string(what) + ": truncated header length");
    const std::uint32_t len = get_u32(bytes);
    bytes.remove_prefix(4);
    if (bytes.size() < len) throw FormatError(std::string(what) + ": header length exceeds file size");
    Unframed u;
    try {
        u.header = json::parse(bytes.substr(0, len));
    } catch (const json::exception& e) {
        throw FormatError(std::string(what) + ": header is not valid JSON: " + e.what());
    }
    if (!u.header.is_object()) throw FormatError(std::string(what) + ": header is not a JSON object");
    u.payload = bytes.substr(len);
    return u;
}

template <class T>
T header_field(const json& h, const char* key, const char* what) {
    const auto it = h.find(key);
    if (it == h.end()) throw FormatError(std::string(what) + ": header missing \"" + key + "\"");
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw FormatError(std::string(what) + ": header field \"" + key + "\" has the wrong type");
    }
}

std::size_t header_count(const json& h, const char* key, const char* what) {
    const auto it = h.find(key);
    if (it == h.end()) throw FormatError(std::string(what) + ": header missing \"" + key + "\"");
    if (!it->is_number_unsigned()) throw FormatError(std::string(what) + ": \"" + key + "\" must be a count");
    return it->get<std::size_t>();
}

std::vector<Complex> decode_payload(std::string_view payload, std::size_t rows, std::size_t cols, const char* what) {
    if (cols != 0 && rows > SIZE_MAX / 16 / cols) throw FormatError(std::string(what) + ": dimensions overflow");
    const std::size_t n = rows * cols;
    if (payload.size() != 16 * n) {
        throw FormatError(std::string(what) + ": payload is " + std::to_string(payload.size()) + " bytes, expected " +
                          std::to_string(16 * n));
    }
    std::vector<Complex> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = {get_f64(payload.data() + 16 * i), get_f64(payload.data() + 16 * i + 8)};
    return out;
}

void check_version(const json& h, const char* what) {
    const auto it = h.find("version");
    if (it == h.end() || !it->is_number_integer() || it->get<int>() != 1) {
        throw FormatError(std::string(what) + ": unsupported or missing version (expected 1)");
    }
}

// ---- scenario parsing ----------------------------------------------------

[[noreturn]] void field_error(const std::string& path, const std::string& msg) {
    throw ParseError("scenario field " + path + ": " + msg);
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> known) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::none_of(known.begin(), known.end(), [&](const char* k) { return it.key() == k; })) {
            field_error(path + "." + it.key(), "unknown field");
        }
    }
}

double get_number(const json& obj, const std::string& path, const char* key, std::optional<double> dflt) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        if (dflt) return *dflt;
        field_error(path + "." + key, "missing required number");
    }
    if (!it->is_number()) field_error(path + "." + key, "expected a number");
    const double v = it->get<double>();
    if (!std::isfinite(v)) field_error(path + "." + key, "must be finite");
    return v;
}

std::uint64_t get_count(const json& obj, const std::string& path, const char* key, std::uint64_t dflt) {
    const auto it = obj.find(key);
    if (it == obj.end()) return dflt;
    if (!it->is_number_unsigned()) field_error(path + "." + key, "expected a non-negative integer");
    return it->get<std::uint64_t>();
}

json parse_json_text(std::string_view text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
        throw ParseError(std::string(what) + ": malformed JSON at line " + std::to_string(line) + ": " + e.what());
    }
}

}  // namespace

std::string encode_phase_history(const PhaseHistory& ph) {
    ph.validate();
    json rf = json::array();
    for (std::size_t n = 0; n < ph.n_azimuth; ++n) {
        const auto row = ph.range_slice(n);
        rf.push_back(std::vector<double>(row.begin(), row.end()));
    }
    json h = {{"version", 1},
              {"n_azimuth", ph.n_azimuth},
              {"n_range", ph.n_range},
              {"azimuth_freqs", ph.azimuth_freqs},
              {"range_freqs", rf}};
    return frame(kPhaseHistoryMagic, h, ph.values);
}

PhaseHistory decode_phase_history(std::string_view bytes) {
    constexpr const char* what = "phase history";
    const Unframed u = unframe(bytes, kPhaseHistoryMagic, what);
    check_version(u.header, what);
    PhaseHistory ph;
    ph.n_azimuth = header_count(u.header, "n_azimuth", what);
    ph.n_range = header_count(u.header, "n_range", what);
    ph.azimuth_freqs = header_field<std::vector<double>>(u.header, "azimuth_freqs", what);
    const auto rf = header_field<std::vector<std::vector<double>>>(u.header, "range_freqs", what);
    if (ph.n_azimuth == 0 || ph.n_range == 0) throw FormatError("phase history: zero dimension");
    if (ph.azimuth_freqs.size() != ph.n_azimuth) throw FormatError("phase history: azimuth_freqs length mismatch");
    if (rf.size() != ph.n_azimuth) throw FormatError("phase history: range_freqs row count mismatch");
    ph.range_freqs.reserve(ph.n_azimuth * ph.n_range);
    for (const auto& row : rf) {
        if (row.size() != ph.n_range) throw FormatError("phase history: range_freqs row length mismatch");
        ph.range_freqs.insert(ph.range_freqs.end(), row.begin(), row.end());
    }
    ph.values = decode_payload(u.payload, ph.n_azimuth, ph.n_range, what);
    ph.validate();
    return ph;
}

std::string encode_image(const ImageFile& img) {
    if (img.grid.count != img.image.cols()) throw ValidationError("image: grid count != image columns");
    json h = {{"version", 1},
              {"n_azimuth", img.image.rows()},
              {"n_grid", img.image.cols()},
              {"grid", {{"start", img.grid.start}, {"step", img.grid.step}, {"count", img.grid.count}}}};
    return frame(kImageMagic, h, img.image.data());
}

ImageFile decode_image(std::string_view bytes) {
    constexpr const char* what = "image";
    const Unframed u = unframe(bytes, kImageMagic, what);
    check_version(u.header, what);
    const std::size_t rows = header_count(u.header, "n_azimuth", what);
    const std::size_t cols = header_count(u.header, "n_grid", what);
    const auto g = u.header.find("grid");
    if (g == u.header.end() || !g->is_object()) throw FormatError("image: header missing \"grid\" object");
    ImageFile out;
    out.grid.start = header_field<double>(*g, "start", what);
    out.grid.step = header_field<double>(*g, "step", what);
    out.grid.count = header_count(*g, "count", what);
    if (rows == 0 || cols == 0) throw FormatError("image: zero dimension");
    if (out.grid.count != cols) throw FormatError("image: grid.count != n_grid");
    out.grid.validate();
    out.image = ComplexGrid(rows, cols, decode_payload(u.payload, rows, cols, what));
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error reading " + path);
    return ss.str();
}

void write_file(const std::string& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError("error writing " + path);
}

void write_phase_history(const std::string& path, const PhaseHistory& ph) { write_file(path, encode_phase_history(ph)); }
PhaseHistory read_phase_history(const std::string& path) { return decode_phase_history(read_file(path)); }
void write_image(const std::string& path, const ImageFile& img) { write_file(path, encode_image(img)); }
ImageFile read_image(const std::string& path) { return decode_image(read_file(path)); }

Scenario parse_scenario(std::string_view text) {
    const json doc = parse_json_text(text, "scenario");
    if (!doc.is_object()) throw ParseError("scenario: top level must be a JSON object");
    reject_unknown(doc, "$", {"scene", "pattern"});
    Scenario s;

    const auto sc = doc.find("scene");
    if (sc == doc.end()) field_error("$.scene", "missing");
    if (!sc->is_object()) field_error("$.scene", "expected an object");
    reject_unknown(*sc, "$.scene", {"scatterers", "noise_sigma", "seed"});
    const auto list = sc->find("scatterers");
    if (list == sc->end()) field_error("$.scene.scatterers", "missing");
    if (!list->is_array() || list->empty()) field_error("$.scene.scatterers", "expected a non-empty array");
    for (std::size_t i = 0; i < list->size(); ++i) {
        const json& t = (*list)[i];
        const std::string path = "$.scene.scatterers[" + std::to_string(i) + "]";
        if (!t.is_object()) field_error(path, "expected an object");
        reject_unknown(t, path, {"x", "y", "amp_re", "amp_im"});
        Scatterer sc_t;
        sc_t.x = get_number(t, path, "x", std::nullopt);
        sc_t.y = get_number(t, path, "y", std::nullopt);
        sc_t.amplitude = {get_number(t, path, "amp_re", 1.0), get_number(t, path, "amp_im", 0.0)};
        s.scene.scatterers.push_back(sc_t);
    }
    s.scene.noise_sigma = get_number(*sc, "$.scene", "noise_sigma", 0.0);
    if (s.scene.noise_sigma < 0.0) field_error("$.scene.noise_sigma", "must be >= 0");
    s.scene.seed = get_count(*sc, "$.scene", "seed", 0);

    if (const auto pt = doc.find("pattern"); pt != doc.end()) {
        if (!pt->is_object()) field_error("$.pattern", "expected an object");
        reject_unknown(*pt, "$.pattern", {"n_azimuth", "n_range", "k_min", "k_max", "curvature"});
        const SamplingPattern d{};
        s.pattern.n_azimuth = get_count(*pt, "$.pattern", "n_azimuth", d.n_azimuth);
        s.pattern.n_range = get_count(*pt, "$.pattern", "n_range", d.n_range);
        s.pattern.k_min = get_number(*pt, "$.pattern", "k_min", d.k_min);
        s.pattern.k_max = get_number(*pt, "$.pattern", "k_max", d.k_max);
        s.pattern.curvature = get_number(*pt, "$.pattern", "curvature", d.curvature);
    }
    try {
        s.scene.validate();
        s.pattern.validate();
    } catch (const ValidationError& e) {
        throw ParseError(std::string("scenario: ") + e.what());
    }
    return s;
}

Scenario load_scenario(const std::string& path) { return parse_scenario(read_file(path)); }

std::string scenario_to_json(const Scenario& s) {
    json sc = json::array();
    for (const auto& t : s.scene.scatterers) {
        sc.push_back({{"x", t.x}, {"y", t.y}, {"amp_re", t.amplitude.real()}, {"amp_im", t.amplitude.imag()}});
    }
    json doc = {{"scene", {{"scatterers", sc}, {"noise_sigma", s.scene.noise_sigma}, {"seed", s.scene.seed}}},
                {"pattern",
                 {{"n_azimuth", s.pattern.n_azimuth},
                  {"n_range", s.pattern.n_range},
                  {"k_min", s.pattern.k_min},
                  {"k_max", s.pattern.k_max},
                  {"curvature", s.pattern.curvature}}}};
    return doc.dump(2) + "\n";
}

bool is_mask_document(std::string_view text) {
    try {
        const json doc = json::parse(text);
        return doc.is_object() && doc.contains("target") && !doc.contains("scene");
    } catch (const json::exception&) {
        return false;
    }
}

RegionMask parse_mask(std::string_view text) {
    const json doc = parse_json_text(text, "mask");
    if (!doc.is_object()) throw ParseError("mask: top level must be a JSON object");
    auto count = [&](const char* key) -> std::size_t {
        const auto it = doc.find(key);
        if (it == doc.end() || !it->is_number_unsigned()) {
            throw ParseError(std::string("mask field $.") + key + ": expected a non-negative integer");
        }
        return it->get<std::size_t>();
    };
    const std::size_t rows = count("rows");
    const std::size_t cols = count("cols");
    const auto t = doc.find("target");
    if (t == doc.end() || !t->is_array()) throw ParseError("mask field $.target: expected an array of indices");
    std::vector<bool> flags(rows * cols, false);
    for (std::size_t i = 0; i < t->size(); ++i) {
        const json& v = (*t)[i];
        if (!v.is_number_unsigned() || v.get<std::size_t>() >= rows * cols) {
            throw ParseError("mask field $.target[" + std::to_string(i) + "]: index out of range");
        }
        flags[v.get<std::size_t>()] = true;
    }
    return RegionMask(rows, cols, flags);
}

std::string mask_to_json(const RegionMask& mask) {
    json doc = {{"rows", mask.rows()},
                {"cols", mask.cols()},
                {"target", std::vector<std::size_t>(mask.target().begin(), mask.target().end())}};
    return doc.dump() + "\n";
}

std::string encode_pgm(const ComplexGrid& image, double floor_db) {
    if (!(floor_db < 0.0) || !std::isfinite(floor_db)) throw ValidationError("pgm: floor_db must be finite and < 0");
    double peak = 0.0;
    for (const auto& z : image.data()) peak = std::max(peak, std::abs(z));
    if (!(peak > 0.0) || !std::isfinite(peak)) throw ValidationError("pgm: image is all zero (or not finite)");
    std::string out = "P5\n" + std::to_string(image.cols()) + " " + std::to_string(image.rows()) + "\n255\n";
    out.reserve(out.size() + image.size());
    for (const auto& z : image.data()) {
        const double mag = std::abs(z);
        double level = 0.0;
        if (mag > 0.0) {
            const double db = 20.0 * std::log10(mag / peak);
            level = std::clamp(255.0 * (db - floor_db) / (0.0 - floor_db), 0.0, 255.0);
        }
        out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(level))));
    }
    return out;
}

}  // namespace sarframe
