#include "sfglab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <variant>

#include "json.hpp"

#include "sfglab/fft.hpp"
#include "sfglab/oracles.hpp"

namespace sfglab {

using nlohmann::json;

const char* library_version() { return "1.0.0"; }

std::uint64_t fnv1a_hash(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (char c : bytes) {
        h ^= std::uint64_t(static_cast<unsigned char>(c));
        h *= 1099511628211ULL;
    }
    return h;
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw std::invalid_argument("config: " + where + ": " + what);
}

const json* find(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (item.key() == a) {
                known = true;
                break;
            }
        if (!known) fail(where, "unknown key \"" + item.key() + "\"");
    }
}

double get_number(const json& obj, const std::string& where, const char* key) {
    const json* j = find(obj, key);
    if (!j) fail(where + "." + key, "required number is missing");
    if (!j->is_number()) fail(where + "." + key, "must be a number");
    const double v = j->get<double>();
    if (!std::isfinite(v)) fail(where + "." + key, "must be finite");
    return v;
}

double get_number_or(const json& obj, const std::string& where, const char* key,
                     double fallback) {
    return find(obj, key) ? get_number(obj, where, key) : fallback;
}

bool get_bool_or(const json& obj, const std::string& where, const char* key,
                 bool fallback) {
    const json* j = find(obj, key);
    if (!j) return fallback;
    if (!j->is_boolean()) fail(where + "." + key, "must be a boolean");
    return j->get<bool>();
}

long get_integer(const json& obj, const std::string& where, const char* key) {
    const json* j = find(obj, key);
    if (!j) fail(where + "." + key, "required integer is missing");
    if (!j->is_number_integer()) fail(where + "." + key, "must be an integer");
    return j->get<long>();
}

std::string get_string_or(const json& obj, const std::string& where, const char* key,
                          const std::string& fallback) {
    const json* j = find(obj, key);
    if (!j) return fallback;
    if (!j->is_string()) fail(where + "." + key, "must be a string");
    return j->get<std::string>();
}

std::vector<double> get_number_list(const json& obj, const std::string& where,
                                    const char* key, std::size_t max_len) {
    const json* j = find(obj, key);
    if (!j) fail(where + "." + key, "required list is missing");
    if (!j->is_array() || j->empty())
        fail(where + "." + key, "must be a non-empty array of numbers");
    if (j->size() > max_len) fail(where + "." + key, "has too many entries");
    std::vector<double> out;
    out.reserve(j->size());
    for (const auto& e : *j) {
        if (!e.is_number() || !std::isfinite(e.get<double>()))
            fail(where + "." + key, "entries must be finite numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

/// A width given either directly in rad/fs or as a wavelength FWHM in nm,
/// converted at the reference wavelength. The two spellings are exclusive.
double width_from_pair(const json& obj, const std::string& where, const char* rad_key,
                       const char* nm_key, double ref_wavelength_nm, bool required,
                       double fallback) {
    const json* jr = find(obj, rad_key);
    const json* jn = find(obj, nm_key);
    if (jr && jn)
        fail(where, std::string("give either ") + rad_key + " or " + nm_key +
                        ", not both");
    if (!jr && !jn) {
        if (required)
            fail(where, std::string("one of ") + rad_key + " or " + nm_key +
                            " is required");
        return fallback;
    }
    if (jr) {
        const double v = get_number(obj, where, rad_key);
        if (!(v >= 0.0)) fail(where + "." + rad_key, "must be >= 0");
        return v;
    }
    const double nm = get_number(obj, where, nm_key);
    if (!(nm >= 0.0)) fail(where + "." + nm_key, "must be >= 0");
    return nm == 0.0 ? 0.0 : fwhm_wavelength_to_angular(ref_wavelength_nm, nm);
}

GridConfig parse_grid(const json& top) {
    const json* jg0 = find(top, "grid");
    if (!jg0) fail("grid", "required section is missing");
    if (!jg0->is_object()) fail("grid", "must be an object");
    const json& jg = *jg0;
    check_keys(jg, "grid",
               {"n_modes", "pump_wavelength_nm", "pump_frequency_rad_per_fs",
                "half_span_rad_per_fs", "bandwidth_nm"});

    GridConfig g;
    const long n = get_integer(jg, "grid", "n_modes");
    if (n < 4 || n > 1048576 || n % 2 != 0)
        fail("grid.n_modes", "must be an even integer in [4, 1048576]");
    g.n_modes = int(n);

    const bool has_wl = find(jg, "pump_wavelength_nm") != nullptr;
    const bool has_freq = find(jg, "pump_frequency_rad_per_fs") != nullptr;
    if (has_wl == has_freq)
        fail("grid",
             "give exactly one of pump_wavelength_nm or pump_frequency_rad_per_fs");
    if (has_wl) {
        const double wl = get_number(jg, "grid", "pump_wavelength_nm");
        if (!(wl > 0.0)) fail("grid.pump_wavelength_nm", "must be > 0");
        g.pump_frequency = wavelength_to_angular(wl);
    } else {
        g.pump_frequency = get_number(jg, "grid", "pump_frequency_rad_per_fs");
        if (!(g.pump_frequency > 0.0))
            fail("grid.pump_frequency_rad_per_fs", "must be > 0");
    }

    const bool has_span = find(jg, "half_span_rad_per_fs") != nullptr;
    const bool has_bw = find(jg, "bandwidth_nm") != nullptr;
    if (has_span == has_bw)
        fail("grid", "give exactly one of half_span_rad_per_fs or bandwidth_nm");
    if (has_span) {
        g.half_span = get_number(jg, "grid", "half_span_rad_per_fs");
    } else {
        const double bw = get_number(jg, "grid", "bandwidth_nm");
        if (!(bw > 0.0)) fail("grid.bandwidth_nm", "must be > 0");
        const double deg_wl = angular_to_wavelength(g.pump_frequency / 2.0);
        g.half_span = 0.5 * fwhm_wavelength_to_angular(deg_wl, bw);
    }
    if (!(g.half_span > 0.0)) fail("grid.half_span_rad_per_fs", "must be > 0");

    try {
        (void)SpectralGrid(g.pump_frequency, g.half_span, g.n_modes);
    } catch (const std::exception& e) {
        fail("grid", e.what());
    }
    return g;
}

SourceConfig parse_source(const json& top, const GridConfig& grid) {
    const json* js0 = find(top, "source");
    if (!js0) fail("source", "required section is missing");
    if (!js0->is_object()) fail("source", "must be an object");
    const json& js = *js0;
    check_keys(js, "source",
               {"kind", "profile", "mean_photons", "profile_fwhm_rad_per_fs",
                "profile_fwhm_nm", "profile_width_rad_per_fs",
                "pump_linewidth_rad_per_fs", "pump_linewidth_nm", "pump_shape",
                "envelope_jitter", "carrier_scaling"});

    SourceConfig s;
    const std::string kind = get_string_or(js, "source", "kind", "squeezed");
    if (kind == "squeezed")
        s.kind = SourceKind::Squeezed;
    else if (kind == "coherent")
        s.kind = SourceKind::Coherent;
    else if (kind == "uncorrelated")
        s.kind = SourceKind::Uncorrelated;
    else
        fail("source.kind", "must be \"squeezed\", \"coherent\", or \"uncorrelated\"");

    const std::string prof = get_string_or(js, "source", "profile", "flat");
    if (prof == "flat")
        s.profile = SourceProfile::Flat;
    else if (prof == "gaussian")
        s.profile = SourceProfile::Gaussian;
    else
        fail("source.profile", "must be \"flat\" or \"gaussian\"");

    s.mean_photons = get_number(js, "source", "mean_photons");
    if (!(s.mean_photons > 0.0)) fail("source.mean_photons", "must be > 0");

    const double deg_wl = angular_to_wavelength(grid.pump_frequency / 2.0);
    const double pump_wl = angular_to_wavelength(grid.pump_frequency);

    if (s.profile == SourceProfile::Gaussian) {
        if (find(js, "profile_width_rad_per_fs"))
            fail("source.profile_width_rad_per_fs", "only applies to a flat profile");
        s.profile_fwhm = width_from_pair(js, "source", "profile_fwhm_rad_per_fs",
                                         "profile_fwhm_nm", deg_wl, true, 0.0);
        if (!(s.profile_fwhm > 0.0))
            fail("source", "the gaussian profile width must be > 0");
    } else {
        if (find(js, "profile_fwhm_rad_per_fs") || find(js, "profile_fwhm_nm"))
            fail("source", "profile_fwhm only applies to a gaussian profile");
        s.profile_width =
            get_number_or(js, "source", "profile_width_rad_per_fs", 2.0 * grid.half_span);
        if (!(s.profile_width > 0.0) || s.profile_width > 2.0 * grid.half_span)
            fail("source.profile_width_rad_per_fs", "must lie in (0, full span]");
    }

    s.pump_linewidth = width_from_pair(js, "source", "pump_linewidth_rad_per_fs",
                                       "pump_linewidth_nm", pump_wl, false, 0.0);
    const std::string shape = get_string_or(js, "source", "pump_shape", "lorentzian");
    if (shape == "lorentzian")
        s.pump_shape = LineShape::Lorentzian;
    else if (shape == "gaussian")
        s.pump_shape = LineShape::Gaussian;
    else
        fail("source.pump_shape", "must be \"lorentzian\" or \"gaussian\"");

    s.envelope_jitter = get_number_or(js, "source", "envelope_jitter", 0.0);
    if (!(s.envelope_jitter >= 0.0)) fail("source.envelope_jitter", "must be >= 0");
    s.carrier_scaling = get_bool_or(js, "source", "carrier_scaling", false);

    if (s.kind == SourceKind::Coherent) {
        if (s.pump_linewidth > 0.0)
            fail("source.pump_linewidth_rad_per_fs",
                 "does not apply to a coherent source");
        if (s.envelope_jitter > 0.0)
            fail("source.envelope_jitter", "does not apply to a coherent source");
        if (s.carrier_scaling)
            fail("source.carrier_scaling", "does not apply to a coherent source");
    }
    return s;
}

MaskConfig parse_mask(const json& top, const GridConfig& grid) {
    MaskConfig m;
    const json* jm0 = find(top, "mask");
    if (!jm0) return m;
    if (!jm0->is_object()) fail("mask", "must be an object");
    const json& jm = *jm0;
    check_keys(jm, "mask",
               {"type", "tau_fs", "alpha_rad", "beta_fs", "theta_rad", "coeffs",
                "path", "pixels"});

    const std::string type = get_string_or(jm, "mask", "type", "none");
    const auto forbid = [&](std::initializer_list<const char*> keys) {
        for (const char* k : keys)
            if (find(jm, k))
                fail(std::string("mask.") + k,
                     "does not apply to mask type \"" + type + "\"");
    };

    if (type == "none") {
        forbid({"tau_fs", "alpha_rad", "beta_fs", "theta_rad", "coeffs", "path"});
    } else if (type == "split_delay") {
        forbid({"alpha_rad", "beta_fs", "theta_rad", "coeffs", "path"});
        m.descriptor = MaskDescriptor{SplitDelayMask{get_number(jm, "mask", "tau_fs")}};
        m.zero = false;
    } else if (type == "sinusoidal") {
        forbid({"tau_fs", "coeffs", "path"});
        const double alpha = get_number(jm, "mask", "alpha_rad");
        if (!(alpha >= 0.0)) fail("mask.alpha_rad", "must be >= 0");
        const double beta = get_number(jm, "mask", "beta_fs");
        const double theta = get_number_or(jm, "mask", "theta_rad", 0.0);
        m.descriptor = MaskDescriptor{SinusoidalMask{alpha, beta, theta}};
        m.zero = false;
    } else if (type == "polynomial") {
        forbid({"tau_fs", "alpha_rad", "beta_fs", "theta_rad", "path"});
        m.descriptor =
            MaskDescriptor{PolynomialMask{get_number_list(jm, "mask", "coeffs", 16)}};
        m.zero = false;
    } else if (type == "sampled_csv") {
        forbid({"tau_fs", "alpha_rad", "beta_fs", "theta_rad", "coeffs"});
        m.csv_path = get_string_or(jm, "mask", "path", "");
        if (m.csv_path.empty()) fail("mask.path", "required file path is missing");
        m.zero = false;
    } else {
        fail("mask.type", "unknown mask type \"" + type + "\"");
    }

    if (find(jm, "pixels")) {
        const long px = get_integer(jm, "mask", "pixels");
        if (px < 1 || px > grid.n_modes) fail("mask.pixels", "must lie in [1, n_modes]");
        m.pixels = int(px);
    }
    return m;
}

DetectorResponse parse_detector(const json& top, const GridConfig& grid) {
    DetectorResponse d;
    const json* jd0 = find(top, "detector");
    if (!jd0) return d;
    if (!jd0->is_object()) fail("detector", "must be an object");
    const json& jd = *jd0;
    check_keys(jd, "detector", {"fwhm_rad_per_fs", "fwhm_nm", "shape"});
    const double pump_wl = angular_to_wavelength(grid.pump_frequency);
    d.fwhm = width_from_pair(jd, "detector", "fwhm_rad_per_fs", "fwhm_nm", pump_wl,
                             false, 0.0);
    const std::string shape = get_string_or(jd, "detector", "shape", "gaussian");
    if (shape == "gaussian")
        d.shape = LineShape::Gaussian;
    else if (shape == "lorentzian")
        d.shape = LineShape::Lorentzian;
    else
        fail("detector.shape", "must be \"gaussian\" or \"lorentzian\"");
    return d;
}

RunConfig parse_run(const json& top, const SourceConfig& src, const MaskConfig& mask,
                    const DetectorResponse& det) {
    const json* jr0 = find(top, "run");
    if (!jr0) fail("run", "required section is missing");
    if (!jr0->is_object()) fail("run", "must be an object");
    const json& jr = *jr0;

    RunConfig r;
    const std::string exp = get_string_or(jr, "run", "experiment", "");
    if (exp == "spectrum")
        r.experiment = ExperimentKind::Spectrum;
    else if (exp == "delay_scan")
        r.experiment = ExperimentKind::DelayScan;
    else if (exp == "theta_scan")
        r.experiment = ExperimentKind::ThetaScan;
    else if (exp == "ratio_sweep")
        r.experiment = ExperimentKind::RatioSweep;
    else
        fail("run.experiment",
             "must be \"spectrum\", \"delay_scan\", \"theta_scan\", or \"ratio_sweep\"");

    switch (r.experiment) {
    case ExperimentKind::Spectrum:
        check_keys(jr, "run", {"experiment", "path", "shots", "seed", "threads"});
        break;
    case ExperimentKind::DelayScan:
        check_keys(jr, "run",
                   {"experiment", "path", "shots", "seed", "threads", "delay_list_fs"});
        break;
    case ExperimentKind::ThetaScan:
        check_keys(jr, "run",
                   {"experiment", "path", "shots", "seed", "threads", "theta_list_pi",
                    "alpha_rad", "beta_fs"});
        break;
    case ExperimentKind::RatioSweep:
        check_keys(jr, "run", {"experiment", "path", "seed", "threads",
                               "mean_photons_list"});
        break;
    }

    const std::string path = get_string_or(jr, "run", "path", "moments");
    if (path == "moments")
        r.path = RunPath::Moments;
    else if (path == "ensemble")
        r.path = RunPath::Ensemble;
    else
        fail("run.path", "must be \"moments\" or \"ensemble\"");

    if (src.kind == SourceKind::Coherent && r.path == RunPath::Ensemble)
        fail("run.path", "a coherent source is deterministic; use \"moments\"");

    if (r.path == RunPath::Ensemble) {
        const long shots = get_integer(jr, "run", "shots");
        if (shots < 1 || shots > 100000000L) fail("run.shots", "must lie in [1, 1e8]");
        r.shots = shots;
    } else if (find(jr, "shots")) {
        fail("run.shots", "only applies to the ensemble path");
    }

    if (const json* js = find(jr, "seed")) {
        if (!js->is_number_integer() ||
            (!js->is_number_unsigned() && js->get<long long>() < 0))
            fail("run.seed", "must be a non-negative integer");
        r.seed = js->get<std::uint64_t>();
    }

    const long threads = find(jr, "threads") ? get_integer(jr, "run", "threads") : 1;
    if (threads < 1 || threads > 256) fail("run.threads", "must lie in [1, 256]");
    r.threads = int(threads);

    switch (r.experiment) {
    case ExperimentKind::Spectrum:
        break;
    case ExperimentKind::DelayScan:
        r.delay_list = get_number_list(jr, "run", "delay_list_fs", 100000);
        break;
    case ExperimentKind::ThetaScan:
        r.theta_list_pi = get_number_list(jr, "run", "theta_list_pi", 100000);
        if (find(jr, "alpha_rad")) {
            r.alpha_rad = get_number(jr, "run", "alpha_rad");
            if (!(r.alpha_rad >= 0.0)) fail("run.alpha_rad", "must be >= 0");
        } else if (src.kind != SourceKind::Squeezed) {
            fail("run.alpha_rad",
                 "required here: the default comes from the coherent-term null of a "
                 "squeezed source");
        }
        if (find(jr, "beta_fs")) {
            r.beta_fs = get_number(jr, "run", "beta_fs");
            if (r.beta_fs == 0.0) fail("run.beta_fs", "must be non-zero");
        }
        break;
    case ExperimentKind::RatioSweep:
        r.photon_list = get_number_list(jr, "run", "mean_photons_list", 1000);
        for (double v : r.photon_list)
            if (!(v > 0.0)) fail("run.mean_photons_list", "entries must be > 0");
        if (src.kind != SourceKind::Squeezed)
            fail("run.experiment", "ratio_sweep requires source.kind \"squeezed\"");
        if (src.profile != SourceProfile::Flat)
            fail("run.experiment", "ratio_sweep requires source.profile \"flat\"");
        if (r.path != RunPath::Moments)
            fail("run.path", "ratio_sweep runs on the moment path");
        if (!(src.pump_linewidth + det.fwhm > 0.0))
            fail("run.experiment",
                 "ratio_sweep needs a positive pump linewidth or detector width");
        break;
    }

    if (r.experiment != ExperimentKind::Spectrum) {
        if (!mask.zero)
            fail("mask.type", "scans drive the mask themselves; set mask.type \"none\"");
        if (mask.pixels > 0)
            fail("mask.pixels", "scans drive the mask themselves");
    }
    return r;
}

} // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config: not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
    check_keys(j, "config", {"grid", "source", "mask", "detector", "run"});

    ExperimentConfig cfg;
    cfg.grid = parse_grid(j);
    cfg.source = parse_source(j, cfg.grid);
    cfg.mask = parse_mask(j, cfg.grid);
    cfg.detector = parse_detector(j, cfg.grid);
    cfg.run = parse_run(j, cfg.source, cfg.mask, cfg.detector);
    cfg.config_hash = fnv1a_hash(json_text);
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("config: cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
    json j;

    json& jg = j["grid"];
    jg["n_modes"] = cfg.grid.n_modes;
    jg["pump_frequency_rad_per_fs"] = cfg.grid.pump_frequency;
    jg["half_span_rad_per_fs"] = cfg.grid.half_span;

    json& js = j["source"];
    switch (cfg.source.kind) {
    case SourceKind::Squeezed: js["kind"] = "squeezed"; break;
    case SourceKind::Coherent: js["kind"] = "coherent"; break;
    case SourceKind::Uncorrelated: js["kind"] = "uncorrelated"; break;
    }
    js["profile"] = cfg.source.profile == SourceProfile::Gaussian ? "gaussian" : "flat";
    js["mean_photons"] = cfg.source.mean_photons;
    if (cfg.source.profile == SourceProfile::Gaussian)
        js["profile_fwhm_rad_per_fs"] = cfg.source.profile_fwhm;
    else
        js["profile_width_rad_per_fs"] = cfg.source.profile_width;
    js["pump_shape"] =
        cfg.source.pump_shape == LineShape::Gaussian ? "gaussian" : "lorentzian";
    if (cfg.source.kind != SourceKind::Coherent) {
        js["pump_linewidth_rad_per_fs"] = cfg.source.pump_linewidth;
        js["envelope_jitter"] = cfg.source.envelope_jitter;
        js["carrier_scaling"] = cfg.source.carrier_scaling;
    }

    if (!cfg.mask.zero || cfg.mask.pixels > 0) {
        json& jm = j["mask"];
        if (!cfg.mask.csv_path.empty()) {
            jm["type"] = "sampled_csv";
            jm["path"] = cfg.mask.csv_path;
        } else if (const auto* d = std::get_if<SplitDelayMask>(&cfg.mask.descriptor.node)) {
            jm["type"] = "split_delay";
            jm["tau_fs"] = d->tau_fs;
        } else if (const auto* s = std::get_if<SinusoidalMask>(&cfg.mask.descriptor.node)) {
            jm["type"] = "sinusoidal";
            jm["alpha_rad"] = s->alpha_rad;
            jm["beta_fs"] = s->beta_fs;
            jm["theta_rad"] = s->theta_rad;
        } else if (const auto* p = std::get_if<PolynomialMask>(&cfg.mask.descriptor.node)) {
            jm["type"] = "polynomial";
            jm["coeffs"] = p->coeffs;
        } else if (std::holds_alternative<ZeroMask>(cfg.mask.descriptor.node)) {
            jm["type"] = "none";
        } else {
            throw std::invalid_argument(
                "config: this mask descriptor has no configuration-file form");
        }
        if (cfg.mask.pixels > 0) jm["pixels"] = cfg.mask.pixels;
    }

    json& jd = j["detector"];
    jd["fwhm_rad_per_fs"] = cfg.detector.fwhm;
    jd["shape"] = cfg.detector.shape == LineShape::Lorentzian ? "lorentzian" : "gaussian";

    json& jr = j["run"];
    switch (cfg.run.experiment) {
    case ExperimentKind::Spectrum: jr["experiment"] = "spectrum"; break;
    case ExperimentKind::DelayScan: jr["experiment"] = "delay_scan"; break;
    case ExperimentKind::ThetaScan: jr["experiment"] = "theta_scan"; break;
    case ExperimentKind::RatioSweep: jr["experiment"] = "ratio_sweep"; break;
    }
    jr["path"] = cfg.run.path == RunPath::Ensemble ? "ensemble" : "moments";
    if (cfg.run.path == RunPath::Ensemble) jr["shots"] = cfg.run.shots;
    jr["seed"] = cfg.run.seed;
    jr["threads"] = cfg.run.threads;
    switch (cfg.run.experiment) {
    case ExperimentKind::Spectrum:
        break;
    case ExperimentKind::DelayScan:
        jr["delay_list_fs"] = cfg.run.delay_list;
        break;
    case ExperimentKind::ThetaScan:
        jr["theta_list_pi"] = cfg.run.theta_list_pi;
        if (std::isfinite(cfg.run.alpha_rad)) jr["alpha_rad"] = cfg.run.alpha_rad;
        if (std::isfinite(cfg.run.beta_fs)) jr["beta_fs"] = cfg.run.beta_fs;
        break;
    case ExperimentKind::RatioSweep:
        jr["mean_photons_list"] = cfg.run.photon_list;
        break;
    }

    return j.dump(2) + "\n";
}

double fit_fwhm(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3)
        throw std::invalid_argument("fwhm fit needs at least three equal-length samples");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            throw std::invalid_argument("fwhm fit needs strictly ascending abscissae");

    const std::size_t pk =
        std::size_t(std::max_element(y.begin(), y.end()) - y.begin());
    const double half = 0.5 * y[pk];
    if (!(half > 0.0)) throw std::runtime_error("fwhm fit: peak is not positive");

    double left = 0.0;
    bool found = false;
    for (std::size_t i = pk; i-- > 0;) {
        if (y[i] < half && y[i + 1] >= half) {
            left = x[i] + (half - y[i]) * (x[i + 1] - x[i]) / (y[i + 1] - y[i]);
            found = true;
            break;
        }
    }
    if (!found) throw std::runtime_error("fwhm fit: no crossing left of the peak");

    double right = 0.0;
    found = false;
    for (std::size_t i = pk + 1; i < y.size(); ++i) {
        if (y[i] < half && y[i - 1] >= half) {
            right = x[i - 1] + (half - y[i - 1]) * (x[i] - x[i - 1]) / (y[i] - y[i - 1]);
            found = true;
            break;
        }
    }
    if (!found) throw std::runtime_error("fwhm fit: no crossing right of the peak");
    return right - left;
}

double tl_pulse_duration(const SpectralEnvelope& envelope) {
    const SpectralGrid& g = envelope.grid;
    const int n = g.n_modes();
    std::size_t len = 4096;
    while (len < std::size_t(n) * 128) len <<= 1;
    std::vector<std::complex<double>> a(len, {0.0, 0.0});
    for (int i = 0; i < n; ++i)
        a[std::size_t(i)] = {envelope.amplitude[std::size_t(i)], 0.0};
    const auto f = fourier_transform(a, false);

    // Unwrap the cyclic transform so time runs ascending through zero.
    const double dt = 2.0 * std::numbers::pi / (double(len) * g.spacing());
    const std::size_t half = len / 2;
    std::vector<double> t(len);
    std::vector<double> inten(len);
    for (std::size_t j = 0; j < len; ++j) {
        t[j] = (double(j) - double(half)) * dt;
        inten[j] = std::norm(f[(j + half) % len]);
    }
    return fit_fwhm(t, inten);
}

SpectralGrid build_grid(const GridConfig& grid) {
    return SpectralGrid(grid.pump_frequency, grid.half_span, grid.n_modes);
}

SpectralEnvelope build_envelope(const ExperimentConfig& cfg) {
    const SpectralGrid g = build_grid(cfg.grid);
    if (cfg.source.profile == SourceProfile::Gaussian)
        return gaussian_envelope(g, g.degenerate_frequency(), cfg.source.profile_fwhm,
                                 cfg.source.mean_photons);
    const double width =
        cfg.source.profile_width > 0.0 ? cfg.source.profile_width : 2.0 * g.half_span();
    return flat_envelope(g, width, cfg.source.mean_photons);
}

SqueezedVacuumSpec build_source(const ExperimentConfig& cfg) {
    const SpectralEnvelope env = build_envelope(cfg);
    SqueezedVacuumSpec spec = squeezing_from_photon_profile(
        env.grid, env.grid.pump_frequency(), pair_photon_profile(env));
    spec.pump_linewidth = cfg.source.pump_linewidth;
    spec.pump_shape = cfg.source.pump_shape;
    spec.envelope_jitter = cfg.source.envelope_jitter;
    spec.carrier_scaling = cfg.source.carrier_scaling;
    return spec;
}

PhaseMask build_mask(const ExperimentConfig& cfg, const SpectralGrid& grid) {
    PhaseMask m = cfg.mask.csv_path.empty()
                      ? realize_descriptor(grid, cfg.mask.descriptor)
                      : read_mask_csv(grid, cfg.mask.csv_path);
    if (cfg.mask.pixels > 0) m = pixelate_mask(m, cfg.mask.pixels);
    return m;
}

SfgSpectrum run_point(const ExperimentConfig& cfg, const PhaseMask& mask) {
    switch (cfg.source.kind) {
    case SourceKind::Coherent:
        return convolve_response(sfg_coherent(coherent_pulse(build_envelope(cfg)), mask),
                                 cfg.detector);
    case SourceKind::Squeezed: {
        const SqueezedVacuumSpec spec = build_source(cfg);
        if (cfg.run.path == RunPath::Moments)
            return sfg_moment_path(spec, mask, cfg.detector);
        return sfg_ensemble(spec, mask, cfg.run.shots, cfg.run.seed, cfg.detector,
                            EnsembleKind::PairCorrelated, cfg.run.threads);
    }
    case SourceKind::Uncorrelated: {
        const SqueezedVacuumSpec spec = build_source(cfg);
        if (cfg.run.path == RunPath::Moments) {
            auto m = squeezed_moments(spec);
            for (auto& p : m.pairing) p = {0.0, 0.0};
            return sfg_gaussian_decomposition(
                m, mask, PumpLine{spec.pump_linewidth, spec.pump_shape}, cfg.detector);
        }
        return sfg_ensemble(spec, mask, cfg.run.shots, cfg.run.seed, cfg.detector,
                            EnsembleKind::Uncorrelated, cfg.run.threads);
    }
    }
    throw std::logic_error("unhandled source kind");
}

namespace {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("failed writing output file: " + path);
}

/// One comment line embedded at the top of every CSV so any data file can
/// be traced back to the exact config (by hash), seed, and code version
/// that produced it.
std::string csv_provenance(const ExperimentConfig& cfg) {
    char hex[24];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(cfg.config_hash));
    std::string line = "# version=";
    line += library_version();
    line += " config=";
    line += hex;
    line += " seed=";
    line += std::to_string(cfg.run.seed);
    if (cfg.run.path == RunPath::Ensemble) {
        line += " shots=";
        line += std::to_string(cfg.run.shots);
    }
    line += '\n';
    return line;
}

void write_spectrum_csv(const std::string& path, const ExperimentConfig& cfg,
                        const SfgSpectrum& s) {
    std::string text = csv_provenance(cfg);
    text += "omega_rad_per_fs,lambda_nm,I_total,I_q,I_c,stderr\n";
    for (int q = 0; q < s.size(); ++q) {
        const double w = s.omega(q);
        const double se =
            s.stderr_total.empty() ? 0.0 : s.stderr_total[std::size_t(q)];
        text += format_g17(w);
        text += ',';
        text += format_g17(angular_to_wavelength(w));
        text += ',';
        text += format_g17(s.total[std::size_t(q)]);
        text += ',';
        text += format_g17(s.quantum[std::size_t(q)]);
        text += ',';
        text += format_g17(s.classical[std::size_t(q)]);
        text += ',';
        text += format_g17(se);
        text += '\n';
    }
    write_text(path, text);
}

struct ScanRow {
    double x;
    const char* unit;
    double total;
    double quantum;
    double classical;
    double err;
};

void write_scan_csv(const std::string& path, const ExperimentConfig& cfg,
                    const std::vector<ScanRow>& rows) {
    std::string text = csv_provenance(cfg);
    text += "x,x_unit,I_total,I_q,I_c,stderr\n";
    for (const ScanRow& r : rows) {
        text += format_g17(r.x);
        text += ',';
        text += r.unit;
        text += ',';
        text += format_g17(r.total);
        text += ',';
        text += format_g17(r.quantum);
        text += ',';
        text += format_g17(r.classical);
        text += ',';
        text += format_g17(r.err);
        text += '\n';
    }
    write_text(path, text);
}

json provenance(const ExperimentConfig& cfg) {
    json j;
    j["version"] = library_version();
    char hex[24];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(cfg.config_hash));
    j["config_hash"] = hex;
    j["path"] = cfg.run.path == RunPath::Ensemble ? "ensemble" : "moments";
    j["seed"] = cfg.run.seed;
    if (cfg.run.path == RunPath::Ensemble) j["shots"] = cfg.run.shots;
    const SpectralGrid g = build_grid(cfg.grid);
    j["grid"] = {{"n_modes", cfg.grid.n_modes},
                 {"pump_frequency_rad_per_fs", cfg.grid.pump_frequency},
                 {"half_span_rad_per_fs", cfg.grid.half_span},
                 {"spacing_rad_per_fs", g.spacing()}};
    return j;
}

void write_summary(const std::filesystem::path& dir, const json& j) {
    write_text((dir / "summary.json").string(), j.dump(2) + "\n");
}

void run_spectrum_experiment(const ExperimentConfig& cfg,
                             const std::filesystem::path& dir) {
    const SpectralGrid grid = build_grid(cfg.grid);
    const PhaseMask mask = build_mask(cfg, grid);
    const SfgSpectrum s = run_point(cfg, mask);
    write_spectrum_csv((dir / "spectrum.csv").string(), cfg, s);

    json j = provenance(cfg);
    j["experiment"] = "spectrum";
    const std::size_t peak = std::size_t(
        std::max_element(s.total.begin(), s.total.end()) - s.total.begin());
    j["peak_total"] = s.total[peak];
    j["peak_omega_rad_per_fs"] = s.omega(int(peak));
    const std::size_t center = std::size_t(grid.n_modes() - 1);
    j["center_quantum"] = s.quantum[center];
    j["center_classical"] = s.classical[center];
    if (s.classical[center] > 0.0)
        j["center_quantum_over_classical"] = s.quantum[center] / s.classical[center];
    else
        j["center_quantum_over_classical"] = nullptr;
    double it = 0.0, iq = 0.0, ic = 0.0;
    for (int q = 0; q < s.size(); ++q) {
        it += s.total[std::size_t(q)];
        iq += s.quantum[std::size_t(q)];
        ic += s.classical[std::size_t(q)];
    }
    j["integrated_total"] = it * s.spacing;
    j["integrated_quantum"] = iq * s.spacing;
    j["integrated_classical"] = ic * s.spacing;
    try {
        std::vector<double> omegas(std::size_t(s.size()));
        for (int q = 0; q < s.size(); ++q) omegas[std::size_t(q)] = s.omega(q);
        j["total_fwhm_rad_per_fs"] = fit_fwhm(omegas, s.total);
    } catch (const std::exception&) {
        j["total_fwhm_rad_per_fs"] = nullptr;
    }
    write_summary(dir, j);
}

void run_delay_scan(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
    const SpectralGrid grid = build_grid(cfg.grid);
    const std::size_t center = std::size_t(grid.n_modes() - 1);

    const SfgSpectrum ref = run_point(cfg, zero_mask(grid));
    const double norm = ref.total[center];
    if (!(norm > 0.0))
        throw std::runtime_error("zero-mask reference intensity vanished at the line center");

    std::vector<ScanRow> rows;
    rows.reserve(cfg.run.delay_list.size());
    for (double x : cfg.run.delay_list) {
        // x is the relative delay between the two spectral halves; the mask
        // slope is half of it on either side of the degeneracy point.
        const PhaseMask mask = split_delay_mask(grid, grid.pump_frequency(), 0.5 * x);
        const SfgSpectrum s = run_point(cfg, mask);
        rows.push_back({x, "fs", s.total[center] / norm, s.quantum[center] / norm,
                        s.classical[center] / norm,
                        s.stderr_total.empty() ? 0.0 : s.stderr_total[center] / norm});
    }
    write_scan_csv((dir / "scan.csv").string(), cfg, rows);

    json j = provenance(cfg);
    j["experiment"] = "delay_scan";
    j["normalization_total"] = norm;

    std::vector<std::pair<double, double>> pts;
    pts.reserve(rows.size());
    for (const ScanRow& r : rows) pts.emplace_back(r.x, r.quantum);
    std::sort(pts.begin(), pts.end());
    std::vector<double> vx, vq;
    vx.reserve(pts.size());
    vq.reserve(pts.size());
    for (const auto& p : pts) {
        vx.push_back(p.first);
        vq.push_back(p.second);
    }
    try {
        j["quantum_fwhm_fs"] = fit_fwhm(vx, vq);
    } catch (const std::exception&) {
        j["quantum_fwhm_fs"] = nullptr;
    }
    try {
        j["tl_intensity_fwhm_fs"] = tl_pulse_duration(build_envelope(cfg));
    } catch (const std::exception&) {
        j["tl_intensity_fwhm_fs"] = nullptr;
    }
    const auto near = std::min_element(rows.begin(), rows.end(),
                                       [](const ScanRow& a, const ScanRow& b) {
                                           return std::abs(a.x) < std::abs(b.x);
                                       });
    const auto far = std::max_element(rows.begin(), rows.end(),
                                      [](const ScanRow& a, const ScanRow& b) {
                                          return std::abs(a.x) < std::abs(b.x);
                                      });
    if (near->quantum > 0.0)
        j["edge_suppression"] = far->quantum / near->quantum;
    else
        j["edge_suppression"] = nullptr;
    write_summary(dir, j);
}

void run_theta_scan(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
    const SpectralGrid grid = build_grid(cfg.grid);
    const std::size_t center = std::size_t(grid.n_modes() - 1);

    double beta = cfg.run.beta_fs;
    if (std::isnan(beta)) beta = 12.0 * std::numbers::pi / grid.half_span();
    double alpha = cfg.run.alpha_rad;
    if (std::isnan(alpha)) {
        const auto m = squeezed_moments(build_source(cfg));
        alpha = sinusoidal_null_alpha(m, beta, std::numbers::pi / 2.0,
                                      std::numbers::pi, 1e-6);
    }

    const SfgSpectrum ref = run_point(cfg, zero_mask(grid));
    const double norm = ref.total[center];
    if (!(norm > 0.0))
        throw std::runtime_error("zero-mask reference intensity vanished at the line center");

    std::vector<ScanRow> rows;
    rows.reserve(cfg.run.theta_list_pi.size());
    for (double t : cfg.run.theta_list_pi) {
        // Canonicalize into (-1, 1] turns before converting to radians:
        // offsets a whole period apart give bit-identical masks, and the
        // sign-symmetric window keeps theta(-t) = -theta(t) exact so the
        // scan's mirror symmetry holds bitwise for symmetric envelopes.
        double tc = std::fmod(t, 2.0);
        if (tc > 1.0) tc -= 2.0;
        if (tc <= -1.0) tc += 2.0;
        const double theta = tc * std::numbers::pi;
        const PhaseMask mask =
            sinusoidal_mask(grid, grid.pump_frequency(), alpha, beta, theta);
        const SfgSpectrum s = run_point(cfg, mask);
        rows.push_back({t, "pi", s.total[center] / norm, s.quantum[center] / norm,
                        s.classical[center] / norm,
                        s.stderr_total.empty() ? 0.0 : s.stderr_total[center] / norm});
    }
    write_scan_csv((dir / "scan.csv").string(), cfg, rows);

    json j = provenance(cfg);
    j["experiment"] = "theta_scan";
    j["alpha_rad"] = alpha;
    j["beta_fs"] = beta;
    j["normalization_total"] = norm;
    const auto lo = std::min_element(rows.begin(), rows.end(),
                                     [](const ScanRow& a, const ScanRow& b) {
                                         return a.total < b.total;
                                     });
    const auto hi = std::max_element(rows.begin(), rows.end(),
                                     [](const ScanRow& a, const ScanRow& b) {
                                         return a.total < b.total;
                                     });
    j["total_min"] = lo->total;
    j["total_max"] = hi->total;
    j["total_min_over_max"] = hi->total > 0.0 ? json(lo->total / hi->total) : json();
    j["theta_at_min_pi"] = lo->x;
    double qmin = rows.front().quantum, qmax = rows.front().quantum;
    for (const ScanRow& r : rows) {
        qmin = std::min(qmin, r.quantum);
        qmax = std::max(qmax, r.quantum);
    }
    j["quantum_min"] = qmin;
    j["quantum_max"] = qmax;
    write_summary(dir, j);
}

void run_ratio_sweep(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
    const SpectralGrid grid = build_grid(cfg.grid);
    const std::size_t center = std::size_t(grid.n_modes() - 1);
    const double width = cfg.source.profile_width > 0.0 ? cfg.source.profile_width
                                                        : 2.0 * grid.half_span();

    std::vector<ScanRow> rows;
    rows.reserve(cfg.run.photon_list.size());
    json points = json::array();
    for (double photons : cfg.run.photon_list) {
        ExperimentConfig point_cfg = cfg;
        point_cfg.source.mean_photons = photons;
        const SfgSpectrum s = run_point(point_cfg, zero_mask(grid));
        if (!(s.classical[center] > 0.0))
            throw std::runtime_error("classical term vanished at the line center");
        const double measured = s.quantum[center] / s.classical[center];
        const double formula = qc_ratio_formula(width, cfg.source.pump_linewidth,
                                                cfg.detector.fwhm, photons);
        rows.push_back({photons, "photons", s.total[center], s.quantum[center],
                        s.classical[center], 0.0});
        points.push_back({{"mean_photons", photons},
                          {"measured_ratio", measured},
                          {"formula_ratio", formula},
                          {"deviation", measured / formula - 1.0}});
    }
    write_scan_csv((dir / "scan.csv").string(), cfg, rows);

    json j = provenance(cfg);
    j["experiment"] = "ratio_sweep";
    j["bandwidth_rad_per_fs"] = width;
    j["pump_linewidth_rad_per_fs"] = cfg.source.pump_linewidth;
    j["detector_fwhm_rad_per_fs"] = cfg.detector.fwhm;
    j["points"] = points;
    write_summary(dir, j);
}

} // namespace

void run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    switch (cfg.run.experiment) {
    case ExperimentKind::Spectrum:
        run_spectrum_experiment(cfg, dir);
        return;
    case ExperimentKind::DelayScan:
        run_delay_scan(cfg, dir);
        return;
    case ExperimentKind::ThetaScan:
        run_theta_scan(cfg, dir);
        return;
    case ExperimentKind::RatioSweep:
        run_ratio_sweep(cfg, dir);
        return;
    }
    throw std::logic_error("unhandled experiment kind");
}

} // namespace sfglab
