#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "sfglab/engine.hpp"

namespace sfglab {

/// Semantic version of the library and file formats.
const char* library_version();

/// FNV-1a 64-bit hash; summaries record it over the raw configuration text
/// so outputs can be traced back to the exact input file.
std::uint64_t fnv1a_hash(std::string_view bytes);

enum class SourceKind { Squeezed, Coherent, Uncorrelated };
enum class SourceProfile { Flat, Gaussian };
enum class RunPath { Moments, Ensemble };
enum class ExperimentKind { Spectrum, DelayScan, ThetaScan, RatioSweep };

struct GridConfig {
    int n_modes = 0;
    double pump_frequency = 0.0;  ///< rad/fs
    double half_span = 0.0;       ///< rad/fs around the degeneracy point
};

struct SourceConfig {
    SourceKind kind = SourceKind::Squeezed;
    SourceProfile profile = SourceProfile::Flat;
    double mean_photons = 1.0;    ///< peak photons per mode
    double profile_fwhm = 0.0;    ///< photon-number FWHM of a gaussian profile
    double profile_width = 0.0;   ///< width of a flat profile; 0 = full span
    double pump_linewidth = 0.0;
    LineShape pump_shape = LineShape::Lorentzian;
    double envelope_jitter = 0.0;
    bool carrier_scaling = false;  ///< sqrt(omega/omega_deg) amplitude ratio
};

struct MaskConfig {
    MaskDescriptor descriptor{ZeroMask{}};
    std::string csv_path;  ///< non-empty for a mask sampled from a CSV file
    int pixels = 0;        ///< > 0 quantizes the mask into that many blocks
    bool zero = true;
};

struct RunConfig {
    ExperimentKind experiment = ExperimentKind::Spectrum;
    RunPath path = RunPath::Moments;
    long shots = 0;
    std::uint64_t seed = 1;
    int threads = 1;
    std::vector<double> delay_list;     ///< fs between the two spectral halves
    std::vector<double> theta_list_pi;  ///< sinusoid offsets in units of pi
    double alpha_rad = std::numeric_limits<double>::quiet_NaN();  ///< NaN: oracle default
    double beta_fs = std::numeric_limits<double>::quiet_NaN();    ///< NaN: default
    std::vector<double> photon_list;
};

struct ExperimentConfig {
    GridConfig grid;
    SourceConfig source;
    MaskConfig mask;
    DetectorResponse detector;
    RunConfig run;
    std::uint64_t config_hash = 0;
};

/// Parse and validate a JSON configuration. Every error message names the
/// offending field. Throws std::invalid_argument.
ExperimentConfig parse_config(const std::string& json_text);

/// Read a configuration file and parse it.
ExperimentConfig load_config_file(const std::string& path);

/// Render a parsed configuration back to canonical JSON: native rad/fs
/// units, sorted keys, and only the fields that apply to the configured
/// source, mask, and experiment. parse(serialize(parse(x))) is the
/// identity on every field except config_hash, which tracks raw text.
std::string serialize_config(const ExperimentConfig& cfg);

/// Full width at half maximum of a single-peaked sampled curve, using
/// linear interpolation between the two half-maximum crossings. x must be
/// ascending. Throws if a crossing is missing on either side.
double fit_fwhm(const std::vector<double>& x, const std::vector<double>& y);

/// Intensity FWHM in fs of the shortest pulse the envelope supports,
/// obtained from a zero-padded Fourier transform of the amplitudes.
double tl_pulse_duration(const SpectralEnvelope& envelope);

/// Builders shared by the experiment drivers and by tests.
SpectralGrid build_grid(const GridConfig& grid);
SpectralEnvelope build_envelope(const ExperimentConfig& cfg);
SqueezedVacuumSpec build_source(const ExperimentConfig& cfg);
PhaseMask build_mask(const ExperimentConfig& cfg, const SpectralGrid& grid);

/// One spectrum under the configured source, path, and detector.
SfgSpectrum run_point(const ExperimentConfig& cfg, const PhaseMask& mask);

/// Run the configured experiment and write its outputs into out_dir
/// (created if needed): spectrum.csv or scan.csv, plus summary.json.
/// Scan intensities are normalized to the zero-mask value from the same
/// source and path; summaries carry fits, contrasts, and provenance.
void run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

} // namespace sfglab
