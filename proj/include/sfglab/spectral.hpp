#pragma once

#include <stdexcept>
#include <vector>

namespace sfglab {

/// Vacuum speed of light in nm/fs. All angular frequencies in this library
/// are rad/fs, all times fs, all wavelengths nm.
inline constexpr double kSpeedOfLight = 299.792458;

double wavelength_to_angular(double lambda_nm);
double angular_to_wavelength(double omega);

/// Convert a small wavelength interval (e.g. a linewidth or bandwidth FWHM)
/// at center wavelength lambda0_nm to an angular-frequency interval:
/// dω = 2πc·dλ/λ0².
double fwhm_wavelength_to_angular(double lambda0_nm, double dlambda_nm);

/// Uniform angular-frequency grid symmetric about the degenerate frequency
/// s = ωp/2, with modes at the half-offsets s ± (k+1/2)·δω. There is no mode
/// at s itself, and every mode i has a mirror partner pair(i) = n-1-i whose
/// offset is the exact IEEE negation of offset(i): pair sums reproduce ωp
/// bit-exactly by construction, never through a floating subtraction.
class SpectralGrid {
public:
    SpectralGrid(double pump_frequency, double half_span, int n_modes);

    int n_modes() const { return n_; }
    int pair_count() const { return n_ / 2; }
    double degenerate_frequency() const { return degenerate_; }
    double pump_frequency() const { return 2.0 * degenerate_; }
    double half_span() const { return half_span_; }
    double spacing() const { return spacing_; }

    /// Signed offset of mode i from the degenerate frequency, (2i-n+1)·δω/2.
    double offset(int i) const { return double(2 * i - n_ + 1) * half_step_; }
    double frequency(int i) const { return degenerate_ + offset(i); }
    int pair(int i) const { return n_ - 1 - i; }

    /// Pairs are indexed by their positive-offset member: pair p couples
    /// modes hi_index(p) and lo_index(p), with pair_offset(p) > 0.
    int hi_index(int p) const { return n_ / 2 + p; }
    int lo_index(int p) const { return n_ / 2 - 1 - p; }
    double pair_offset(int p) const { return double(2 * p + 1) * half_step_; }

    bool operator==(const SpectralGrid& o) const {
        return degenerate_ == o.degenerate_ && half_span_ == o.half_span_ && n_ == o.n_;
    }
    bool operator!=(const SpectralGrid& o) const { return !(*this == o); }

private:
    double degenerate_;
    double half_span_;
    double spacing_;
    double half_step_;
    int n_;
};

/// Non-negative real spectral amplitude per mode, in units of the square
/// root of mean photon number per mode.
struct SpectralEnvelope {
    SpectralGrid grid;
    std::vector<double> amplitude;
};

/// A(ω) = sqrt(peak_photons)·exp(-2 ln2 (ω-center)²/fwhm²), so the photon
/// spectrum A² has the requested FWHM.
SpectralEnvelope gaussian_envelope(const SpectralGrid& grid, double center, double fwhm,
                                   double peak_photons);

/// Top-hat photon spectrum: A = sqrt(peak_photons) for |ω-s| <= width/2,
/// zero outside. Width is clipped to the grid span.
SpectralEnvelope flat_envelope(const SpectralGrid& grid, double width, double peak_photons);

} // namespace sfglab
