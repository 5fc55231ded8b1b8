#include "sfglab/spectral.hpp"

#include <cmath>
#include <numbers>

namespace sfglab {

double wavelength_to_angular(double lambda_nm) {
    if (!(lambda_nm > 0.0))
        throw std::invalid_argument("wavelength_to_angular: wavelength must be positive");
    return 2.0 * std::numbers::pi * kSpeedOfLight / lambda_nm;
}

double angular_to_wavelength(double omega) {
    if (!(omega > 0.0))
        throw std::invalid_argument("angular_to_wavelength: frequency must be positive");
    return 2.0 * std::numbers::pi * kSpeedOfLight / omega;
}

double fwhm_wavelength_to_angular(double lambda0_nm, double dlambda_nm) {
    if (!(lambda0_nm > 0.0) || !(dlambda_nm >= 0.0))
        throw std::invalid_argument("fwhm_wavelength_to_angular: bad interval");
    return 2.0 * std::numbers::pi * kSpeedOfLight * dlambda_nm / (lambda0_nm * lambda0_nm);
}

SpectralGrid::SpectralGrid(double pump_frequency, double half_span, int n_modes) {
    if (n_modes < 4 || n_modes % 2 != 0)
        throw std::invalid_argument("SpectralGrid: n_modes must be even and >= 4");
    if (!(half_span > 0.0))
        throw std::invalid_argument("SpectralGrid: half_span must be positive");
    if (!(pump_frequency > 0.0) || !(pump_frequency / 2.0 - half_span > 0.0))
        throw std::invalid_argument("SpectralGrid: grid would reach non-positive frequencies");
    degenerate_ = pump_frequency / 2.0;
    half_span_ = half_span;
    n_ = n_modes;
    spacing_ = 2.0 * half_span / n_modes;
    half_step_ = half_span / n_modes;
}

SpectralEnvelope gaussian_envelope(const SpectralGrid& grid, double center, double fwhm,
                                   double peak_photons) {
    if (!(fwhm > 0.0))
        throw std::invalid_argument("gaussian_envelope: fwhm must be positive");
    if (!(peak_photons >= 0.0))
        throw std::invalid_argument("gaussian_envelope: peak_photons must be non-negative");
    SpectralEnvelope env{grid, std::vector<double>(grid.n_modes())};
    const double amp = std::sqrt(peak_photons);
    const double k = 2.0 * std::numbers::ln2 / (fwhm * fwhm);
    for (int i = 0; i < grid.n_modes(); ++i) {
        const double d = grid.frequency(i) - center;
        env.amplitude[i] = amp * std::exp(-k * d * d);
    }
    return env;
}

SpectralEnvelope flat_envelope(const SpectralGrid& grid, double width, double peak_photons) {
    if (!(width > 0.0))
        throw std::invalid_argument("flat_envelope: width must be positive");
    if (!(peak_photons >= 0.0))
        throw std::invalid_argument("flat_envelope: peak_photons must be non-negative");
    SpectralEnvelope env{grid, std::vector<double>(grid.n_modes(), 0.0)};
    const double amp = std::sqrt(peak_photons);
    for (int i = 0; i < grid.n_modes(); ++i) {
        if (std::abs(grid.offset(i)) <= width / 2.0) env.amplitude[i] = amp;
    }
    return env;
}

} // namespace sfglab
