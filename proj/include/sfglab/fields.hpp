#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "sfglab/spectral.hpp"

namespace sfglab {

enum class LineShape { Gaussian, Lorentzian };

/// Deterministic complex spectral amplitudes of a classical pulse,
/// |amplitude|^2 = photons per mode.
struct CoherentField {
    SpectralGrid grid;
    std::vector<std::complex<double>> amplitude;
};

CoherentField coherent_pulse(const SpectralEnvelope& envelope);

/// Broadband squeezed-vacuum source: a strong narrow pump at pump_frequency
/// drives pairwise down-conversion into grid modes that are correlated across
/// the degeneracy point. squeeze_per_pair holds one squeeze parameter r >= 0
/// per mode pair, ordered from the degeneracy point outward.
struct SqueezedVacuumSpec {
    SpectralGrid grid;
    double pump_frequency = 0.0;
    double pump_linewidth = 0.0;   ///< FWHM in rad/fs; 0 means monochromatic
    LineShape pump_shape = LineShape::Lorentzian;
    std::vector<double> squeeze_per_pair;
    double envelope_jitter = 0.0;  ///< log-amplitude sigma of shot-to-shot gain
    /// Apply the sqrt(omega / omega_deg) carrier amplitude ratio per mode.
    /// Off by default: below 1.5% across a 60 nm band around 1064 nm.
    bool carrier_scaling = false;
};

/// Same squeeze parameter for every pair.
SqueezedVacuumSpec uniform_squeezing(const SpectralGrid& grid, double pump_frequency,
                                     double r);

/// Squeeze profile chosen so the per-pair mean photon number matches the
/// given profile: r_p = asinh(sqrt(n_p)).
SqueezedVacuumSpec squeezing_from_photon_profile(const SpectralGrid& grid,
                                                 double pump_frequency,
                                                 const std::vector<double>& photons_per_pair);

/// Per-pair mean photon numbers implied by an amplitude envelope,
/// n_p = A(hi_p) * A(lo_p).
std::vector<double> pair_photon_profile(const SpectralEnvelope& envelope);

/// Second moments of the zero-mean Gaussian source state: occupation
/// n_i = <a_i^dag a_i> per mode and anomalous correlation m_p = <a_hi a_lo>
/// per pair. For squeeze parameter r they are sinh^2(r) and
/// i sinh(r) cosh(r); all other second moments vanish.
struct GaussianStateMoments {
    SpectralGrid grid;
    std::vector<double> occupation;
    std::vector<std::complex<double>> pairing;
};

GaussianStateMoments squeezed_moments(const SqueezedVacuumSpec& spec);

/// Pair index served by mode i (0 = innermost pair at the degeneracy point).
int pair_of_mode(const SpectralGrid& grid, int i);

/// One stochastic realization of the source field.
///
/// Pairs are drawn as correlated circular Gaussians: for pair (hi, lo),
/// E_hi = c and E_lo = i conj(c) with <|c|^2> = sinh^2 r, which reproduces
/// the occupation exactly and an anomalous correlation i sinh^2 r — the
/// phase of the true moment with magnitude sinh^2 r instead of
/// sinh r cosh r. A finite pump linewidth appears as a per-shot pump
/// detuning, quantized to a whole number of grid bins and applied by
/// sliding the correlated diagonal; shot-to-shot gain jitter is a common
/// log-normal factor with unit mean square.
struct FieldRealization {
    std::vector<std::complex<double>> field;
    double detuning = 0.0;  ///< continuous pump offset drawn for this shot
    int bin_shift = 0;      ///< detuning actually applied, in grid bins
    double gain = 1.0;      ///< common amplitude factor from jitter
};

FieldRealization sample_field(const SqueezedVacuumSpec& spec, std::uint64_t seed,
                              std::uint64_t shot);

/// Control surrogate: same per-mode occupation, but every mode drawn
/// independently, so all pair correlations vanish. Gain jitter is kept;
/// pump detuning does not apply (there is no correlated diagonal to slide).
FieldRealization sample_uncorrelated_field(const SqueezedVacuumSpec& spec,
                                           std::uint64_t seed, std::uint64_t shot);

} // namespace sfglab
