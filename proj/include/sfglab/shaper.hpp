#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "sfglab/spectral.hpp"

namespace sfglab {

struct MaskDescriptor;

/// Φ(ω) = 0.
struct ZeroMask {};

/// Φ(ω) = τ·|ω - ωp/2|. Splits the band at the degenerate frequency and
/// delays the two halves against each other by a total of 2τ.
struct SplitDelayMask {
    double tau_fs = 0.0;
};

/// Φ(ω) = α·sin(β·(ω - ωp/2) + θ). θ = 0 is antisymmetric about the
/// degenerate frequency, θ = ±π/2 symmetric.
struct SinusoidalMask {
    double alpha_rad = 0.0;
    double beta_fs = 0.0;
    double theta_rad = 0.0;
};

/// Φ(ω) = Σ_k coeffs[k]·(ω - ωp/2)^k, coefficients in fs^k.
struct PolynomialMask {
    std::vector<double> coeffs;
};

/// Staircase approximation of a source mask: n_pixels contiguous blocks of
/// modes, each block carrying the source phase sampled at its center
/// frequency. A remainder of n_modes % n_pixels is absorbed one extra mode
/// per leading block. source holds exactly one descriptor (vector only to
/// allow the recursive type).
struct PixelatedMask {
    int n_pixels = 0;
    std::vector<MaskDescriptor> source;
};

/// Sum of the phases of the parts.
struct CompositeMask {
    std::vector<MaskDescriptor> parts;
};

/// Phase given directly per mode (imported or programmatically built masks);
/// the stored array is the definition.
struct SampledMask {
    std::vector<double> phase;
};

struct MaskDescriptor {
    std::variant<ZeroMask, SplitDelayMask, SinusoidalMask, PolynomialMask, PixelatedMask,
                 CompositeMask, SampledMask>
        node;
};

/// Spectral phase mask: per-mode phase samples in rad (stored unwrapped)
/// plus the descriptor they were generated from. evaluate_descriptor
/// reproduces the array from the descriptor alone.
struct PhaseMask {
    SpectralGrid grid;
    std::vector<double> phase;
    MaskDescriptor descriptor;
};

PhaseMask zero_mask(const SpectralGrid& grid);
/// pump_frequency is redundant with the grid and is validated against it.
PhaseMask split_delay_mask(const SpectralGrid& grid, double pump_frequency, double tau_fs);
PhaseMask sinusoidal_mask(const SpectralGrid& grid, double pump_frequency, double alpha_rad,
                          double beta_fs, double theta_rad);
PhaseMask polynomial_mask(const SpectralGrid& grid, double pump_frequency,
                          std::vector<double> coeffs);
PhaseMask sampled_mask(const SpectralGrid& grid, std::vector<double> phase);
PhaseMask compose_masks(const std::vector<PhaseMask>& parts);
PhaseMask pixelate_mask(const PhaseMask& mask, int n_pixels);

/// Build a mask from a bare descriptor.
PhaseMask realize_descriptor(const SpectralGrid& grid, const MaskDescriptor& d);

/// Evaluate the descriptor's phase at offset xi = ω - ωp/2 (analytic forms
/// at arbitrary xi; sampled masks snap to the nearest mode).
double evaluate_descriptor(const MaskDescriptor& d, const SpectralGrid& grid, double xi);

/// E'(ω) = E(ω)·exp(iΦ(ω)).
std::vector<std::complex<double>> apply_mask(const std::vector<std::complex<double>>& field,
                                             const PhaseMask& mask);

/// CSV export with columns (omega_rad_per_fs, phase_rad_wrapped); phases are
/// wrapped to [-π, π) only here, the in-memory mask stays unwrapped.
void write_mask_csv(const PhaseMask& mask, const std::string& path);
/// Import a mask written by write_mask_csv; the result is a SampledMask and
/// keeps the wrapped values.
PhaseMask read_mask_csv(const SpectralGrid& grid, const std::string& path);

} // namespace sfglab
