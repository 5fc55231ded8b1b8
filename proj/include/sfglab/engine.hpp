#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "sfglab/fields.hpp"
#include "sfglab/shaper.hpp"
#include "sfglab/spectral.hpp"

namespace sfglab {

/// Spectral response of the sum-frequency detector (monochromator plus
/// counter). fwhm = 0 means an ideal, infinitely narrow response.
struct DetectorResponse {
    double fwhm = 0.0;
    LineShape shape = LineShape::Gaussian;
};

/// Pump line used by the moment path; fwhm = 0 means monochromatic.
struct PumpLine {
    double fwhm = 0.0;
    LineShape shape = LineShape::Lorentzian;
};

/// Two-photon sum-frequency spectrum on the output grid
/// omega(q) = omega_base + q * spacing, q = 0 .. 2 n_modes - 2.
/// total = quantum + classical; quantum is the coherent pair contribution
/// |<C>|^2 that spectral phase can steer, classical is the incoherent
/// remainder <|C|^2> - |<C>|^2. stderr_total holds the per-bin standard
/// error of total for ensemble runs and is empty for deterministic paths.
struct SfgSpectrum {
    double omega_base = 0.0;
    double spacing = 0.0;
    std::vector<double> total;
    std::vector<double> quantum;
    std::vector<double> classical;
    std::vector<double> stderr_total;
    long shots = 0;

    double omega(int q) const { return omega_base + double(q) * spacing; }
    int size() const { return int(total.size()); }
};

/// Bin-integrated line-shape weights on a grid of `length` bins: weight j is
/// the probability mass of the shape (FWHM `fwhm`, centered on bin `center`)
/// falling inside bin j, renormalized to sum to one over the grid.
std::vector<double> bin_weights(LineShape shape, double fwhm, double spacing,
                                int length, int center);

/// Pair amplitude of the moment path: the mean two-photon sum
/// <C> = spacing * sum_i m(pair(i)) exp(i[phi_i + phi_pair(i)]), evaluated
/// mode by mode in index order. The sum counts each pair twice (both
/// orderings), matching the all-orderings convention of C itself.
std::complex<double> quantum_pair_amplitude(const GaussianStateMoments& moments,
                                            const PhaseMask& mask);

/// Sum-frequency spectrum of a deterministic classical pulse:
/// C(Omega) = spacing * sum_k E'_k E'_{Omega-k} with E' the masked field.
/// Everything is coherent, so quantum = total and classical = 0.
SfgSpectrum sfg_coherent(const CoherentField& field, const PhaseMask& mask);

/// Deterministic spectrum of a zero-mean Gaussian state from its second
/// moments: quantum(Omega) = |<C>|^2 spread over the pump line, classical
/// = 2 spacing^2 sum_k n_k n_{Omega-k} (the pair-exchange contraction),
/// both blurred by the detector response. The classical term ignores the
/// pump linewidth, a sub-bin effect for lines much narrower than the
/// source bandwidth.
SfgSpectrum sfg_gaussian_decomposition(const GaussianStateMoments& moments,
                                       const PhaseMask& mask, const PumpLine& pump,
                                       const DetectorResponse& detector);

/// Convenience wrapper: moments and pump line taken from the source spec.
SfgSpectrum sfg_moment_path(const SqueezedVacuumSpec& spec, const PhaseMask& mask,
                            const DetectorResponse& detector);

enum class EnsembleKind {
    PairCorrelated, ///< sample_field: correlated pairs, the source surrogate
    Uncorrelated,   ///< sample_uncorrelated_field: same occupation, no pairs
};

/// Monte-Carlo spectrum over `shots` field realizations. Shots are grouped
/// into fixed blocks of 64 whose partial sums are accumulated in shot order
/// and merged in block order, so results are bit-identical for any thread
/// count. quantum = |mean C|^2 is the estimator of the coherent term; its
/// pump-detuning wings scale with the squared bin probability rather than
/// the probability itself, unlike the moment path, so cross-path checks
/// should use a zero pump linewidth.
SfgSpectrum sfg_ensemble(const SqueezedVacuumSpec& spec, const PhaseMask& mask,
                         long shots, std::uint64_t seed,
                         const DetectorResponse& detector, EnsembleKind kind,
                         int threads);

/// Blur a spectrum with the detector response. Each source bin is
/// pre-divided by the kernel mass that stays on the grid before convolving,
/// so the summed intensity is conserved to rounding. Standard errors
/// propagate as if bins were independent. Throws if the response is wider
/// than the simulated span.
SfgSpectrum convolve_response(const SfgSpectrum& in, const DetectorResponse& detector);

/// Closed-form quantum/classical ratio at the line center for a flat source
/// of the given bandwidth:
/// ratio = bandwidth / (2 (pump_fwhm + detector_fwhm)) * (n + 1) / n,
/// with n the mean photon number per mode.
double qc_ratio_formula(double bandwidth, double pump_fwhm, double detector_fwhm,
                        double mean_photons);

} // namespace sfglab
