#pragma once

#include <complex>
#include <string>
#include <vector>

#include "sfglab/fields.hpp"

namespace sfglab {

/// Reference O(n^2) evaluation of the two-photon sum
/// C[q] = spacing * sum_{i+j=q} E_i E_j, q = 0 .. 2n-2, summed directly in
/// index order. Independent of the FFT route, so the two can cross-check
/// each other.
std::vector<std::complex<double>> direct_pair_sum(
    const std::vector<std::complex<double>>& field, double spacing);

/// Second moments of one down-converted mode pair computed in the photon
/// number ladder, sum_k (i tanh r)^k / cosh r |k,k>, truncated at n_max
/// photons per mode. Closed forms for comparison: occupation sinh^2 r,
/// pairing i sinh r cosh r.
struct FockLadderMoments {
    double occupation = 0.0;
    std::complex<double> pairing{0.0, 0.0};
    double cross_occupation = 0.0;  ///< <n_hi n_lo>; n^2 + |m|^2 for this family
    double norm_deficit = 0.0;      ///< state norm neglected by the truncation
};

/// Throws if n_max is outside [1, 256] or the neglected norm reaches 1e-10,
/// so a truncation too coarse for the requested squeeze fails loudly
/// instead of returning biased moments.
FockLadderMoments fock_two_mode_moments(double r, int n_max);

/// First alpha > 0 at which the coherent pair term of a sinusoidal mask
/// alpha * sin(beta * xi + theta) reaches a local minimum, located by a
/// coarse scan over (0, alpha_max] refined by golden-section search to
/// width tol. Throws if no interior minimum lies in the range.
double sinusoidal_null_alpha(const GaussianStateMoments& moments, double beta_fs,
                             double theta_rad, double alpha_max, double tol);

/// One self-check outcome; detail holds the measured figure of merit.
struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Fast internal cross-checks wired to the command-line --verify flag:
/// grid pairing symmetry, FFT against the direct pair sum, ensemble
/// statistics against the moment path, blur mass conservation, the photon
/// ladder against closed forms, the sinusoidal null position, and the
/// closed-form intensity ratio.
std::vector<CheckResult> verify_all();

} // namespace sfglab
