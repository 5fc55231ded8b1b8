#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "sfglab/engine.hpp"
#include "sfglab/fft.hpp"
#include "sfglab/fields.hpp"
#include "sfglab/oracles.hpp"
#include "sfglab/shaper.hpp"

using namespace sfglab;

namespace {

SpectralGrid test_grid(int n = 32) {
    return SpectralGrid(wavelength_to_angular(532.0), 0.05, n);
}

} // namespace

TEST_CASE("direct pair sums agree with the FFT fast path") {
    const SpectralGrid g = test_grid(16);
    std::mt19937 gen(5);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<std::complex<double>> field;
    for (int i = 0; i < g.n_modes(); ++i) field.push_back({dist(gen), dist(gen)});

    const auto slow = direct_pair_sum(field, g.spacing());
    const auto fast = linear_autoconvolution(field);
    REQUIRE(int(slow.size()) == 2 * g.n_modes() - 1);
    double scale = 0.0;
    for (const auto& v : slow) scale = std::max(scale, std::abs(v));
    for (size_t k = 0; k < slow.size(); ++k)
        CHECK(std::abs(slow[k] - fast[k] * g.spacing()) <= 1e-12 * scale);
}

TEST_CASE("truncated photon ladder reproduces the closed-form moments") {
    {
        const FockLadderMoments m = fock_two_mode_moments(0.25, 48);
        CHECK(m.occupation == doctest::Approx(0.0638129826032).epsilon(1e-9));
        CHECK(std::norm(m.pairing) == doctest::Approx(0.0678850793519).epsilon(1e-9));
        CHECK(m.norm_deficit < 1e-10);
    }
    {
        const FockLadderMoments m = fock_two_mode_moments(0.5, 48);
        CHECK(m.occupation == doctest::Approx(0.271540317408).epsilon(1e-9));
        CHECK(std::norm(m.pairing) == doctest::Approx(0.345274461385).epsilon(1e-9));
    }
    {
        const FockLadderMoments m = fock_two_mode_moments(1.0, 48);
        // Ladder truncation at 48 rungs leaves residuals of a few 1e-10;
        // bounds carry a 5x margin over the exact truncation error.
        CHECK(std::abs(m.occupation - 1.3810978455418157) <= 1e-9);
        CHECK(std::abs(std::norm(m.pairing) - 3.2885291045020608) <= 2e-9);
        // |m|^2 - n (n + 1) = 0 for this state family.
        CHECK(std::abs(std::norm(m.pairing) -
                       m.occupation * (m.occupation + 1.0)) <= 1e-9);
        // The ladder correlator is purely imaginary like the closed form.
        CHECK(m.pairing.real() == 0.0);
    }
    // Both arms always hold the same photon number, so the photon-number
    // correlator collapses to <n^2> = n^2 + |m|^2 for this state family.
    for (double r : {0.25, 0.5, 1.0}) {
        const FockLadderMoments m = fock_two_mode_moments(r, 48);
        const double want = m.occupation * m.occupation + std::norm(m.pairing);
        CHECK(m.cross_occupation == doctest::Approx(want).epsilon(1e-8));
    }
    // A truncation too short for r = 1 must refuse rather than round down.
    CHECK_THROWS_AS(fock_two_mode_moments(1.0, 40), std::runtime_error);
    CHECK_THROWS_AS(fock_two_mode_moments(-0.1, 48), std::invalid_argument);
    CHECK_THROWS_AS(fock_two_mode_moments(0.5, 0), std::invalid_argument);
}

TEST_CASE("sinusoidal null search finds the first Bessel zero") {
    const SpectralGrid g = test_grid(2048);
    const SqueezedVacuumSpec spec = uniform_squeezing(g, g.pump_frequency(), 1.0);
    const GaussianStateMoments m = squeezed_moments(spec);
    // With quadrature offset the pair phase is 2 alpha cos(beta xi); an
    // integer number of oscillation periods across the span makes the mode
    // sum a Bessel J0 of 2 alpha, whose first zero sits at alpha
    // = 1.2024127788478864.
    const double beta = 12.0 * std::numbers::pi / g.half_span();
    const double alpha =
        sinusoidal_null_alpha(m, beta, std::numbers::pi / 2.0, std::numbers::pi, 1e-8);
    CHECK(alpha == doctest::Approx(1.2024127788478864).epsilon(1e-6));
    // No interior minimum below the first zero.
    CHECK_THROWS_AS(sinusoidal_null_alpha(m, beta, std::numbers::pi / 2.0, 1.0, 1e-8),
                    std::runtime_error);
}

TEST_CASE("built-in self-checks all pass") {
    const auto results = verify_all();
    REQUIRE(!results.empty());
    for (const CheckResult& c : results) {
        INFO(c.name, ": ", c.detail);
        CHECK(c.pass);
    }
}
