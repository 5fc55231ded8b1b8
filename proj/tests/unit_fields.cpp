#include "doctest.h"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "sfglab/fields.hpp"

using namespace sfglab;

namespace {

SpectralGrid test_grid(int n = 64) {
    return SpectralGrid(wavelength_to_angular(532.0), 0.05, n);
}

SqueezedVacuumSpec uniform_spec(const SpectralGrid& g, double r) {
    return uniform_squeezing(g, g.pump_frequency(), r);
}

} // namespace

TEST_CASE("uniform squeezing produces the closed-form second moments") {
    const SpectralGrid g = test_grid(16);
    const GaussianStateMoments m = squeezed_moments(uniform_spec(g, 1.0));
    REQUIRE(int(m.occupation.size()) == g.n_modes());
    REQUIRE(int(m.pairing.size()) == g.pair_count());
    for (double n : m.occupation)
        CHECK(n == doctest::Approx(1.3810978455418157).epsilon(1e-14));
    for (const std::complex<double>& p : m.pairing) {
        // The pair correlator of a squeezed pair is purely imaginary with
        // magnitude sinh(r) cosh(r).
        CHECK(p.real() == 0.0);
        CHECK(p.imag() * p.imag() ==
              doctest::Approx(3.2885291045020608).epsilon(1e-14));
        // n^2 + |m|^2 figure at r = 1.
        const double n = m.occupation[0];
        CHECK(n * n + std::norm(p) ==
              doctest::Approx(5.1959603634623059).epsilon(1e-13));
    }
}

TEST_CASE("photon profiles convert to per-pair squeezing and back") {
    const SpectralGrid g = test_grid(16);
    const SpectralEnvelope env = gaussian_envelope(g, g.degenerate_frequency(), 0.04, 2.0);
    const std::vector<double> profile = pair_photon_profile(env);
    REQUIRE(int(profile.size()) == g.pair_count());
    const SqueezedVacuumSpec spec =
        squeezing_from_photon_profile(g, g.pump_frequency(), profile);
    const GaussianStateMoments m = squeezed_moments(spec);
    for (int p = 0; p < g.pair_count(); ++p) {
        const double n = profile[size_t(p)];
        CHECK(m.occupation[size_t(g.hi_index(p))] == doctest::Approx(n).epsilon(1e-12));
        CHECK(m.occupation[size_t(g.lo_index(p))] == doctest::Approx(n).epsilon(1e-12));
        // |m|^2 = n (n + 1) for each pair.
        CHECK(std::norm(m.pairing[size_t(p)]) ==
              doctest::Approx(n * (n + 1.0)).epsilon(1e-12));
    }
}

TEST_CASE("sampled pair fields have exactly imaginary pair products") {
    const SpectralGrid g = test_grid(32);
    const SqueezedVacuumSpec spec = uniform_spec(g, 0.8);
    for (std::uint64_t shot = 0; shot < 200; ++shot) {
        const FieldRealization f = sample_field(spec, 11, shot);
        REQUIRE(int(f.field.size()) == g.n_modes());
        CHECK(f.bin_shift == 0);
        CHECK(f.gain == 1.0);
        for (int p = 0; p < g.pair_count(); ++p) {
            const std::complex<double> prod =
                f.field[size_t(g.hi_index(p))] * f.field[size_t(g.lo_index(p))];
            // The correlated construction makes Re(E_hi E_lo) cancel exactly
            // in IEEE arithmetic, which pins the pair phase.
            CHECK(prod.real() == 0.0);
        }
    }
}

TEST_CASE("sampled field intensities average to the occupation") {
    const SpectralGrid g = test_grid(16);
    const double r = 0.6;
    const SqueezedVacuumSpec spec = uniform_spec(g, r);
    const double expect = std::sinh(r) * std::sinh(r);
    const int shots = 40000;
    std::vector<double> mean(size_t(g.n_modes()), 0.0);
    std::complex<double> mean_amp{0.0, 0.0};
    for (int s = 0; s < shots; ++s) {
        const FieldRealization f = sample_field(spec, 3, std::uint64_t(s));
        for (int i = 0; i < g.n_modes(); ++i) mean[size_t(i)] += std::norm(f.field[size_t(i)]);
        mean_amp += f.field[0];
    }
    for (int i = 0; i < g.n_modes(); ++i) {
        mean[size_t(i)] /= shots;
        // Exponential intensity: stderr = expect / sqrt(shots); allow 5 sigma.
        CHECK(mean[size_t(i)] == doctest::Approx(expect).epsilon(5.0 / std::sqrt(double(shots))));
    }
    CHECK(std::abs(mean_amp) / double(shots) < 5.0 * std::sqrt(expect / double(shots)));
}

TEST_CASE("pair products average to i times the occupation") {
    // The sampled pairs carry <E_hi E_lo> = i sinh^2(r): the pair product
    // reproduces the occupation, a factor tanh(r) below sinh(r) cosh(r).
    const SpectralGrid g = test_grid(16);
    const double r = 0.6;
    const SqueezedVacuumSpec spec = uniform_spec(g, r);
    const double n = std::sinh(r) * std::sinh(r);
    const int shots = 40000;
    std::vector<std::complex<double>> mean(size_t(g.pair_count()), {0.0, 0.0});
    for (int s = 0; s < shots; ++s) {
        const FieldRealization f = sample_field(spec, 5, std::uint64_t(s));
        for (int p = 0; p < g.pair_count(); ++p)
            mean[size_t(p)] +=
                f.field[size_t(g.hi_index(p))] * f.field[size_t(g.lo_index(p))];
    }
    // The product is i times an exponential variable of mean n, so its
    // imaginary part has stderr n / sqrt(shots); allow 5 sigma.
    const double tol = 5.0 * n / std::sqrt(double(shots));
    for (int p = 0; p < g.pair_count(); ++p) {
        const std::complex<double> m = mean[size_t(p)] / double(shots);
        CHECK(m.real() == 0.0);
        CHECK(std::abs(m.imag() - n) < tol);
    }
}

TEST_CASE("carrier scaling rescales moments and samples by the frequency ratio") {
    const SpectralGrid g = test_grid(16);
    const SqueezedVacuumSpec base = uniform_spec(g, 0.8);
    SqueezedVacuumSpec scaled = base;
    scaled.carrier_scaling = true;
    const double w0 = g.degenerate_frequency();

    const GaussianStateMoments m0 = squeezed_moments(base);
    const GaussianStateMoments m1 = squeezed_moments(scaled);
    for (int p = 0; p < g.pair_count(); ++p) {
        const double whi = g.frequency(g.hi_index(p));
        const double wlo = g.frequency(g.lo_index(p));
        CHECK(m1.occupation[size_t(g.hi_index(p))] ==
              m0.occupation[size_t(g.hi_index(p))] * (whi / w0));
        CHECK(m1.occupation[size_t(g.lo_index(p))] ==
              m0.occupation[size_t(g.lo_index(p))] * (wlo / w0));
        // The pair correlator carries one amplitude from each arm, so it
        // scales by the geometric mean of the two arm ratios.
        CHECK(m1.pairing[size_t(p)].imag() ==
              m0.pairing[size_t(p)].imag() * (std::sqrt(whi * wlo) / w0));
        CHECK(m1.pairing[size_t(p)].real() == 0.0);
    }

    // The flag consumes no randomness: the same draws come out rescaled
    // per mode by sqrt(omega / omega_deg), bit for bit.
    for (std::uint64_t shot : {0ull, 7ull, 123ull}) {
        const FieldRealization f0 = sample_field(base, 9, shot);
        const FieldRealization f1 = sample_field(scaled, 9, shot);
        for (int i = 0; i < g.n_modes(); ++i) {
            const double s = std::sqrt(g.frequency(i) / w0);
            CHECK(f1.field[size_t(i)] == f0.field[size_t(i)] * s);
        }
    }
    for (std::uint64_t shot : {0ull, 11ull}) {
        const FieldRealization f0 = sample_uncorrelated_field(base, 9, shot);
        const FieldRealization f1 = sample_uncorrelated_field(scaled, 9, shot);
        for (int i = 0; i < g.n_modes(); ++i) {
            const std::complex<double> want =
                f0.field[size_t(i)] * std::sqrt(g.frequency(i) / w0);
            CHECK(std::abs(f1.field[size_t(i)] - want) <= 1e-14 * std::abs(want));
        }
    }
}

TEST_CASE("pump detuning slides the correlated anti-diagonal") {
    const SpectralGrid g = test_grid(32);
    SqueezedVacuumSpec spec = uniform_spec(g, 0.5);
    spec.pump_linewidth = 40.0 * g.spacing();
    spec.pump_shape = LineShape::Gaussian;
    const int n = g.n_modes();
    int shifted_shots = 0;
    for (std::uint64_t shot = 0; shot < 300; ++shot) {
        const FieldRealization f = sample_field(spec, 17, shot);
        if (f.bin_shift != 0) ++shifted_shots;
        CHECK(std::abs(f.bin_shift) <= n);
        CHECK(f.detuning != 0.0);
        // Every populated product must sit on the shifted anti-diagonal:
        // nonzero modes pair up so that i + j = (n - 1) + shift.
        const int target = (n - 1) + f.bin_shift;
        for (int i = 0; i < n; ++i) {
            const int j = target - i;
            const bool partner_on_grid = j >= 0 && j < n;
            if (!partner_on_grid) CHECK(f.field[size_t(i)] == std::complex<double>(0.0, 0.0));
        }
    }
    // A linewidth of 40 bins shifts nearly every shot.
    CHECK(shifted_shots > 250);
}

TEST_CASE("envelope jitter rescales whole shots with unit mean square") {
    const SpectralGrid g = test_grid(8);
    SqueezedVacuumSpec spec = uniform_spec(g, 0.4);
    spec.envelope_jitter = 0.3;
    double sum_g2 = 0.0;
    const int shots = 40000;
    for (int s = 0; s < shots; ++s) {
        const FieldRealization f = sample_field(spec, 23, std::uint64_t(s));
        CHECK(f.gain > 0.0);
        sum_g2 += f.gain * f.gain;
    }
    // exp(sigma z - sigma^2) has <g^2> = 1 by construction.
    CHECK(sum_g2 / shots == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("uncorrelated sampling matches occupations but kills pair products") {
    const SpectralGrid g = test_grid(16);
    const SqueezedVacuumSpec spec = uniform_spec(g, 0.7);
    const double expect = std::sinh(0.7) * std::sinh(0.7);
    const int shots = 40000;
    std::vector<double> mean(size_t(g.n_modes()), 0.0);
    std::complex<double> pair_mean{0.0, 0.0};
    for (int s = 0; s < shots; ++s) {
        const FieldRealization f = sample_uncorrelated_field(spec, 29, std::uint64_t(s));
        for (int i = 0; i < g.n_modes(); ++i) mean[size_t(i)] += std::norm(f.field[size_t(i)]);
        pair_mean += f.field[size_t(g.hi_index(0))] * f.field[size_t(g.lo_index(0))];
    }
    for (int i = 0; i < g.n_modes(); ++i)
        CHECK(mean[size_t(i)] / shots ==
              doctest::Approx(expect).epsilon(5.0 / std::sqrt(double(shots))));
    // <E_hi E_lo> vanishes without the pair correlation; 5 sigma bound on
    // the sample mean of a product of independent thermal amplitudes.
    CHECK(std::abs(pair_mean) / double(shots) < 5.0 * expect / std::sqrt(double(shots)));
}

TEST_CASE("field sampling rejects inconsistent source descriptions") {
    const SpectralGrid g = test_grid(8);
    SqueezedVacuumSpec spec = uniform_spec(g, 0.5);
    spec.pump_frequency = g.pump_frequency() * 1.0001;
    CHECK_THROWS_AS(sample_field(spec, 1, 0), std::invalid_argument);
    SqueezedVacuumSpec bad_r = uniform_spec(g, 0.5);
    bad_r.squeeze_per_pair.assign(size_t(g.pair_count()), -0.1);
    CHECK_THROWS_AS(sample_field(bad_r, 1, 0), std::invalid_argument);
    SqueezedVacuumSpec bad_lw = uniform_spec(g, 0.5);
    bad_lw.pump_linewidth = -1.0;
    CHECK_THROWS_AS(sample_field(bad_lw, 1, 0), std::invalid_argument);
}
