#include "doctest.h"

#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "sfglab/engine.hpp"
#include "sfglab/fields.hpp"
#include "sfglab/shaper.hpp"

using namespace sfglab;

namespace {

SpectralGrid test_grid(int n = 64) {
    return SpectralGrid(wavelength_to_angular(532.0), 0.05, n);
}

double total_mass(const SfgSpectrum& s) {
    return std::accumulate(s.total.begin(), s.total.end(), 0.0);
}

} // namespace

TEST_CASE("bin weights form a normalized symmetric kernel") {
    for (LineShape shape : {LineShape::Lorentzian, LineShape::Gaussian}) {
        const int len = 41;
        const int center = 20;
        const auto w = bin_weights(shape, 0.004, 0.001, len, center);
        REQUIRE(int(w.size()) == len);
        const double sum = std::accumulate(w.begin(), w.end(), 0.0);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
        for (int k = 1; k <= center; ++k)
            CHECK(w[size_t(center - k)] ==
                  doctest::Approx(w[size_t(center + k)]).epsilon(1e-12));
        CHECK(w[size_t(center)] > w[size_t(center + 1)]);
    }
    CHECK_THROWS_AS(bin_weights(LineShape::Gaussian, 0.0, 0.001, 5, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(bin_weights(LineShape::Gaussian, 0.01, 0.0, 5, 2),
                    std::invalid_argument);
}

TEST_CASE("pair amplitude with a zero mask counts every correlated pair") {
    const SpectralGrid g = test_grid(32);
    const SqueezedVacuumSpec spec = uniform_squeezing(g, g.pump_frequency(), 0.9);
    const GaussianStateMoments m = squeezed_moments(spec);
    const std::complex<double> q0 = quantum_pair_amplitude(m, zero_mask(g));
    const double sc = std::sinh(0.9) * std::cosh(0.9);
    // Each of the n modes contributes its pair correlator once (pairs are
    // counted from both sides), all purely imaginary for this state.
    CHECK(q0.real() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(q0.imag() ==
          doctest::Approx(g.spacing() * double(g.n_modes()) * sc).epsilon(1e-13));
}

TEST_CASE("line-center contrast matches the discrete closed form") {
    // Flat occupation, no pump linewidth, no detector: the coherent pair
    // term lands in the single center bin and the ratio to the incoherent
    // background is (n_modes / 2) (nbar + 1) / nbar exactly.
    const SpectralGrid g = test_grid(64);
    const double r = 0.75;
    const double nbar = std::sinh(r) * std::sinh(r);
    const SqueezedVacuumSpec spec = uniform_squeezing(g, g.pump_frequency(), r);
    const SfgSpectrum s = sfg_moment_path(spec, zero_mask(g), DetectorResponse{});
    const size_t c = size_t(g.n_modes() - 1);

    REQUIRE(s.size() == 2 * g.n_modes() - 1);
    CHECK(s.omega(int(c)) == doctest::Approx(g.pump_frequency()).epsilon(1e-15));
    const double expect = double(g.n_modes()) / 2.0 * (nbar + 1.0) / nbar;
    CHECK(s.quantum[c] / s.classical[c] == doctest::Approx(expect).epsilon(1e-12));

    // Incoherent background: 2 dw^2 sum_i n_i n_{q-i} for every output bin.
    const double dw = g.spacing();
    for (int q : {0, 31, 63, 64, 100, 126}) {
        int terms = 0;
        for (int i = 0; i < g.n_modes(); ++i) {
            const int j = q - i;
            if (j >= 0 && j < g.n_modes()) ++terms;
        }
        const double expect_c = 2.0 * dw * dw * double(terms) * nbar * nbar;
        CHECK(s.classical[size_t(q)] == doctest::Approx(expect_c).epsilon(1e-12));
    }
    // The coherent term occupies only the center bin without a pump line.
    for (int q = 0; q < s.size(); ++q)
        if (q != int(c)) CHECK(s.quantum[size_t(q)] == 0.0);
}

TEST_CASE("a pump line spreads the coherent term without losing mass") {
    const SpectralGrid g = test_grid(64);
    SqueezedVacuumSpec spec = uniform_squeezing(g, g.pump_frequency(), 0.5);
    const SfgSpectrum narrow = sfg_moment_path(spec, zero_mask(g), DetectorResponse{});
    spec.pump_linewidth = 5.0 * g.spacing();
    const SfgSpectrum wide = sfg_moment_path(spec, zero_mask(g), DetectorResponse{});
    const size_t c = size_t(g.n_modes() - 1);

    CHECK(wide.quantum[c] < narrow.quantum[c]);
    const double mass_narrow =
        std::accumulate(narrow.quantum.begin(), narrow.quantum.end(), 0.0);
    const double mass_wide =
        std::accumulate(wide.quantum.begin(), wide.quantum.end(), 0.0);
    CHECK(mass_wide == doctest::Approx(mass_narrow).epsilon(1e-12));
    // The incoherent background is a sum over uncorrelated mode pairs, so a
    // narrow pump line does not move it.
    for (int q = 0; q < wide.size(); ++q)
        CHECK(wide.classical[size_t(q)] == narrow.classical[size_t(q)]);
}

TEST_CASE("coherent pulse spectra equal the squared masked autoconvolution") {
    const SpectralGrid g = test_grid(16);
    const SpectralEnvelope env = flat_envelope(g, 2.0 * g.half_span(), 2.0);
    const CoherentField pulse = coherent_pulse(env);
    const SfgSpectrum s = sfg_coherent(pulse, zero_mask(g));
    const size_t c = size_t(g.n_modes() - 1);
    // Flat field of amplitude sqrt(2): the center bin of the
    // autoconvolution holds n terms of size 2, scaled by the mode spacing.
    const double expect = std::pow(g.spacing() * double(g.n_modes()) * 2.0, 2.0);
    CHECK(s.total[c] == doctest::Approx(expect).epsilon(1e-12));
    CHECK(s.quantum[c] == s.total[c]);
    CHECK(s.classical[c] == 0.0);
    // A split delay reshapes the coherent spectrum away from the center.
    const SfgSpectrum delayed =
        sfg_coherent(pulse, split_delay_mask(g, g.pump_frequency(), 400.0));
    CHECK(delayed.total[c] < 0.05 * s.total[c]);
}

TEST_CASE("ensemble averages converge to the surrogate moment spectrum") {
    const SpectralGrid g = test_grid(32);
    const SqueezedVacuumSpec spec = uniform_squeezing(g, g.pump_frequency(), 0.6);
    const PhaseMask mask = zero_mask(g);
    // The sampled fields are classical Gaussians whose pair correlation is
    // i n rather than the exact i sqrt(n (n + 1)); the matching reference
    // therefore carries the same substitution.
    GaussianStateMoments surrogate = squeezed_moments(spec);
    for (int p = 0; p < g.pair_count(); ++p)
        surrogate.pairing[size_t(p)] = {
            0.0, surrogate.occupation[size_t(g.hi_index(p))]};
    const SfgSpectrum exact =
        sfg_gaussian_decomposition(surrogate, mask, PumpLine{}, DetectorResponse{});
    const SfgSpectrum mc =
        sfg_ensemble(spec, mask, 20000, 12345, DetectorResponse{}, EnsembleKind::PairCorrelated, 2);

    REQUIRE(mc.size() == exact.size());
    CHECK(mc.shots == 20000);
    const size_t c = size_t(g.n_modes() - 1);
    CHECK(mc.stderr_total[c] > 0.0);
    CHECK(std::abs(mc.total[c] - exact.total[c]) < 5.0 * mc.stderr_total[c]);
    // Off-center bins carry only the incoherent part.
    const size_t q = c + 11;
    CHECK(std::abs(mc.total[q] - exact.total[q]) < 5.0 * mc.stderr_total[q]);
    // The coherent-term estimator must sit close to the reference too.
    CHECK(mc.quantum[c] == doctest::Approx(exact.quantum[c]).epsilon(0.2));
    // Against the true quantum moments the classical surrogate is short by
    // tanh(r)^2 on the coherent term -- the documented sampling deficit.
    const SfgSpectrum full = sfg_moment_path(spec, mask, DetectorResponse{});
    const double t2 = std::pow(std::tanh(0.6), 2.0);
    CHECK(mc.quantum[c] == doctest::Approx(full.quantum[c] * t2).epsilon(0.2));
}

TEST_CASE("ensemble decomposition sums exactly without a detector") {
    // classical is stored as total - quantum with its sign, so the split
    // reassembles to the total at machine precision bin by bin.
    const SpectralGrid g = test_grid(32);
    SqueezedVacuumSpec spec = uniform_squeezing(g, g.pump_frequency(), 0.6);
    spec.pump_linewidth = 1.5 * g.spacing();
    const PhaseMask mask = sinusoidal_mask(g, g.pump_frequency(), 0.7, 400.0, 0.2);
    const SfgSpectrum s = sfg_ensemble(spec, mask, 3000, 31, DetectorResponse{},
                                       EnsembleKind::PairCorrelated, 2);
    for (int q = 0; q < s.size(); ++q) {
        const double total = s.total[size_t(q)];
        const double sum = s.quantum[size_t(q)] + s.classical[size_t(q)];
        CHECK(std::abs(sum - total) <= 1e-12 * std::max(1.0, std::abs(total)));
        // mean |C|^2 >= |mean C|^2 holds sample by sample, so no clamp is
        // needed to keep the incoherent part non-negative.
        CHECK(s.classical[size_t(q)] >= 0.0);
    }
}

TEST_CASE("uncorrelated ensembles show no coherent pair term") {
    const SpectralGrid g = test_grid(32);
    const SqueezedVacuumSpec spec = uniform_squeezing(g, g.pump_frequency(), 0.6);
    const SfgSpectrum corr = sfg_ensemble(spec, zero_mask(g), 8000, 7, DetectorResponse{},
                                          EnsembleKind::PairCorrelated, 1);
    const SfgSpectrum flat = sfg_ensemble(spec, zero_mask(g), 8000, 7, DetectorResponse{},
                                          EnsembleKind::Uncorrelated, 1);
    const size_t c = size_t(g.n_modes() - 1);
    // The correlated source spikes at the pair-sum frequency; the
    // uncorrelated control stays at the smooth background level there.
    CHECK(corr.total[c] > 5.0 * flat.total[c]);
    CHECK(flat.quantum[c] < 0.05 * corr.quantum[c]);
}

TEST_CASE("ensemble results are bit-identical for any thread count") {
    const SpectralGrid g = test_grid(32);
    SqueezedVacuumSpec spec = uniform_squeezing(g, g.pump_frequency(), 0.7);
    spec.pump_linewidth = 2.0 * g.spacing();
    spec.envelope_jitter = 0.2;
    const PhaseMask mask = sinusoidal_mask(g, g.pump_frequency(), 0.8, 300.0, 0.3);
    const DetectorResponse det{3.0 * g.spacing(), LineShape::Gaussian};

    const SfgSpectrum one = sfg_ensemble(spec, mask, 1000, 99, det, EnsembleKind::PairCorrelated, 1);
    const SfgSpectrum four = sfg_ensemble(spec, mask, 1000, 99, det, EnsembleKind::PairCorrelated, 4);
    REQUIRE(one.size() == four.size());
    for (int q = 0; q < one.size(); ++q) {
        CHECK(one.total[size_t(q)] == four.total[size_t(q)]);
        CHECK(one.quantum[size_t(q)] == four.quantum[size_t(q)]);
        CHECK(one.classical[size_t(q)] == four.classical[size_t(q)]);
        CHECK(one.stderr_total[size_t(q)] == four.stderr_total[size_t(q)]);
    }
}

TEST_CASE("detector blur conserves the summed intensity") {
    const SpectralGrid g = test_grid(64);
    const SqueezedVacuumSpec spec = uniform_squeezing(g, g.pump_frequency(), 0.5);
    const SfgSpectrum sharp = sfg_moment_path(spec, zero_mask(g), DetectorResponse{});
    for (LineShape shape : {LineShape::Gaussian, LineShape::Lorentzian}) {
        const DetectorResponse det{7.3 * g.spacing(), shape};
        const SfgSpectrum blurred = convolve_response(sharp, det);
        REQUIRE(blurred.size() == sharp.size());
        CHECK(total_mass(blurred) == doctest::Approx(total_mass(sharp)).epsilon(1e-11));
        const size_t c = size_t(g.n_modes() - 1);
        CHECK(blurred.total[c] < sharp.total[c]);
        for (double v : blurred.total) CHECK(v >= 0.0);
    }
    // A response wider than the whole spectrum cannot be represented.
    const DetectorResponse absurd{double(sharp.size()) * g.spacing() * 2.0,
                                  LineShape::Gaussian};
    CHECK_THROWS_AS(convolve_response(sharp, absurd), std::invalid_argument);
    // Zero width is the identity.
    const SfgSpectrum same = convolve_response(sharp, DetectorResponse{});
    CHECK(same.total[10] == sharp.total[10]);
}

TEST_CASE("closed-form contrast formula and its validation") {
    const double b = 0.099831722785462714;
    const double gp = 6.6554481856975143e-5;
    const double gf = 1.9966344557092543e-4;
    CHECK(qc_ratio_formula(b, gp, gf, 1.0) == doctest::Approx(375.0).epsilon(1e-12));
    CHECK(qc_ratio_formula(b, gp, gf, 10.0) == doctest::Approx(206.25).epsilon(1e-12));
    CHECK(qc_ratio_formula(b, gp, gf, 0.1) == doctest::Approx(2062.5).epsilon(1e-12));
    // The low-power enhancement factor between 0.1 and 10 photons is 10.
    CHECK(qc_ratio_formula(b, gp, gf, 0.1) / qc_ratio_formula(b, gp, gf, 10.0) ==
          doctest::Approx(10.0).epsilon(1e-13));
    CHECK_THROWS_AS(qc_ratio_formula(-1.0, gp, gf, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(qc_ratio_formula(b, 0.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(qc_ratio_formula(b, gp, gf, 0.0), std::invalid_argument);
}
