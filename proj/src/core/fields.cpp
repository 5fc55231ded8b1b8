#include "sfglab/fields.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sfglab/rng.hpp"

namespace sfglab {

namespace {

void check_spec(const SqueezedVacuumSpec& spec) {
    if (spec.pump_frequency / 2.0 != spec.grid.degenerate_frequency())
        throw std::invalid_argument(
            "pump frequency does not match the grid degeneracy point");
    if (spec.squeeze_per_pair.size() != std::size_t(spec.grid.pair_count()))
        throw std::invalid_argument("squeeze profile size does not match pair count");
    for (double r : spec.squeeze_per_pair)
        if (!(r >= 0.0) || !std::isfinite(r))
            throw std::invalid_argument("squeeze parameters must be finite and >= 0");
    if (spec.pump_linewidth < 0.0)
        throw std::invalid_argument("pump linewidth must be >= 0");
    if (spec.envelope_jitter < 0.0)
        throw std::invalid_argument("envelope jitter must be >= 0");
}

/// Continuous pump detuning for one shot, drawn from the pump line shape.
double draw_detuning(const SqueezedVacuumSpec& spec, std::uint64_t seed,
                     std::uint64_t shot) {
    if (spec.pump_linewidth <= 0.0) return 0.0;
    if (spec.pump_shape == LineShape::Lorentzian) {
        const double u = random_uniforms(seed, shot, RngStream::PumpDetuning, 0).a;
        return 0.5 * spec.pump_linewidth * std::tan(std::numbers::pi * (u - 0.5));
    }
    const double z = random_normals(seed, shot, RngStream::PumpDetuning, 0).a;
    const double sigma =
        spec.pump_linewidth / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
    return sigma * z;
}

/// Common gain factor with <g^2> = 1 for any jitter strength.
double draw_gain(const SqueezedVacuumSpec& spec, std::uint64_t seed,
                 std::uint64_t shot) {
    const double s = spec.envelope_jitter;
    if (s <= 0.0) return 1.0;
    const double z = random_normals(seed, shot, RngStream::EnvelopeJitter, 0).a;
    return std::exp(s * z - s * s);
}

} // namespace

CoherentField coherent_pulse(const SpectralEnvelope& envelope) {
    CoherentField out{envelope.grid, {}};
    out.amplitude.reserve(envelope.amplitude.size());
    for (double a : envelope.amplitude) out.amplitude.emplace_back(a, 0.0);
    return out;
}

SqueezedVacuumSpec uniform_squeezing(const SpectralGrid& grid, double pump_frequency,
                                     double r) {
    SqueezedVacuumSpec spec{grid, pump_frequency, 0.0, LineShape::Lorentzian, {}, 0.0};
    spec.squeeze_per_pair.assign(std::size_t(grid.pair_count()), r);
    check_spec(spec);
    return spec;
}

SqueezedVacuumSpec squeezing_from_photon_profile(const SpectralGrid& grid,
                                                 double pump_frequency,
                                                 const std::vector<double>& photons_per_pair) {
    SqueezedVacuumSpec spec{grid, pump_frequency, 0.0, LineShape::Lorentzian, {}, 0.0};
    spec.squeeze_per_pair.reserve(photons_per_pair.size());
    for (double n : photons_per_pair) {
        if (!(n >= 0.0) || !std::isfinite(n))
            throw std::invalid_argument("photon numbers must be finite and >= 0");
        spec.squeeze_per_pair.push_back(std::asinh(std::sqrt(n)));
    }
    check_spec(spec);
    return spec;
}

std::vector<double> pair_photon_profile(const SpectralEnvelope& envelope) {
    const SpectralGrid& g = envelope.grid;
    std::vector<double> out(std::size_t(g.pair_count()));
    for (int p = 0; p < g.pair_count(); ++p)
        out[std::size_t(p)] = envelope.amplitude[std::size_t(g.hi_index(p))] *
                              envelope.amplitude[std::size_t(g.lo_index(p))];
    return out;
}

int pair_of_mode(const SpectralGrid& grid, int i) {
    const int half = grid.n_modes() / 2;
    return i >= half ? i - half : half - 1 - i;
}

GaussianStateMoments squeezed_moments(const SqueezedVacuumSpec& spec) {
    check_spec(spec);
    const SpectralGrid& g = spec.grid;
    GaussianStateMoments m{g, {}, {}};
    m.occupation.resize(std::size_t(g.n_modes()));
    m.pairing.resize(std::size_t(g.pair_count()));
    const double w0 = g.degenerate_frequency();
    for (int p = 0; p < g.pair_count(); ++p) {
        const double r = spec.squeeze_per_pair[std::size_t(p)];
        const double sh = std::sinh(r);
        double occ_hi = sh * sh;
        double occ_lo = sh * sh;
        double pair = sh * std::cosh(r);
        if (spec.carrier_scaling) {
            const double whi = g.frequency(g.hi_index(p));
            const double wlo = g.frequency(g.lo_index(p));
            occ_hi *= whi / w0;
            occ_lo *= wlo / w0;
            pair *= std::sqrt(whi * wlo) / w0;
        }
        m.occupation[std::size_t(g.hi_index(p))] = occ_hi;
        m.occupation[std::size_t(g.lo_index(p))] = occ_lo;
        m.pairing[std::size_t(p)] = {0.0, pair};
    }
    return m;
}

FieldRealization sample_field(const SqueezedVacuumSpec& spec, std::uint64_t seed,
                              std::uint64_t shot) {
    check_spec(spec);
    const SpectralGrid& g = spec.grid;
    const int n = g.n_modes();

    FieldRealization out;
    out.field.assign(std::size_t(n), {0.0, 0.0});
    out.detuning = draw_detuning(spec, seed, shot);
    out.gain = draw_gain(spec, seed, shot);

    // Quantize the pump detuning to whole grid bins; the Lorentzian tail can
    // be arbitrarily far out, so clamp before narrowing.
    const long long raw = std::llround(out.detuning / g.spacing());
    const long long lim = n;
    out.bin_shift = int(std::max(-lim, std::min(lim, raw)));

    // Populate the correlated anti-diagonal i + j = (n - 1) + shift. Pairs
    // whose partner falls outside the grid still deposit the in-range arm.
    const int target = (n - 1) + out.bin_shift;
    const int j_min = std::max(0, target - (n - 1));
    const int j_max = target / 2;
    const double inv_sqrt2 = std::sqrt(0.5);
    const double w0 = g.degenerate_frequency();
    const auto carrier = [&](int mode) {
        return spec.carrier_scaling ? std::sqrt(g.frequency(mode) / w0) : 1.0;
    };
    for (int j = j_min; j <= j_max; ++j) {
        const int i = target - j;
        if (i < 0 || i >= n) continue;
        // Squeeze parameter for this separation, taken from the unshifted
        // profile at the nearest pair offset.
        const int p_eff = std::min(g.pair_count() - 1, (i - j) / 2);
        const double sh = std::sinh(spec.squeeze_per_pair[std::size_t(p_eff)]);
        if (sh == 0.0) continue;
        if (i == j) {
            // Degenerate bin on an odd shift: one real quadrature at 45
            // degrees gives <E^2> = i sinh^2 r, matching the cross pairs.
            const double z = random_normals(seed, shot, RngStream::PairField,
                                            std::uint32_t(j)).a;
            const double q = sh * z * inv_sqrt2 * carrier(j);
            out.field[std::size_t(j)] += std::complex<double>(q, q);
        } else {
            const RandomBlock z = random_normals(seed, shot, RngStream::PairField,
                                                 std::uint32_t(j));
            const std::complex<double> c(sh * inv_sqrt2 * z.a, sh * inv_sqrt2 * z.b);
            out.field[std::size_t(i)] += c * carrier(i);
            out.field[std::size_t(j)] +=
                std::complex<double>(0.0, 1.0) * std::conj(c) * carrier(j);
        }
    }

    if (out.gain != 1.0)
        for (auto& e : out.field) e *= out.gain;
    return out;
}

FieldRealization sample_uncorrelated_field(const SqueezedVacuumSpec& spec,
                                           std::uint64_t seed, std::uint64_t shot) {
    check_spec(spec);
    const SpectralGrid& g = spec.grid;
    const int n = g.n_modes();

    FieldRealization out;
    out.field.assign(std::size_t(n), {0.0, 0.0});
    out.gain = draw_gain(spec, seed, shot);

    const double inv_sqrt2 = std::sqrt(0.5);
    const double w0 = g.degenerate_frequency();
    for (int i = 0; i < n; ++i) {
        double sh =
            std::sinh(spec.squeeze_per_pair[std::size_t(pair_of_mode(g, i))]);
        if (sh == 0.0) continue;
        if (spec.carrier_scaling) sh *= std::sqrt(g.frequency(i) / w0);
        const RandomBlock z = random_normals(seed, shot, RngStream::ModeField,
                                             std::uint32_t(i));
        out.field[std::size_t(i)] =
            std::complex<double>(sh * inv_sqrt2 * z.a, sh * inv_sqrt2 * z.b);
    }

    if (out.gain != 1.0)
        for (auto& e : out.field) e *= out.gain;
    return out;
}

} // namespace sfglab
