#include "sfglab/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "sfglab/fft.hpp"

namespace sfglab {

namespace {

double shape_cdf(LineShape shape, double fwhm, double x) {
    if (shape == LineShape::Lorentzian)
        return 0.5 + std::atan(2.0 * x / fwhm) / std::numbers::pi;
    const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
    return 0.5 * (1.0 + std::erf(x / (sigma * std::numbers::sqrt2)));
}

double output_base(const SpectralGrid& g) {
    return g.pump_frequency() - double(g.n_modes() - 1) * g.spacing();
}

void check_mask(const SpectralGrid& g, const PhaseMask& mask) {
    if (mask.grid != g)
        throw std::invalid_argument("mask grid does not match the field grid");
}

void check_moments(const GaussianStateMoments& m) {
    if (m.occupation.size() != std::size_t(m.grid.n_modes()) ||
        m.pairing.size() != std::size_t(m.grid.pair_count()))
        throw std::invalid_argument("moment vector sizes do not match the grid");
}

} // namespace

std::vector<double> bin_weights(LineShape shape, double fwhm, double spacing,
                                int length, int center) {
    if (!(fwhm > 0.0) || !(spacing > 0.0))
        throw std::invalid_argument("bin weights need positive fwhm and spacing");
    if (length <= 0 || center < 0 || center >= length)
        throw std::invalid_argument("bin weight center is outside the grid");
    std::vector<double> w(static_cast<std::size_t>(length));
    double sum = 0.0;
    for (int j = 0; j < length; ++j) {
        const double x = double(j - center) * spacing;
        w[std::size_t(j)] = shape_cdf(shape, fwhm, x + 0.5 * spacing) -
                            shape_cdf(shape, fwhm, x - 0.5 * spacing);
        sum += w[std::size_t(j)];
    }
    if (!(sum > 0.0))
        throw std::runtime_error("line shape carries no weight on the grid");
    for (auto& v : w) v /= sum;
    return w;
}

std::complex<double> quantum_pair_amplitude(const GaussianStateMoments& moments,
                                            const PhaseMask& mask) {
    const SpectralGrid& g = moments.grid;
    check_mask(g, mask);
    check_moments(moments);
    std::complex<double> acc{0.0, 0.0};
    for (int i = 0; i < g.n_modes(); ++i) {
        const int j = g.pair(i);
        const std::complex<double>& m =
            moments.pairing[std::size_t(pair_of_mode(g, i))];
        const double ph = mask.phase[std::size_t(i)] + mask.phase[std::size_t(j)];
        acc += m * std::polar(1.0, ph);
    }
    return g.spacing() * acc;
}

SfgSpectrum sfg_coherent(const CoherentField& field, const PhaseMask& mask) {
    const SpectralGrid& g = field.grid;
    check_mask(g, mask);
    const auto masked = apply_mask(field.amplitude, mask);
    const auto conv = linear_autoconvolution(masked);

    SfgSpectrum out;
    out.spacing = g.spacing();
    out.omega_base = output_base(g);
    const std::size_t len = conv.size();
    out.total.resize(len);
    out.quantum.resize(len);
    out.classical.assign(len, 0.0);
    for (std::size_t q = 0; q < len; ++q) {
        const double i = std::norm(conv[q] * g.spacing());
        out.total[q] = i;
        out.quantum[q] = i;
    }
    return out;
}

SfgSpectrum sfg_gaussian_decomposition(const GaussianStateMoments& moments,
                                       const PhaseMask& mask, const PumpLine& pump,
                                       const DetectorResponse& detector) {
    const SpectralGrid& g = moments.grid;
    check_mask(g, mask);
    check_moments(moments);
    const int n = g.n_modes();
    const int len = 2 * n - 1;

    SfgSpectrum out;
    out.spacing = g.spacing();
    out.omega_base = output_base(g);

    const double iq = std::norm(quantum_pair_amplitude(moments, mask));
    out.quantum.assign(std::size_t(len), 0.0);
    if (pump.fwhm > 0.0) {
        if (pump.fwhm >= double(len) * g.spacing())
            throw std::invalid_argument("pump line wider than the simulated span");
        const auto p = bin_weights(pump.shape, pump.fwhm, g.spacing(), len, n - 1);
        for (int j = 0; j < len; ++j) out.quantum[std::size_t(j)] = iq * p[std::size_t(j)];
    } else {
        out.quantum[std::size_t(n - 1)] = iq;
    }

    // Exchange contraction of the occupation with itself; the convolution of
    // non-negative data is clamped against FFT round-off.
    const auto nn = linear_convolution(moments.occupation, moments.occupation);
    out.classical.resize(std::size_t(len));
    const double two_dw2 = 2.0 * g.spacing() * g.spacing();
    for (int j = 0; j < len; ++j)
        out.classical[std::size_t(j)] = two_dw2 * std::max(0.0, nn[std::size_t(j)]);

    out.total.resize(std::size_t(len));
    for (int j = 0; j < len; ++j)
        out.total[std::size_t(j)] =
            out.quantum[std::size_t(j)] + out.classical[std::size_t(j)];
    return convolve_response(out, detector);
}

SfgSpectrum sfg_moment_path(const SqueezedVacuumSpec& spec, const PhaseMask& mask,
                            const DetectorResponse& detector) {
    return sfg_gaussian_decomposition(squeezed_moments(spec), mask,
                                      PumpLine{spec.pump_linewidth, spec.pump_shape},
                                      detector);
}

namespace {

struct BlockSums {
    std::vector<std::complex<double>> sum_c;
    std::vector<double> sum_i;
    std::vector<double> sum_i2;
};

void accumulate_block(const SqueezedVacuumSpec& spec,
                      const std::vector<std::complex<double>>& mask_factor,
                      std::uint64_t seed, EnsembleKind kind, long first_shot,
                      long last_shot, BlockSums& out) {
    const int n = spec.grid.n_modes();
    const std::size_t len = std::size_t(2 * n - 1);
    const double dw = spec.grid.spacing();
    out.sum_c.assign(len, {0.0, 0.0});
    out.sum_i.assign(len, 0.0);
    out.sum_i2.assign(len, 0.0);

    std::vector<std::complex<double>> masked(static_cast<std::size_t>(n));
    for (long s = first_shot; s < last_shot; ++s) {
        const FieldRealization real =
            kind == EnsembleKind::PairCorrelated
                ? sample_field(spec, seed, std::uint64_t(s))
                : sample_uncorrelated_field(spec, seed, std::uint64_t(s));
        for (int i = 0; i < n; ++i)
            masked[std::size_t(i)] = real.field[std::size_t(i)] * mask_factor[std::size_t(i)];
        const auto conv = linear_autoconvolution(masked);
        for (std::size_t q = 0; q < len; ++q) {
            const std::complex<double> cq = conv[q] * dw;
            const double i2 = std::norm(cq);
            out.sum_c[q] += cq;
            out.sum_i[q] += i2;
            out.sum_i2[q] += i2 * i2;
        }
    }
}

} // namespace

SfgSpectrum sfg_ensemble(const SqueezedVacuumSpec& spec, const PhaseMask& mask,
                         long shots, std::uint64_t seed,
                         const DetectorResponse& detector, EnsembleKind kind,
                         int threads) {
    const SpectralGrid& g = spec.grid;
    check_mask(g, mask);
    if (shots <= 0) throw std::invalid_argument("shot count must be positive");
    if (threads < 1) threads = 1;

    const int n = g.n_modes();
    const std::size_t len = std::size_t(2 * n - 1);
    std::vector<std::complex<double>> mask_factor(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        mask_factor[std::size_t(i)] = std::polar(1.0, mask.phase[std::size_t(i)]);

    constexpr long kBlockShots = 64;
    const long n_blocks = (shots + kBlockShots - 1) / kBlockShots;
    std::vector<BlockSums> blocks(static_cast<std::size_t>(n_blocks));

    auto work = [&](long b) {
        const long first = b * kBlockShots;
        accumulate_block(spec, mask_factor, seed, kind, first,
                         std::min(shots, first + kBlockShots),
                         blocks[std::size_t(b)]);
    };

    const int pool = int(std::min<long>(threads, n_blocks));
    if (pool <= 1) {
        for (long b = 0; b < n_blocks; ++b) work(b);
    } else {
        std::atomic<long> next{0};
        std::vector<std::thread> workers;
        workers.reserve(std::size_t(pool));
        for (int t = 0; t < pool; ++t)
            workers.emplace_back([&work, &next, n_blocks] {
                for (long b = next.fetch_add(1); b < n_blocks; b = next.fetch_add(1))
                    work(b);
            });
        for (auto& w : workers) w.join();
    }

    // Merging the per-block partial sums in block order makes the result
    // independent of how blocks were assigned to threads.
    std::vector<std::complex<double>> sum_c(len, {0.0, 0.0});
    std::vector<double> sum_i(len, 0.0);
    std::vector<double> sum_i2(len, 0.0);
    for (long b = 0; b < n_blocks; ++b) {
        const BlockSums& bs = blocks[std::size_t(b)];
        for (std::size_t q = 0; q < len; ++q) {
            sum_c[q] += bs.sum_c[q];
            sum_i[q] += bs.sum_i[q];
            sum_i2[q] += bs.sum_i2[q];
        }
    }

    SfgSpectrum out;
    out.spacing = g.spacing();
    out.omega_base = output_base(g);
    out.shots = shots;
    out.total.resize(len);
    out.quantum.resize(len);
    out.classical.resize(len);
    out.stderr_total.resize(len);
    const double inv_m = 1.0 / double(shots);
    for (std::size_t q = 0; q < len; ++q) {
        const double mean_i = sum_i[q] * inv_m;
        const double iq = std::norm(sum_c[q] * inv_m);
        out.total[q] = mean_i;
        out.quantum[q] = iq;
        // Kept signed so quantum + classical == total holds exactly; a small
        // negative value is finite-sample noise around a true zero.
        out.classical[q] = mean_i - iq;
        double var = 0.0;
        if (shots > 1)
            var = std::max(0.0, (sum_i2[q] - double(shots) * mean_i * mean_i) /
                                    double(shots - 1));
        out.stderr_total[q] = std::sqrt(var * inv_m);
    }
    return convolve_response(out, detector);
}

SfgSpectrum convolve_response(const SfgSpectrum& in, const DetectorResponse& detector) {
    if (detector.fwhm <= 0.0 || in.size() == 0) return in;
    const int len = in.size();
    if (detector.fwhm >= double(len) * in.spacing)
        throw std::invalid_argument("detector response wider than the simulated span");

    // Kernel long enough to reach every output bin from every source bin.
    const int klen = 2 * len - 1;
    const int kc = len - 1;
    const auto w = bin_weights(detector.shape, detector.fwhm, in.spacing, klen, kc);

    // In-range kernel mass per source bin, from prefix sums; dividing by it
    // before convolving keeps the summed intensity unchanged, so no signal
    // is lost off the edges of the simulated span.
    std::vector<double> prefix(std::size_t(klen) + 1, 0.0);
    for (int k = 0; k < klen; ++k)
        prefix[std::size_t(k) + 1] = prefix[std::size_t(k)] + w[std::size_t(k)];
    std::vector<double> keep(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i)
        keep[std::size_t(i)] =
            prefix[std::size_t(kc - i + len)] - prefix[std::size_t(kc - i)];

    auto blur = [&](const std::vector<double>& x) {
        std::vector<double> scaled(static_cast<std::size_t>(len));
        for (int i = 0; i < len; ++i) scaled[std::size_t(i)] = x[std::size_t(i)] / keep[std::size_t(i)];
        const auto full = linear_convolution(scaled, w);
        std::vector<double> y(static_cast<std::size_t>(len));
        for (int q = 0; q < len; ++q)
            y[std::size_t(q)] = std::max(0.0, full[std::size_t(q + kc)]);
        return y;
    };

    SfgSpectrum out;
    out.omega_base = in.omega_base;
    out.spacing = in.spacing;
    out.shots = in.shots;
    out.total = blur(in.total);
    out.quantum = blur(in.quantum);
    out.classical = blur(in.classical);

    if (!in.stderr_total.empty()) {
        // Bins are treated as independent, so variances add with squared
        // kernel weights.
        std::vector<double> var(static_cast<std::size_t>(len));
        for (int i = 0; i < len; ++i) {
            const double s = in.stderr_total[std::size_t(i)] / keep[std::size_t(i)];
            var[std::size_t(i)] = s * s;
        }
        std::vector<double> w2(w.size());
        for (std::size_t k = 0; k < w.size(); ++k) w2[k] = w[k] * w[k];
        const auto full = linear_convolution(var, w2);
        out.stderr_total.resize(std::size_t(len));
        for (int q = 0; q < len; ++q)
            out.stderr_total[std::size_t(q)] =
                std::sqrt(std::max(0.0, full[std::size_t(q + kc)]));
    }
    return out;
}

double qc_ratio_formula(double bandwidth, double pump_fwhm, double detector_fwhm,
                        double mean_photons) {
    if (!(bandwidth > 0.0))
        throw std::invalid_argument("bandwidth must be positive");
    if (!(pump_fwhm >= 0.0) || !(detector_fwhm >= 0.0) ||
        !(pump_fwhm + detector_fwhm > 0.0))
        throw std::invalid_argument(
            "line widths must be non-negative with a positive sum");
    if (!(mean_photons > 0.0))
        throw std::invalid_argument("mean photon number must be positive");
    return bandwidth / (2.0 * (pump_fwhm + detector_fwhm)) *
           (mean_photons + 1.0) / mean_photons;
}

} // namespace sfglab
