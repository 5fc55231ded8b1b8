#include "sfglab/shaper.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace sfglab {

namespace {

void check_pump(const SpectralGrid& grid, double pump_frequency, const char* who) {
    if (pump_frequency / 2.0 != grid.degenerate_frequency())
        throw std::invalid_argument(std::string(who) +
                                    ": pump frequency does not match the grid center");
}

double eval_polynomial(const std::vector<double>& coeffs, double xi) {
    double acc = 0.0;
    for (size_t k = coeffs.size(); k-- > 0;) acc = acc * xi + coeffs[k];
    return acc;
}

/// First mode index of pixel block b under the leading-blocks-take-the-
/// remainder partition.
int block_begin(int n_modes, int n_pixels, int b) {
    const int base = n_modes / n_pixels;
    const int rem = n_modes % n_pixels;
    return b * base + std::min(b, rem);
}

int block_of_mode(int n_modes, int n_pixels, int i) {
    const int base = n_modes / n_pixels;
    const int rem = n_modes % n_pixels;
    // First rem blocks have base+1 modes.
    const int fat = rem * (base + 1);
    if (i < fat) return i / (base + 1);
    return rem + (i - fat) / base;
}

} // namespace

double evaluate_descriptor(const MaskDescriptor& d, const SpectralGrid& grid, double xi) {
    return std::visit(
        [&](const auto& node) -> double {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, ZeroMask>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, SplitDelayMask>) {
                return node.tau_fs * std::abs(xi);
            } else if constexpr (std::is_same_v<T, SinusoidalMask>) {
                return node.alpha_rad * std::sin(node.beta_fs * xi + node.theta_rad);
            } else if constexpr (std::is_same_v<T, PolynomialMask>) {
                return eval_polynomial(node.coeffs, xi);
            } else if constexpr (std::is_same_v<T, PixelatedMask>) {
                // Staircase lookup: find the block containing xi, return the
                // source phase at that block's center offset.
                const int n = grid.n_modes();
                int i = int(std::floor((xi / grid.spacing()) + double(n) / 2.0));
                if (i < 0) i = 0;
                if (i >= n) i = n - 1;
                const int b = block_of_mode(n, node.n_pixels, i);
                const int lo = block_begin(n, node.n_pixels, b);
                const int hi = block_begin(n, node.n_pixels, b + 1) - 1;
                const double center = (grid.offset(lo) + grid.offset(hi)) / 2.0;
                return evaluate_descriptor(node.source.front(), grid, center);
            } else if constexpr (std::is_same_v<T, CompositeMask>) {
                double acc = 0.0;
                for (const auto& p : node.parts) acc += evaluate_descriptor(p, grid, xi);
                return acc;
            } else {
                // SampledMask: snap to the nearest mode.
                const int n = int(node.phase.size());
                int i = int(std::lround((xi / grid.spacing()) + (double(n) - 1.0) / 2.0));
                if (i < 0) i = 0;
                if (i >= n) i = n - 1;
                return node.phase[size_t(i)];
            }
        },
        d.node);
}

PhaseMask realize_descriptor(const SpectralGrid& grid, const MaskDescriptor& d) {
    PhaseMask m{grid, std::vector<double>(grid.n_modes()), d};
    if (const auto* s = std::get_if<SampledMask>(&d.node)) {
        if (int(s->phase.size()) != grid.n_modes())
            throw std::invalid_argument("realize_descriptor: sampled phase length != n_modes");
        m.phase = s->phase;
        return m;
    }
    if (const auto* px = std::get_if<PixelatedMask>(&d.node)) {
        // Fill block-wise so every mode of a block shares the identical
        // center sample.
        const int n = grid.n_modes();
        if (px->n_pixels < 1 || px->n_pixels > n)
            throw std::invalid_argument("pixelate_mask: n_pixels must be in [1, n_modes]");
        for (int b = 0; b < px->n_pixels; ++b) {
            const int lo = block_begin(n, px->n_pixels, b);
            const int hi = block_begin(n, px->n_pixels, b + 1) - 1;
            const double center = (grid.offset(lo) + grid.offset(hi)) / 2.0;
            const double ph = evaluate_descriptor(px->source.front(), grid, center);
            for (int i = lo; i <= hi; ++i) m.phase[size_t(i)] = ph;
        }
        return m;
    }
    for (int i = 0; i < grid.n_modes(); ++i)
        m.phase[size_t(i)] = evaluate_descriptor(d, grid, grid.offset(i));
    return m;
}

PhaseMask zero_mask(const SpectralGrid& grid) {
    return realize_descriptor(grid, MaskDescriptor{ZeroMask{}});
}

PhaseMask split_delay_mask(const SpectralGrid& grid, double pump_frequency, double tau_fs) {
    check_pump(grid, pump_frequency, "split_delay_mask");
    return realize_descriptor(grid, MaskDescriptor{SplitDelayMask{tau_fs}});
}

PhaseMask sinusoidal_mask(const SpectralGrid& grid, double pump_frequency, double alpha_rad,
                          double beta_fs, double theta_rad) {
    check_pump(grid, pump_frequency, "sinusoidal_mask");
    return realize_descriptor(grid, MaskDescriptor{SinusoidalMask{alpha_rad, beta_fs, theta_rad}});
}

PhaseMask polynomial_mask(const SpectralGrid& grid, double pump_frequency,
                          std::vector<double> coeffs) {
    check_pump(grid, pump_frequency, "polynomial_mask");
    return realize_descriptor(grid, MaskDescriptor{PolynomialMask{std::move(coeffs)}});
}

PhaseMask sampled_mask(const SpectralGrid& grid, std::vector<double> phase) {
    if (int(phase.size()) != grid.n_modes())
        throw std::invalid_argument("sampled_mask: phase length != n_modes");
    return realize_descriptor(grid, MaskDescriptor{SampledMask{std::move(phase)}});
}

PhaseMask compose_masks(const std::vector<PhaseMask>& parts) {
    if (parts.empty()) throw std::invalid_argument("compose_masks: no parts");
    for (const auto& p : parts)
        if (p.grid != parts.front().grid)
            throw std::invalid_argument("compose_masks: grid mismatch between parts");
    CompositeMask comp;
    for (const auto& p : parts) comp.parts.push_back(p.descriptor);
    PhaseMask m{parts.front().grid, std::vector<double>(parts.front().grid.n_modes(), 0.0),
                MaskDescriptor{std::move(comp)}};
    for (const auto& p : parts)
        for (size_t i = 0; i < m.phase.size(); ++i) m.phase[i] += p.phase[i];
    return m;
}

PhaseMask pixelate_mask(const PhaseMask& mask, int n_pixels) {
    PixelatedMask px;
    px.n_pixels = n_pixels;
    px.source.push_back(mask.descriptor);
    return realize_descriptor(mask.grid, MaskDescriptor{std::move(px)});
}

std::vector<std::complex<double>> apply_mask(const std::vector<std::complex<double>>& field,
                                             const PhaseMask& mask) {
    if (field.size() != mask.phase.size())
        throw std::invalid_argument("apply_mask: field length != n_modes");
    std::vector<std::complex<double>> out(field.size());
    for (size_t i = 0; i < field.size(); ++i)
        out[i] = field[i] * std::polar(1.0, mask.phase[i]);
    return out;
}

void write_mask_csv(const PhaseMask& mask, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_mask_csv: cannot open " + path);
    f << "omega_rad_per_fs,phase_rad_wrapped\n";
    const double two_pi = 2.0 * std::numbers::pi;
    char line[80];
    for (int i = 0; i < mask.grid.n_modes(); ++i) {
        double w = std::remainder(mask.phase[size_t(i)], two_pi);
        if (w >= std::numbers::pi) w -= two_pi; // map +π to -π for [-π, π)
        std::snprintf(line, sizeof line, "%.17g,%.17g\n", mask.grid.frequency(i), w);
        f << line;
    }
    if (!f) throw std::runtime_error("write_mask_csv: write failed for " + path);
}

PhaseMask read_mask_csv(const SpectralGrid& grid, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("read_mask_csv: cannot open " + path);
    std::string line;
    if (!std::getline(f, line) || line.rfind("omega_rad_per_fs", 0) != 0)
        throw std::invalid_argument("read_mask_csv: missing header in " + path);
    std::vector<double> phase;
    phase.reserve(size_t(grid.n_modes()));
    int i = 0;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        double omega = 0.0, ph = 0.0;
        if (std::sscanf(line.c_str(), "%lg,%lg", &omega, &ph) != 2)
            throw std::invalid_argument("read_mask_csv: malformed row in " + path);
        if (i >= grid.n_modes() || std::abs(omega - grid.frequency(i)) > 1e-9)
            throw std::invalid_argument("read_mask_csv: frequency column does not match the grid");
        phase.push_back(ph);
        ++i;
    }
    if (i != grid.n_modes())
        throw std::invalid_argument("read_mask_csv: row count does not match the grid");
    return sampled_mask(grid, std::move(phase));
}

} // namespace sfglab
