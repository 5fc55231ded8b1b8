#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "sfglab/rng.hpp"

using namespace sfglab;

TEST_CASE("random streams are deterministic in all their indices") {
    const RandomBlock a = random_uniforms(42, 7, RngStream::PairField, 3);
    const RandomBlock b = random_uniforms(42, 7, RngStream::PairField, 3);
    CHECK(a.a == b.a);
    CHECK(a.b == b.b);

    // Any single index change must decorrelate the output.
    const RandomBlock seed2 = random_uniforms(43, 7, RngStream::PairField, 3);
    const RandomBlock shot2 = random_uniforms(42, 8, RngStream::PairField, 3);
    const RandomBlock stream2 = random_uniforms(42, 7, RngStream::EnvelopeJitter, 3);
    const RandomBlock index2 = random_uniforms(42, 7, RngStream::PairField, 4);
    CHECK(a.a != seed2.a);
    CHECK(a.a != shot2.a);
    CHECK(a.a != stream2.a);
    CHECK(a.a != index2.a);

    // High bits of wide seeds and shots must matter, not just the low words.
    const RandomBlock hi_seed =
        random_uniforms(42 + (std::uint64_t(1) << 32), 7, RngStream::PairField, 3);
    const RandomBlock hi_shot =
        random_uniforms(42, 7 + (std::uint64_t(1) << 32), RngStream::PairField, 3);
    CHECK(a.a != hi_seed.a);
    CHECK(a.a != hi_shot.a);
}

TEST_CASE("uniform draws live strictly inside the unit interval") {
    double lo = 1.0, hi = 0.0, sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const RandomBlock u = random_uniforms(1, std::uint64_t(i), RngStream::ModeField, 0);
        for (double v : {u.a, u.b}) {
            CHECK(v > 0.0);
            CHECK(v < 1.0);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sum += v;
        }
    }
    const double mean = sum / (2.0 * n);
    CHECK(std::abs(mean - 0.5) < 5.0 / std::sqrt(12.0 * 2.0 * n)); // 5 sigma
    CHECK(lo < 0.01);
    CHECK(hi > 0.99);
}

TEST_CASE("normal draws have unit variance and vanishing mean") {
    double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const RandomBlock z = random_normals(7, std::uint64_t(i), RngStream::PairField, 1);
        for (double v : {z.a, z.b}) {
            sum += v;
            sum2 += v * v;
            sum4 += v * v * v * v;
        }
    }
    const double m = sum / (2.0 * n);
    const double var = sum2 / (2.0 * n) - m * m;
    const double kurt = sum4 / (2.0 * n) / (var * var);
    CHECK(std::abs(m) < 5.0 / std::sqrt(2.0 * n));
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));
    CHECK(kurt == doctest::Approx(3.0).epsilon(0.15));
}

TEST_CASE("counter blocks decorrelate across lags") {
    // Correlation between consecutive index draws of one stream.
    const int n = 20000;
    double sxy = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = random_uniforms(9, 5, RngStream::PumpDetuning, std::uint32_t(i)).a;
        const double y =
            random_uniforms(9, 5, RngStream::PumpDetuning, std::uint32_t(i + 1)).a;
        sxy += x * y;
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
    }
    const double cov = sxy / n - (sx / n) * (sy / n);
    const double vx = sxx / n - (sx / n) * (sx / n);
    const double vy = syy / n - (sy / n) * (sy / n);
    const double corr = cov / std::sqrt(vx * vy);
    CHECK(std::abs(corr) < 5.0 / std::sqrt(double(n)));
}
