#include "doctest.h"

#include <complex>
#include <random>
#include <vector>

#include "sfglab/fft.hpp"

using namespace sfglab;

namespace {

std::vector<std::complex<double>> random_field(int n, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<std::complex<double>> v;
    v.reserve(size_t(n));
    for (int i = 0; i < n; ++i) v.push_back({dist(gen), dist(gen)});
    return v;
}

std::vector<std::complex<double>> direct_autoconv(
    const std::vector<std::complex<double>>& a) {
    const int n = int(a.size());
    std::vector<std::complex<double>> out(size_t(2 * n - 1), {0.0, 0.0});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[size_t(i + j)] += a[size_t(i)] * a[size_t(j)];
    return out;
}

} // namespace

TEST_CASE("FFT autoconvolution matches the direct quadratic sum") {
    for (int n : {4, 16, 33, 128}) {
        const auto a = random_field(n, unsigned(n));
        const auto fast = linear_autoconvolution(a);
        const auto slow = direct_autoconv(a);
        REQUIRE(fast.size() == slow.size());
        double scale = 0.0;
        for (const auto& v : slow) scale = std::max(scale, std::abs(v));
        for (size_t k = 0; k < fast.size(); ++k)
            CHECK(std::abs(fast[k] - slow[k]) <= 1e-12 * scale);
    }
}

TEST_CASE("FFT linear convolution matches the direct sum") {
    const auto a = random_field(24, 1);
    const auto b = random_field(17, 2);
    const auto fast = linear_convolution(a, b);
    REQUIRE(fast.size() == a.size() + b.size() - 1);
    std::vector<std::complex<double>> slow(fast.size(), {0.0, 0.0});
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) slow[i + j] += a[i] * b[j];
    double scale = 0.0;
    for (const auto& v : slow) scale = std::max(scale, std::abs(v));
    for (size_t k = 0; k < fast.size(); ++k)
        CHECK(std::abs(fast[k] - slow[k]) <= 1e-12 * scale);
}

TEST_CASE("real convolution overload agrees with the complex one") {
    std::vector<double> a{1.0, 2.0, 0.5, -0.25, 3.0};
    std::vector<double> b{0.3, 0.3, 0.4};
    const auto real_out = linear_convolution(a, b);
    std::vector<std::complex<double>> ca(a.begin(), a.end());
    std::vector<std::complex<double>> cb(b.begin(), b.end());
    const auto cplx_out = linear_convolution(ca, cb);
    REQUIRE(real_out.size() == cplx_out.size());
    for (size_t k = 0; k < real_out.size(); ++k) {
        CHECK(real_out[k] == doctest::Approx(cplx_out[k].real()).epsilon(1e-12));
        CHECK(std::abs(cplx_out[k].imag()) < 1e-12);
    }
}

TEST_CASE("forward and inverse transforms round-trip") {
    const auto a = random_field(64, 3);
    const auto back = fourier_transform(fourier_transform(a, false), true);
    REQUIRE(back.size() == a.size());
    for (size_t k = 0; k < a.size(); ++k) CHECK(std::abs(back[k] - a[k]) < 1e-13);
}

TEST_CASE("repeated transforms of the same size reuse plans consistently") {
    // Two identical calls must give bit-identical results (cached plans use
    // the caller's buffers, never stale internal state).
    const auto a = random_field(48, 4);
    const auto first = linear_autoconvolution(a);
    const auto second = linear_autoconvolution(a);
    REQUIRE(first.size() == second.size());
    for (size_t k = 0; k < first.size(); ++k) {
        CHECK(first[k].real() == second[k].real());
        CHECK(first[k].imag() == second[k].imag());
    }
}
