#include "sfglab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace sfglab {

namespace {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

/// FFTW planning is not thread-safe, so plans are created under a lock and
/// reused; fftw_execute_dft on caller-owned arrays is safe concurrently.
/// FFTW_UNALIGNED lets us run plans directly on std::vector storage.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto& plan = plans_[{n, sign}];
        if (!plan) {
            std::vector<std::complex<double>> probe(n);
            auto* p = reinterpret_cast<fftw_complex*>(probe.data());
            plan = fftw_plan_dft_1d(int(n), p, p, sign,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
            if (!plan) throw std::runtime_error("FFT plan creation failed");
        }
        return plan;
    }

private:
    PlanCache() = default;
    ~PlanCache() {
        for (auto& [key, plan] : plans_)
            if (plan) fftw_destroy_plan(plan);
    }
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

void run(fftw_plan plan, std::vector<std::complex<double>>& buf) {
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(plan, p, p);
}

} // namespace

std::vector<std::complex<double>> linear_autoconvolution(
    const std::vector<std::complex<double>>& in) {
    const std::size_t n = in.size();
    if (n == 0) return {};
    const std::size_t out_len = 2 * n - 1;
    const std::size_t len = next_pow2(out_len);

    std::vector<std::complex<double>> buf(len, {0.0, 0.0});
    std::copy(in.begin(), in.end(), buf.begin());

    PlanCache& cache = PlanCache::instance();
    run(cache.get(len, FFTW_FORWARD), buf);
    for (auto& x : buf) x *= x;
    run(cache.get(len, FFTW_BACKWARD), buf);

    std::vector<std::complex<double>> out(out_len);
    const double scale = 1.0 / double(len);
    for (std::size_t q = 0; q < out_len; ++q) out[q] = buf[q] * scale;
    return out;
}

std::vector<std::complex<double>> linear_convolution(
    const std::vector<std::complex<double>>& a,
    const std::vector<std::complex<double>>& b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t out_len = a.size() + b.size() - 1;
    const std::size_t len = next_pow2(out_len);

    std::vector<std::complex<double>> fa(len, {0.0, 0.0});
    std::vector<std::complex<double>> fb(len, {0.0, 0.0});
    std::copy(a.begin(), a.end(), fa.begin());
    std::copy(b.begin(), b.end(), fb.begin());

    PlanCache& cache = PlanCache::instance();
    fftw_plan fwd = cache.get(len, FFTW_FORWARD);
    run(fwd, fa);
    run(fwd, fb);
    for (std::size_t k = 0; k < len; ++k) fa[k] *= fb[k];
    run(cache.get(len, FFTW_BACKWARD), fa);

    std::vector<std::complex<double>> out(out_len);
    const double scale = 1.0 / double(len);
    for (std::size_t q = 0; q < out_len; ++q) out[q] = fa[q] * scale;
    return out;
}

std::vector<std::complex<double>> fourier_transform(
    const std::vector<std::complex<double>>& in, bool inverse) {
    if (in.empty()) return {};
    std::vector<std::complex<double>> buf = in;
    run(PlanCache::instance().get(buf.size(), inverse ? FFTW_BACKWARD : FFTW_FORWARD),
        buf);
    if (inverse) {
        const double scale = 1.0 / double(buf.size());
        for (auto& x : buf) x *= scale;
    }
    return buf;
}

std::vector<double> linear_convolution(const std::vector<double>& a,
                                       const std::vector<double>& b) {
    std::vector<std::complex<double>> ca(a.begin(), a.end());
    std::vector<std::complex<double>> cb(b.begin(), b.end());
    const auto cc = linear_convolution(ca, cb);
    std::vector<double> out(cc.size());
    for (std::size_t i = 0; i < cc.size(); ++i) out[i] = cc[i].real();
    return out;
}

} // namespace sfglab
