#pragma once

// Thin FFTW wrapper. Plans are created once per (kind, size) under a global lock and
// then executed on caller-owned arrays through the new-array interface, which is
// thread-safe. Plans are made with FFTW_UNALIGNED so std::vector storage is fine.

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "ampint/core/error.hpp"

namespace ampint::fft {

using cvec = std::vector<std::complex<double>>;

/// Smallest size >= n whose only prime factors are 2, 3, 5 and 7.
inline std::size_t next_fast_size(std::size_t n) {
    if (n <= 1) return 1;
    for (std::size_t m = n;; ++m) {
        std::size_t r = m;
        for (std::size_t p : {2u, 3u, 5u, 7u})
            while (r % p == 0) r /= p;
        if (r == 1) return m;
    }
}

namespace detail {

enum class Kind { forward, backward, r2c, c2r };

class PlanCache {
public:
    static PlanCache &instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(Kind kind, std::size_t n) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(static_cast<int>(kind), n);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        const int len = static_cast<int>(n);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fftw_plan plan = nullptr;
        auto *c = fftw_alloc_complex(n);
        switch (kind) {
        case Kind::forward:
            plan = fftw_plan_dft_1d(len, c, c, FFTW_FORWARD, flags);
            break;
        case Kind::backward:
            plan = fftw_plan_dft_1d(len, c, c, FFTW_BACKWARD, flags);
            break;
        case Kind::r2c: {
            auto *r = fftw_alloc_real(n);
            plan = fftw_plan_dft_r2c_1d(len, r, c, flags);
            fftw_free(r);
            break;
        }
        case Kind::c2r: {
            auto *r = fftw_alloc_real(n);
            plan = fftw_plan_dft_c2r_1d(len, c, r, flags);
            fftw_free(r);
            break;
        }
        }
        fftw_free(c);
        if (!plan) throw Error("FFTW plan creation failed");
        plans_.emplace(key, plan);
        return plan;
    }

    PlanCache(const PlanCache &) = delete;
    PlanCache &operator=(const PlanCache &) = delete;

private:
    PlanCache() = default;
    ~PlanCache() {
        for (auto &kv : plans_) fftw_destroy_plan(kv.second);
    }

    std::mutex mutex_;
    std::map<std::pair<int, std::size_t>, fftw_plan> plans_;
};

inline fftw_complex *as_fftw(std::complex<double> *p) { return reinterpret_cast<fftw_complex *>(p); }

} // namespace detail

/// In-place forward DFT, X[k] = sum_n x[n] exp(-2 pi i k n / N). Unnormalized.
inline void forward(cvec &x) {
    if (x.empty()) return;
    auto plan = detail::PlanCache::instance().get(detail::Kind::forward, x.size());
    fftw_execute_dft(plan, detail::as_fftw(x.data()), detail::as_fftw(x.data()));
}

/// In-place inverse DFT without the 1/N factor.
inline void backward(cvec &x) {
    if (x.empty()) return;
    auto plan = detail::PlanCache::instance().get(detail::Kind::backward, x.size());
    fftw_execute_dft(plan, detail::as_fftw(x.data()), detail::as_fftw(x.data()));
}

/// Real-to-half-complex transform of x zero-padded to length n.
inline cvec rfft(std::span<const double> x, std::size_t n) {
    std::vector<double> buf(n, 0.0);
    std::copy_n(x.begin(), std::min(n, x.size()), buf.begin());
    cvec out(n / 2 + 1);
    auto plan = detail::PlanCache::instance().get(detail::Kind::r2c, n);
    fftw_execute_dft_r2c(plan, buf.data(), detail::as_fftw(out.data()));
    return out;
}

/// Inverse of rfft without the 1/n factor. `spectrum` is consumed.
inline std::vector<double> irfft(cvec spectrum, std::size_t n) {
    if (spectrum.size() != n / 2 + 1) throw Error("irfft: spectrum length does not match n");
    std::vector<double> out(n);
    auto plan = detail::PlanCache::instance().get(detail::Kind::c2r, n);
    fftw_execute_dft_c2r(plan, detail::as_fftw(spectrum.data()), out.data());
    return out;
}

/// Causal linear convolution y[n] = sum_{m<L} k[m] x[n-m], returned for n in [0, x.size()).
/// Short kernels use the direct sum, longer ones an FFT of fast size.
inline std::vector<double> causal_convolve(std::span<const double> x, std::span<const double> k) {
    const std::size_t N = x.size(), L = k.size();
    std::vector<double> y(N, 0.0);
    if (N == 0 || L == 0) return y;
    if (L <= 32) {
        for (std::size_t n = 0; n < N; ++n) {
            const std::size_t mmax = std::min(L, n + 1);
            double acc = 0.0;
            for (std::size_t m = 0; m < mmax; ++m) acc += k[m] * x[n - m];
            y[n] = acc;
        }
        return y;
    }
    const std::size_t P = next_fast_size(N + L - 1);
    auto X = rfft(x, P);
    auto K = rfft(k, P);
    for (std::size_t i = 0; i < X.size(); ++i) X[i] *= K[i];
    auto full = irfft(std::move(X), P);
    const double inv = 1.0 / static_cast<double>(P);
    for (std::size_t n = 0; n < N; ++n) y[n] = full[n] * inv;
    return y;
}

/// Full linear autocorrelation r[j] = sum_m k[m] k[m+j] for j in [0, max_lag].
inline std::vector<double> autocorrelation(std::span<const double> k, std::size_t max_lag) {
    const std::size_t L = k.size();
    std::vector<double> r(max_lag + 1, 0.0);
    if (L == 0) return r;
    const std::size_t top = std::min(max_lag, L - 1);
    if (L * (top + 1) <= (std::size_t{1} << 22)) {
        for (std::size_t j = 0; j <= top; ++j) {
            double acc = 0.0;
            for (std::size_t m = 0; m + j < L; ++m) acc += k[m] * k[m + j];
            r[j] = acc;
        }
        return r;
    }
    const std::size_t P = next_fast_size(2 * L);
    auto K = rfft(k, P);
    for (auto &z : K) z = std::norm(z);
    auto full = irfft(std::move(K), P);
    const double inv = 1.0 / static_cast<double>(P);
    for (std::size_t j = 0; j <= top; ++j) r[j] = full[j] * inv;
    return r;
}

} // namespace ampint::fft
