#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ampint/core/error.hpp"
#include "ampint/core/fft.hpp"
#include "ampint/fields/types.hpp"

namespace ampint {

/**
 * @brief Sampled detector impulse response k[m], m = 0..L-1, causal.
 *
 * Convolution convention: i[n] = dt * sum_m k[m] x[n-m], so Q1 = dt*sum k and
 * Q2 = dt*sum k^2 approximate the continuous integrals. Composite kernels keep
 * the list of analytic factors so their transfer function stays closed-form.
 */
class ResponseKernel {
public:
    enum class Kind { delta, box, exponential, custom };

    struct Factor {
        Kind kind;
        double width;
    };

    ResponseKernel() = default;

    /// Single sample of height 1/dt: an instantaneous detector.
    static ResponseKernel delta(double dt) { return make(Kind::delta, {1.0 / dt}, dt, dt, {{Kind::delta, dt}}); }

    /// k = 1/T on [0, T); T is rounded to whole samples.
    static ResponseKernel box(double T, double dt) {
        require(dt > 0.0, "kernel.dt", "must be positive");
        require(T >= dt * (1.0 - 1e-9), "kernel.width", "box width must be at least one sample");
        const auto L = static_cast<std::size_t>(std::llround(T / dt));
        const double Tq = static_cast<double>(L) * dt;
        return make(Kind::box, std::vector<double>(L, 1.0 / Tq), dt, Tq, {{Kind::box, Tq}});
    }

    /// k[m] = (1-r)/dt r^m with r = exp(-dt/T_R), truncated after `truncate` time constants.
    static ResponseKernel exponential(double T_R, double dt, double truncate = 25.0) {
        require(dt > 0.0, "kernel.dt", "must be positive");
        require(T_R > 0.0, "kernel.width", "time constant must be positive");
        const double r = std::exp(-dt / T_R);
        const auto L = static_cast<std::size_t>(std::ceil(truncate * T_R / dt)) + 1;
        std::vector<double> k(L);
        double v = (1.0 - r) / dt;
        for (auto &x : k) {
            x = v;
            v *= r;
        }
        return make(Kind::exponential, std::move(k), dt, T_R, {{Kind::exponential, T_R}});
    }

    static ResponseKernel custom(std::vector<double> samples, double dt, double width) {
        require(dt > 0.0, "kernel.dt", "must be positive");
        return make(Kind::custom, std::move(samples), dt, width, {{Kind::custom, width}});
    }

    /// f^2 of a pulse template, used to fold the pulse shape into an effective kernel.
    static ResponseKernel pulse_intensity(const PulseTemplate &tpl) {
        std::vector<double> k(tpl.f.size());
        for (std::size_t i = 0; i < k.size(); ++i) k[i] = tpl.f[i] * tpl.f[i];
        return custom(std::move(k), tpl.dt, static_cast<double>(tpl.f.size()) * tpl.dt);
    }

    Kind kind() const { return kind_; }
    double dt() const { return dt_; }
    double width() const { return width_; }
    std::size_t size() const { return k_.size(); }
    std::span<const double> samples() const { return k_; }
    double q1() const { return q1_; }
    double q2() const { return q2_; }
    const std::vector<Factor> &factors() const { return factors_; }

    /// R(lag) = dt * sum_m k[m] k[m+lag] (symmetric in lag). Exact sum.
    double overlap(long lag) const {
        const auto j = static_cast<std::size_t>(lag < 0 ? -lag : lag);
        double acc = 0.0;
        for (std::size_t m = 0; m + j < k_.size(); ++m) acc += k_[m] * k_[m + j];
        return acc * dt_;
    }

    /// R(j) for j = 0..max_lag; FFT for long kernels, exact sums for short ones.
    std::vector<double> autocorrelation(std::size_t max_lag) const {
        auto r = fft::autocorrelation(k_, max_lag);
        for (auto &v : r) v *= dt_;
        return r;
    }

    /// |k(w)|^2 of the continuous kernel when every factor is analytic, else the DTFT.
    double transfer_power(double omega) const {
        double p = 1.0;
        for (const auto &f : factors_) {
            switch (f.kind) {
            case Kind::delta:
                break;
            case Kind::box: {
                const double x = 0.5 * omega * f.width;
                const double s = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
                p *= s * s;
                break;
            }
            case Kind::exponential:
                p /= 1.0 + omega * omega * f.width * f.width;
                break;
            case Kind::custom:
                return dtft_power(omega);
            }
        }
        return p;
    }

    /// |dt * sum_m k[m] exp(i w m dt)|^2.
    double dtft_power(double omega) const {
        cplx acc{};
        for (std::size_t m = 0; m < k_.size(); ++m) acc += k_[m] * std::polar(1.0, omega * dt_ * static_cast<double>(m));
        return std::norm(acc * dt_);
    }

    std::string describe() const {
        std::string s;
        for (const auto &f : factors_) {
            if (!s.empty()) s += "*";
            switch (f.kind) {
            case Kind::delta: s += "delta"; break;
            case Kind::box: s += "box(" + std::to_string(f.width * 1e9) + "ns)"; break;
            case Kind::exponential: s += "exp(" + std::to_string(f.width * 1e9) + "ns)"; break;
            case Kind::custom: s += "custom(" + std::to_string(f.width * 1e9) + "ns)"; break;
            }
        }
        return s;
    }

    /// Discrete convolution of two kernels on the same grid: (a*b)[n] = dt sum a[m] b[n-m].
    friend ResponseKernel convolve(const ResponseKernel &a, const ResponseKernel &b) {
        require(a.dt_ == b.dt_, "kernel", "cannot convolve kernels on different grids");
        std::vector<double> x(a.k_.size() + b.k_.size() - 1, 0.0);
        std::copy(a.k_.begin(), a.k_.end(), x.begin());
        auto y = fft::causal_convolve(x, b.k_);
        for (auto &v : y) v = std::max(v * a.dt_, 0.0);
        auto factors = a.factors_;
        factors.insert(factors.end(), b.factors_.begin(), b.factors_.end());
        const Kind kind = factors.size() == 1 ? factors.front().kind : Kind::custom;
        return make(kind, std::move(y), a.dt_, a.width_ + b.width_, std::move(factors));
    }

private:
    static ResponseKernel make(Kind kind, std::vector<double> k, double dt, double width, std::vector<Factor> factors) {
        require(!k.empty(), "kernel", "needs at least one sample");
        ResponseKernel r;
        r.kind_ = kind;
        r.k_ = std::move(k);
        r.dt_ = dt;
        r.width_ = width;
        r.factors_ = std::move(factors);
        double s1 = 0.0, s2 = 0.0;
        for (double v : r.k_) {
            require(v >= 0.0 && std::isfinite(v), "kernel", "samples must be finite and nonnegative");
            s1 += v;
            s2 += v * v;
        }
        r.q1_ = s1 * dt;
        r.q2_ = s2 * dt;
        require(r.q1_ > 0.0 && r.q2_ > 0.0, "kernel", "Q1 and Q2 must be positive");
        return r;
    }

    Kind kind_ = Kind::delta;
    std::vector<double> k_;
    double dt_ = 0.0;
    double width_ = 0.0;
    double q1_ = 0.0, q2_ = 0.0;
    std::vector<Factor> factors_;
};

} // namespace ampint
