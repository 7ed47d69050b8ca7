#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "sfb/errors.hpp"
#include "sfb/types.hpp"

namespace sfb {

namespace detail {

// Backward (Clenshaw) recurrence for sum c_k cos(k theta) and
// sum c_k sin(k theta), k = 0..M. Near cos(theta) = +-1 the plain recurrence
// loses O(M^2 eps); the Reinsch difference forms keep the error near
// O(eps sum|c|), which matters here with M in the millions.
template <class CoefFn>
inline void clenshaw_trig(std::int64_t M, const CoefFn& c, double theta,
                          double* cos_sum, double* sin_sum) {
    const double x = std::cos(theta);
    const double s = std::sin(theta);
    if (M < 0) {
        *cos_sum = 0.0;
        *sin_sum = 0.0;
        return;
    }
    if (x > 0.5) {
        const double sh = std::sin(0.5 * theta);
        const double w = -4.0 * sh * sh; // 2x - 2
        double u = 0.0, d = 0.0;
        for (std::int64_t k = M; k >= 1; --k) {
            d = c(k) + w * u + d;
            u = d + u;
        }
        *cos_sum = c(0) + 0.5 * w * u + d;
        *sin_sum = s * u;
    } else if (x < -0.5) {
        const double ch = std::cos(0.5 * theta);
        const double W = 4.0 * ch * ch; // 2x + 2
        double u = 0.0, e = 0.0;
        for (std::int64_t k = M; k >= 1; --k) {
            e = c(k) + W * u - e;
            u = e - u;
        }
        *cos_sum = c(0) + 0.5 * W * u - e;
        *sin_sum = s * u;
    } else {
        double u1 = 0.0, u2 = 0.0;
        for (std::int64_t k = M; k >= 1; --k) {
            const double u0 = c(k) + 2.0 * x * u1 - u2;
            u2 = u1;
            u1 = u0;
        }
        *cos_sum = c(0) + x * u1 - u2;
        *sin_sum = s * u1;
    }
}

} // namespace detail

// A cosine series sum_{m>=start} b_m cos(m theta) truncated at index M, with
// everything needed to evaluate it with a certified error:
//  - tail_bound   >= sum_{m>M} b_m (worst case over theta),
//  - tail_sum     = Euler-Maclaurin value of that sum (error tail_sum_err),
//    used to evaluate at theta == 0 to far better than tail_bound,
//  - next_coeff/next_coeff2 = b_{M+1}, b_{M+2}, feeding a summation-by-parts
//    tail estimate at theta != 0 whose error is O(delta b / |1-z|^2).
// Coefficients must be positive and decreasing from `start_monotone` on.
struct TruncatedCosineSeries {
    int start = 0;
    std::vector<double> coeffs;
    double tail_bound = 0.0;
    double tail_sum = 0.0;
    double tail_sum_err = 0.0;
    double next_coeff = 0.0;
    double next_coeff2 = 0.0;
    double decay_exponent = 2.0;

    // filled by the builder
    double coeff_sum = 0.0;      // sum of stored coefficients (Neumaier)
    double weighted_sum = 0.0;   // sum of m * b_m, for derivative noise floors

    std::int64_t last_index() const {
        return static_cast<std::int64_t>(start) + static_cast<std::int64_t>(coeffs.size()) - 1;
    }

    double coefficient(std::int64_t m) const {
        if (m < start || m > last_index()) return 0.0;
        return coeffs[static_cast<std::size_t>(m - start)];
    }

    ValueWithError value_at_zero() const {
        return {coeff_sum + tail_sum, tail_sum_err + 4e-16 * std::fabs(coeff_sum)};
    }

    ValueWithError eval(double theta) const {
        const double tr = reduce_angle(theta);
        const double delta = gap_to_zero(tr);
        const std::int64_t M = last_index();
        const double noise = 1e-15 * coeff_sum * std::log2(static_cast<double>(M) + 4.0);

        double cs = 0.0, ss = 0.0;
        detail::clenshaw_trig(M, [this](std::int64_t k) { return coefficient(k); }, tr, &cs, &ss);

        if (delta <= kZeroSwitch) {
            // near-zero: the oscillatory tail estimate degenerates; use the
            // Euler-Maclaurin theta = 0 tail instead
            if (decay_exponent >= 1.99) {
                const double c_hat = 1.3 * next_coeff * static_cast<double>(M) * static_cast<double>(M);
                return {cs + tail_sum, tail_sum_err + 2.5 * c_hat * delta + noise};
            }
            return {cs + tail_sum, 2.0 * tail_bound + noise};
        }

        const std::complex<double> corr = tail_estimate(tr, M);
        const double one_mz_sq = 4.0 * std::pow(std::sin(0.5 * tr), 2);
        const double db = std::max(next_coeff - next_coeff2, 0.0);
        return {cs + corr.real(), 2.0 * db / one_mz_sq + noise};
    }

    // termwise derivative: -sum m b_m sin(m theta) plus the differentiated
    // tail estimate
    ValueWithError eval_derivative(double theta) const {
        const double tr = reduce_angle(theta);
        const double delta = gap_to_zero(tr);
        if (delta < 1e-8)
            throw DomainError("TruncatedCosineSeries: derivative requested too close to 0 mod 2pi");
        const std::int64_t M = last_index();
        const double noise =
            1e-15 * (weighted_sum + 1.0) * std::log2(static_cast<double>(M) + 4.0);

        double cs = 0.0, ss = 0.0;
        detail::clenshaw_trig(
            M, [this](std::int64_t k) { return static_cast<double>(k) * coefficient(k); }, tr,
            &cs, &ss);

        const std::complex<double> z(std::cos(tr), std::sin(tr));
        const std::complex<double> one_mz = one_minus_z(tr);
        const std::complex<double> zM1 = power_phase(tr, M + 1);
        const std::complex<double> i(0.0, 1.0);
        const std::complex<double> dcorr =
            next_coeff * i * zM1 * (static_cast<double>(M + 1) * one_mz + z) / (one_mz * one_mz);

        const double one_mz_sq = std::norm(one_mz);
        const double one_mz_abs = std::sqrt(one_mz_sq);
        const double db = std::max(next_coeff - next_coeff2, 0.0);
        const double err = (3.0 * static_cast<double>(M + 1) * db + 3.0 * db / one_mz_abs) / one_mz_sq +
                           noise;
        return {-ss + dcorr.real(), err};
    }

    static constexpr double kZeroSwitch = 1e-6;

private:
    static std::complex<double> one_minus_z(double tr) {
        const double sh = std::sin(0.5 * tr), ch = std::cos(0.5 * tr);
        return {2.0 * sh * sh, -2.0 * sh * ch}; // (1 - cos) - i sin, cancellation-free
    }

    static std::complex<double> power_phase(double tr, std::int64_t k) {
        const double phase = std::fmod(static_cast<double>(k) * tr, kTwoPi);
        return {std::cos(phase), std::sin(phase)};
    }

    // b_{M+1} z^{M+1} / (1 - z): leading term of the summation-by-parts
    // expansion of sum_{m>M} b_m z^m
    std::complex<double> tail_estimate(double tr, std::int64_t M) const {
        const std::complex<double> one_mz = one_minus_z(tr);
        return next_coeff * power_phase(tr, M + 1) / one_mz;
    }
};

namespace detail {

// Neumaier-compensated accumulator
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double get() const { return sum_ + comp_; }

private:
    double sum_ = 0.0, comp_ = 0.0;
};

} // namespace detail

} // namespace sfb
