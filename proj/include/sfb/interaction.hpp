#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "sfb/cosine_series.hpp"
#include "sfb/errors.hpp"
#include "sfb/quadrature.hpp"
#include "sfb/sequences.hpp"
#include "sfb/special.hpp"
#include "sfb/tail_sum.hpp"
#include "sfb/types.hpp"

namespace sfb {

// ---------------------------------------------------------------------------
// cosine coefficients of the interaction function
// ---------------------------------------------------------------------------

namespace detail {

// log of b_m = k_alpha/((N-1)!)^2 * ((m-1)_{N-1})^2 * B(m-N+1, alpha+1),
// valid for real m > N - 1. Offsets are passed exactly so the decay survives
// arguments beyond 2^53 (the semi-infinite tail integrals go there).
inline double log_interaction_coefficient(const SpaceParams& p, double m) {
    const int N = p.degree;
    const double al = p.alpha;
    return std::log(p.normalization()) - 2.0 * log_gamma(static_cast<double>(N)) +
           log_gamma(al + 1.0) + log_gamma_diff(m, 1.0 - N) +
           log_gamma_diff(m, al + 2.0 - N);
}

// b_{m+1} / b_m, exact rational form
inline double interaction_coefficient_ratio(const SpaceParams& p, double m) {
    const int N = p.degree;
    return m * m / ((m - N + 1.0) * (m - N + p.alpha + 2.0));
}

// index from which the coefficients are strictly decreasing
inline std::int64_t coefficient_monotone_start(const SpaceParams& p) {
    std::int64_t m = p.degree;
    while (interaction_coefficient_ratio(p, static_cast<double>(m)) >= 1.0) ++m;
    return m;
}

} // namespace detail

// b_m of the series sum_{m>=N} b_m cos(m theta); b_N = 1 for every (N, alpha)
inline double series_coefficient(const SpaceParams& p, std::int64_t m) {
    p.validate();
    if (m < p.degree) throw DomainError("series_coefficient: requires m >= degree");
    return std::exp(detail::log_interaction_coefficient(p, static_cast<double>(m)));
}

inline constexpr std::int64_t kSeriesCoefficientCap = 10'000'000;

// Adaptive truncation. Primary rule: stop once the next coefficient falls
// below tol/2, which pins the evaluation error everywhere. When the hard cap
// cannot reach that (slow decay near the membership boundary), fall back to
// the milder requirement that the parts-summed tail estimate is accurate to
// tol for angles at least 0.05 away from 0 mod 2pi, i.e.
// 2 (b_{M+1} - b_{M+2}) / (2 sin 0.025)^2 <= tol. The Euler-Maclaurin tail
// covers theta = 0 in both regimes. Throws when even the fallback cannot be
// met under the cap.
inline TruncatedCosineSeries build_series(const SpaceParams& p, double tol) {
    p.validate();
    if (!(tol > 0.0)) throw DomainError("build_series: requires tol > 0");

    const int N = p.degree;
    const std::int64_t m_min =
        std::max<std::int64_t>({64 + N, detail::coefficient_monotone_start(p) + 2, N + 8});
    const double fallback_scale = 2.0 / (4.0 * std::pow(std::sin(0.025), 2));

    // dry scan of the ratio recurrence to pick the truncation index
    std::int64_t m_final = -1;
    {
        double b = 1.0;
        std::int64_t m = N;
        std::int64_t m_fallback = -1;
        double fallback_at_cap = 0.0;
        while (m <= kSeriesCoefficientCap) {
            const double b1 =
                b * detail::interaction_coefficient_ratio(p, static_cast<double>(m));
            const double b2 =
                b1 * detail::interaction_coefficient_ratio(p, static_cast<double>(m + 1));
            if (m >= m_min) {
                if (b1 <= 0.5 * tol) {
                    m_final = m;
                    break;
                }
                if (m_fallback < 0 && fallback_scale * (b1 - b2) <= tol) m_fallback = m;
            }
            fallback_at_cap = fallback_scale * (b1 - b2);
            b = b1;
            ++m;
        }
        if (m_final < 0) m_final = m_fallback;
        if (m_final < 0)
            throw NonConvergence(
                "build_series: coefficient cap reached before the requested tolerance",
                fallback_at_cap);
    }

    TruncatedCosineSeries s;
    s.start = N;
    s.decay_exponent = p.coefficient_decay();
    s.coeffs.reserve(static_cast<std::size_t>(m_final - N + 1));

    detail::CompensatedSum csum, wsum;
    double b = 1.0; // b_N
    for (std::int64_t m = N; m <= m_final; ++m) {
        s.coeffs.push_back(b);
        csum.add(b);
        wsum.add(b * static_cast<double>(m));
        b *= detail::interaction_coefficient_ratio(p, static_cast<double>(m));
    }
    s.next_coeff = b;
    s.next_coeff2 = b * detail::interaction_coefficient_ratio(p, static_cast<double>(m_final + 1));
    s.coeff_sum = csum.get();
    s.weighted_sum = wsum.get();

    const TailSum tail = euler_maclaurin_tail(
        [&p](double x) { return std::exp(detail::log_interaction_coefficient(p, x)); },
        static_cast<double>(m_final + 1));
    s.tail_sum = tail.value;
    s.tail_sum_err = tail.err;
    // Integral-comparison bound on the tail, sum_{m>M} b_m <= ~b_{M+1} M/(beta-1).
    // For beta within 0.05 of 1 the tail mass sits at indices beyond double
    // range, where no sampled scheme (including the one above) can see it;
    // report the analytic bound as the error instead of a false certificate.
    const double beta = s.decay_exponent;
    const double analytic_bound =
        1.5 * s.next_coeff * static_cast<double>(m_final + 1) / (beta - 1.0);
    if (beta < 1.05) {
        s.tail_sum_err = std::max(tail.err, analytic_bound);
        s.tail_bound = analytic_bound;
    } else {
        s.tail_bound = tail.value + tail.err;
    }
    return s;
}

inline ValueWithError phi_series(const TruncatedCosineSeries& s, double theta) {
    return s.eval(theta);
}

// ---------------------------------------------------------------------------
// quadrature forms
// ---------------------------------------------------------------------------

inline constexpr double kQuadratureAngleFloor = 1e-3;

// Rational-kernel integral form: prefactor * int_0^1 U_N(r, theta) r^{N-1}
// (1-r)^{alpha-N+1} dr. Valid for theta away from 0 mod 2pi, where the
// kernel denominator stays bounded away from its double zero.
inline ValueWithError phi_quadrature(const SpaceParams& p, double theta) {
    p.validate();
    const double tr = reduce_angle(theta);
    const double delta = gap_to_zero(tr);
    if (delta < kQuadratureAngleFloor)
        throw DomainError(
            "phi_quadrature: theta within 1e-3 of 0 mod 2pi; use the series evaluation there");

    const int N = p.degree;
    const double al = p.alpha;
    const double prefactor =
        p.normalization() / factorial(N - 1) * falling_factorial(al, N - 1);

    // numerator polynomial coefficients of U_N in powers of r
    std::vector<double> num(static_cast<std::size_t>(N) + 1);
    for (int j = 0; j <= N; ++j) {
        double binom = 1.0;
        for (int i = 0; i < j; ++i) binom = binom * (N - i) / (i + 1);
        const int sign = (j % 2 == 0) ? 1 : -1;
        num[static_cast<std::size_t>(j)] = binom * sign * std::cos((N - j) * tr);
    }
    const double c = std::cos(tr);
    const double power = al - N + 1.0;

    auto integrand = [&](double r) {
        double poly = 0.0;
        for (int j = N; j >= 0; --j) poly = poly * r + num[static_cast<std::size_t>(j)];
        const double den = 1.0 + r * r - 2.0 * r * c;
        double denN = 1.0;
        for (int i = 0; i < N; ++i) denN *= den;
        const double w = std::pow(r, N - 1.0) * std::pow(1.0 - r, power);
        return poly / denN * w;
    };

    const QuadratureResult q = integrate(integrand, 0.0, 1.0, 1e-10, 2000);
    if (!q.converged && q.err * std::fabs(prefactor) > 1e-9)
        throw NonConvergence("phi_quadrature: panel budget exhausted",
                             q.err * std::fabs(prefactor));
    return {prefactor * q.value, std::fabs(prefactor) * q.err + 1e-13};
}

// Log-kernel form specific to degree 2, alpha = 3:
// 12 int_0^1 log(1 + r^2 - 2 r cos(theta)) (2 - 3r) dr
inline double phi_closed_n2a3(double theta) {
    const double tr = reduce_angle(theta);
    if (gap_to_zero(tr) <= 0.0)
        throw DomainError("phi_closed_n2a3: theta must lie in (0, 2pi)");
    const double c = std::cos(tr);
    auto integrand = [c](double r) {
        return std::log(1.0 + r * r - 2.0 * r * c) * (2.0 - 3.0 * r);
    };
    const QuadratureResult q = integrate(integrand, 0.0, 1.0, 1e-12, 4000);
    return 12.0 * q.value;
}

// Closed-form derivative for degree 2, alpha = 3 (from the antiderivative of
// the log-kernel form; arctan((1+cos)/sin) == (pi - theta)/2 on (0, 2pi)).
inline double phi_prime_closed_n2a3(double theta) {
    const double tr = reduce_angle(theta);
    if (gap_to_zero(tr) <= 0.0)
        throw DomainError("phi_prime_closed_n2a3: theta must lie in (0, 2pi)");
    const double c = std::cos(tr), s = std::sin(tr);
    const double one_m_c = 2.0 * std::pow(std::sin(0.5 * tr), 2); // 1 - cos, stable
    return 24.0 * (-3.0 * s + s * (1.0 - 3.0 * c) * std::log(2.0 * one_m_c) +
                   (2.0 * c * (1.0 - 3.0 * c) + 3.0) * 0.5 * (kPi - tr));
}

namespace detail {

// (N-1)-th derivative of r^{N-1} g^{(N-1)}(1-r) for g = r^alpha, by Leibniz
inline double phi_prime_weight(const SpaceParams& p, double r) {
    const int N = p.degree;
    const double al = p.alpha;
    const double gamma = al - N + 1.0;
    double sum = 0.0;
    for (int j = 0; j <= N - 1; ++j) {
        double binom = 1.0;
        for (int i = 0; i < j; ++i) binom = binom * (N - 1 - i) / (i + 1);
        const double rised = falling_factorial(static_cast<double>(N - 1), j); // (N-1)_j
        const double gfac = falling_factorial(gamma, N - 1 - j);
        const int sign = ((N - 1 - j) % 2 == 0) ? 1 : -1;
        sum += binom * rised * std::pow(r, static_cast<double>(N - 1 - j)) * sign * gfac *
               std::pow(1.0 - r, gamma - (N - 1 - j));
    }
    return falling_factorial(al, N - 1) * sum;
}

} // namespace detail

// Derivative by differentiating the mid integral form under the integral
// sign; independent of the series route. theta away from 0 mod 2pi.
inline ValueWithError phi_prime_quadrature(const SpaceParams& p, double theta) {
    p.validate();
    const double tr = reduce_angle(theta);
    const double delta = gap_to_zero(tr);
    if (delta < kQuadratureAngleFloor)
        throw DomainError("phi_prime_quadrature: theta within 1e-3 of 0 mod 2pi");

    const int N = p.degree;
    const double sign = (N % 2 == 0) ? 1.0 : -1.0;
    const double A = p.normalization() * sign / (factorial(N - 1) * factorial(N - 1));
    const double c = std::cos(tr), s = std::sin(tr);
    auto integrand = [&](double r) {
        const double den = 1.0 + r * r - 2.0 * r * c;
        return (1.0 - r * r) * detail::phi_prime_weight(p, r) / (den * den);
    };
    const QuadratureResult q = integrate(integrand, 0.0, 1.0, 1e-10, 4000);
    return {A * s * q.value, std::fabs(A) * q.err + 1e-13};
}

// ---------------------------------------------------------------------------
// cached evaluator
// ---------------------------------------------------------------------------

// Holds a high-accuracy series and a short one for inner loops; dispatches
// derivative evaluation to the best available route.
class Interaction {
public:
    explicit Interaction(SpaceParams p, double tol = 1e-10, std::int64_t fast_length = 30'000)
        : p_(p), fine_(build_series(p, tol)) {
        p_.validate();
        fast_ = truncate(fine_, fast_length, p_);
        coarse_ = truncate(fine_, 8192, p_);
    }

    const SpaceParams& params() const { return p_; }
    const TruncatedCosineSeries& series() const { return fine_; }
    const TruncatedCosineSeries& fast_series() const { return fast_; }

    ValueWithError value(double theta) const { return fine_.eval(theta); }
    ValueWithError value_fast(double theta) const { return fast_.eval(theta); }
    // short series for optimizer inner loops; the parts-summed tail keeps it
    // accurate to ~1e-6 away from 0 mod 2pi
    ValueWithError value_coarse(double theta) const { return coarse_.eval(theta); }
    ValueWithError value_at_zero() const { return fine_.value_at_zero(); }

    ValueWithError derivative(double theta) const { return derivative_impl(theta, fine_); }
    ValueWithError derivative_fast(double theta) const { return derivative_impl(theta, fast_); }

    // second derivative at the critical exponent alpha = 2N - 1, through the
    // decomposition 1/2 + sum_{m<N} cos + sum_{m>=N} a_m cos with
    // a_m = 1 - (m!)^2/((m-N)!(m+N)!), evaluated by two closed-form
    // comparison series plus an absolutely convergent remainder.
    ValueWithError second_derivative(double theta) const {
        if (!p_.is_critical())
            throw DomainError("second_derivative: requires alpha = 2*degree - 1 exactly");
        const double tr = reduce_angle(theta);
        const double delta = gap_to_zero(tr);
        if (delta < 1e-8) throw DomainError("second_derivative: theta must lie in (0, 2pi)");

        const int N = p_.degree;
        const double n2 = static_cast<double>(N) * N;
        const double c2 = 0.5 * n2 * (n2 + 1.0);

        // sum_{m>=N} cos(m theta)/m and /m^2 via closed forms
        double head1 = 0.0, head2 = 0.0, head0 = 0.0;
        for (int m = 1; m < N; ++m) {
            const double cm = std::cos(m * tr);
            head0 += cm;
            head1 += cm / m;
            head2 += cm / (static_cast<double>(m) * m);
        }
        const double log_term = -std::log(2.0 * std::sin(0.5 * tr));
        const double quad_term = kPi * kPi / 6.0 - 0.5 * kPi * tr + 0.25 * tr * tr;
        const double sum1 = log_term - head1;
        const double sum2 = quad_term - head2;

        // remainder rho_m = a_m - N^2/m + N^2(N^2+1)/(2 m^2) = O(m^-3)
        const std::int64_t M2 = 4000;
        double rem = 0.0;
        for (std::int64_t m = M2; m >= N; --m) {
            const double md = static_cast<double>(m);
            const double rho = second_derivative_coefficient(N, md) - n2 / md + c2 / (md * md);
            rem += rho * std::cos(md * tr);
        }
        double rho_scale = 0.0;
        for (std::int64_t m = M2 - 8; m <= M2; ++m) {
            const double md = static_cast<double>(m);
            const double rho = second_derivative_coefficient(N, md) - n2 / md + c2 / (md * md);
            rho_scale = std::max(rho_scale, std::fabs(rho) * md * md * md);
        }
        const double tail_err = rho_scale / (2.0 * static_cast<double>(M2) * M2);

        const double prefactor = factorial(2 * N) / (factorial(N - 1) * factorial(N - 1));
        const double bracket = 0.5 + head0 + n2 * sum1 - c2 * sum2 + rem;
        return {prefactor * bracket, prefactor * (tail_err + 1e-13 * (1.0 + std::fabs(bracket)))};
    }

    // process-wide cache keyed by (degree, alpha)
    static const Interaction& cached(const SpaceParams& p) {
        static std::mutex mu;
        static std::map<std::pair<int, std::uint64_t>, std::unique_ptr<Interaction>> registry;
        p.validate();
        const std::pair<int, std::uint64_t> key{p.degree, std::bit_cast<std::uint64_t>(p.alpha)};
        std::lock_guard<std::mutex> lock(mu);
        auto it = registry.find(key);
        if (it == registry.end())
            it = registry.emplace(key, std::make_unique<Interaction>(p)).first;
        return *it->second;
    }

private:
    ValueWithError derivative_impl(double theta, const TruncatedCosineSeries& s) const {
        const double tr = reduce_angle(theta);
        if (gap_to_zero(tr) < 1e-8)
            throw DomainError("derivative: theta must lie in (0, 2pi); the slope is one-sided at 0");
        if (p_.degree == 2 && p_.alpha == 3.0) {
            const double v = phi_prime_closed_n2a3(tr);
            return {v, 1e-13 * (1.0 + std::fabs(v))};
        }
        return s.eval_derivative(tr);
    }

    static TruncatedCosineSeries truncate(const TruncatedCosineSeries& src, std::int64_t length,
                                          const SpaceParams& p) {
        if (static_cast<std::int64_t>(src.coeffs.size()) <= length) return src;
        TruncatedCosineSeries out;
        out.start = src.start;
        out.decay_exponent = src.decay_exponent;
        out.coeffs.assign(src.coeffs.begin(), src.coeffs.begin() + length);
        detail::CompensatedSum csum, wsum, dropped;
        for (std::int64_t i = 0; i < length; ++i) {
            csum.add(out.coeffs[static_cast<std::size_t>(i)]);
            wsum.add(out.coeffs[static_cast<std::size_t>(i)] *
                     static_cast<double>(out.start + i));
        }
        for (std::size_t i = static_cast<std::size_t>(length); i < src.coeffs.size(); ++i)
            dropped.add(src.coeffs[i]);
        out.coeff_sum = csum.get();
        out.weighted_sum = wsum.get();
        out.next_coeff = src.coeffs[static_cast<std::size_t>(length)];
        out.next_coeff2 = (static_cast<std::size_t>(length) + 1 < src.coeffs.size())
                              ? src.coeffs[static_cast<std::size_t>(length) + 1]
                              : src.next_coeff;
        out.tail_sum = dropped.get() + src.tail_sum;
        out.tail_sum_err = src.tail_sum_err + 4e-16 * dropped.get();
        out.tail_bound = out.tail_sum + out.tail_sum_err;
        return out;
    }

    SpaceParams p_;
    TruncatedCosineSeries fine_;
    TruncatedCosineSeries fast_;
    TruncatedCosineSeries coarse_;
};

// backward-recurrence evaluation with a certified truncation error
inline ValueWithError phi_prime(const SpaceParams& p, double theta) {
    return Interaction::cached(p).derivative(theta);
}

inline ValueWithError phi_second_derivative(const SpaceParams& p, double theta) {
    return Interaction::cached(p).second_derivative(theta);
}

} // namespace sfb
