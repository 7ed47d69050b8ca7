#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "sfb/errors.hpp"
#include "sfb/interaction.hpp"
#include "sfb/special.hpp"
#include "sfb/tail_sum.hpp"
#include "sfb/types.hpp"

namespace sfb {

// ||z^s||^2 = Gamma(alpha+2) Gamma(s+1) / Gamma(s+alpha+2)
inline double monomial_norm_sq(const SpaceParams& p, std::int64_t s) {
    p.validate();
    if (s < 0) throw DomainError("monomial_norm_sq: requires s >= 0");
    return std::exp(log_gamma(p.alpha + 2.0) +
                    log_gamma_diff(static_cast<double>(s) + 1.0, p.alpha + 1.0));
}

// Squared norm of the equidistributed n-pole fraction. The power series of
// that function is supported on multiples of n, so the norm is
// n^2 sum_{k: kn >= N} b_{kn} with the interaction coefficients b; summed
// adaptively with an Euler-Maclaurin tail.
inline ValueWithError psi_norm_sq(const SpaceParams& p, std::int64_t n, double tol = 1e-9) {
    p.validate();
    if (n < 1) throw DomainError("psi_norm_sq: requires n >= 1");
    if (!(tol > 0.0)) throw DomainError("psi_norm_sq: requires tol > 0");

    const double nd = static_cast<double>(n);
    auto term = [&p, nd](double k) {
        return nd * nd * std::exp(detail::log_interaction_coefficient(p, k * nd));
    };

    const std::int64_t k0 = (p.degree + n - 1) / n;
    const std::int64_t k_min = k0 + 64;
    const std::int64_t handoff = k0 + 8192; // the tail machinery is exact past here
    const std::int64_t cap = 1'000'000;
    detail::CompensatedSum sum;
    std::int64_t k = k0;
    while (true) {
        const double t = term(static_cast<double>(k));
        sum.add(t);
        if (k >= k_min && (t <= tol * std::max(sum.get(), 1e-300) || k >= handoff)) break;
        if (k + 1 > cap)
            throw NonConvergence("psi_norm_sq: term cap reached before the requested tolerance", t);
        ++k;
    }
    const TailSum tail = euler_maclaurin_tail(term, static_cast<double>(k + 1));
    double tail_err = tail.err;
    const double beta = p.coefficient_decay();
    if (beta < 1.05) {
        // tail mass beyond the reach of sampled schemes; analytic bound instead
        tail_err = std::max(tail_err, 1.5 * term(static_cast<double>(k + 1)) *
                                          static_cast<double>(k + 1) / (beta - 1.0));
    }
    const double value = sum.get() + tail.value;
    return {value, tail_err + 4e-16 * std::fabs(value) * std::log2(static_cast<double>(k))};
}

// Squared norm of an arbitrary configuration from its power sums:
// sum_m b_m |p_m|^2 with p_m = sum_k e^{i m theta_k}. The partial sum runs to
// `cap`; the diagonal part of the tail (n per index) is restored by
// Euler-Maclaurin and each cross pair gets a summation-by-parts estimate.
inline ValueWithError config_norm_sq_powersum(const SpaceParams& p, const CircleConfig& c,
                                              std::int64_t cap = 0) {
    p.validate();
    const int n = c.size();
    const int N = p.degree;
    if (cap <= 0) cap = std::max<std::int64_t>(4 * static_cast<std::int64_t>(n) * N, 2000);
    cap = std::max<std::int64_t>(cap, detail::coefficient_monotone_start(p) + 2);
    cap = std::max<std::int64_t>(cap, N + 8);

    const std::vector<double>& ang = c.angles();
    std::vector<double> cs(n), sn(n), rc(n), rs(n);
    for (int i = 0; i < n; ++i) {
        rc[i] = std::cos(ang[i]);
        rs[i] = std::sin(ang[i]);
        const double ph = std::fmod(static_cast<double>(N) * ang[i], kTwoPi);
        cs[i] = std::cos(ph);
        sn[i] = std::sin(ph);
    }

    detail::CompensatedSum sum;
    double b = 1.0; // b_N
    for (std::int64_t m = N; m <= cap; ++m) {
        if ((m - N) % 1024 == 1023) { // periodic re-anchor of the rotations
            for (int i = 0; i < n; ++i) {
                const double ph = std::fmod(static_cast<double>(m) * ang[i], kTwoPi);
                cs[i] = std::cos(ph);
                sn[i] = std::sin(ph);
            }
        }
        double re = 0.0, im = 0.0;
        for (int i = 0; i < n; ++i) {
            re += cs[i];
            im += sn[i];
            const double nc = cs[i] * rc[i] - sn[i] * rs[i];
            sn[i] = sn[i] * rc[i] + cs[i] * rs[i];
            cs[i] = nc;
        }
        sum.add(b * (re * re + im * im));
        b *= detail::interaction_coefficient_ratio(p, static_cast<double>(m));
    }
    const double b_next = b; // b_{cap+1}
    const double b_next2 =
        b_next * detail::interaction_coefficient_ratio(p, static_cast<double>(cap + 1));
    const double db = std::max(b_next - b_next2, 0.0);

    const TailSum tail = euler_maclaurin_tail(
        [&p](double x) { return std::exp(detail::log_interaction_coefficient(p, x)); },
        static_cast<double>(cap + 1));

    // cross-pair tail estimates
    double cross = 0.0, cross_err = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            const double d = reduce_angle(ang[k] - ang[j]);
            const double sh = std::sin(0.5 * d);
            const double one_mz_sq = 4.0 * sh * sh;
            if (one_mz_sq < 1e-24) { // nearly coincident: fall back to |p| <= n bound
                cross_err += 2.0 * (tail.value + tail.err);
                continue;
            }
            const double ph = std::fmod(static_cast<double>(cap + 1) * d, kTwoPi);
            const std::complex<double> zM1(std::cos(ph), std::sin(ph));
            const std::complex<double> one_mz(2.0 * sh * sh, -2.0 * sh * std::cos(0.5 * d));
            cross += 2.0 * (b_next * zM1 / one_mz).real();
            cross_err += 2.0 * (2.0 * db / one_mz_sq);
        }
    }

    const double value = sum.get() + n * tail.value + cross;
    const double noise =
        1e-12 * static_cast<double>(n) * n + 4e-16 * std::fabs(sum.get()) * 32.0;
    return {value, n * tail.err + cross_err + noise};
}

// Pairwise interaction energy sum_{j != k} phi(theta_j - theta_k).
inline ValueWithError config_energy_interaction(const SpaceParams& p, const CircleConfig& c,
                                                double tol = 1e-9) {
    p.validate();
    if (!(tol > 0.0)) throw DomainError("config_energy_interaction: requires tol > 0");
    const int n = c.size();
    if (n == 1) return {0.0, 0.0};
    if (c.min_gap() < 1e-12)
        throw DomainError("config_energy_interaction: coincident poles; energy formula "
                          "requires distinct angles");

    const Interaction& I = Interaction::cached(p);
    const bool fast = tol >= 1e-5;
    const std::vector<double>& ang = c.angles();
    detail::CompensatedSum e;
    double err = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            const ValueWithError v =
                fast ? I.value_fast(ang[k] - ang[j]) : I.value(ang[k] - ang[j]);
            e.add(2.0 * v.value);
            err += 2.0 * v.err;
        }
    }
    return {e.get(), err};
}

// Gamma(alpha+2) zeta(alpha+1-2(N-1)) / ((N-1)!)^2, the limit of the scaled
// equidistributed norms.
inline double asymptotic_limit_constant(const SpaceParams& p) {
    p.validate(); // alpha > 2(N-1) <=> zeta argument > 1
    const double zeta_arg = p.alpha + 1.0 - 2.0 * (p.degree - 1);
    return std::exp(log_gamma(p.alpha + 2.0) - 2.0 * log_gamma(static_cast<double>(p.degree))) *
           zeta_real(zeta_arg);
}

struct ScaledNorm {
    std::int64_t n = 0;
    double scaled = 0.0;
    double err = 0.0;
};

// n^{alpha+1-2N} ||Psi_n||^2 for each requested n
inline std::vector<ScaledNorm> scaled_norm_sequence(const SpaceParams& p,
                                                    const std::vector<std::int64_t>& ns,
                                                    double tol = 1e-9) {
    p.validate();
    std::vector<ScaledNorm> out;
    out.reserve(ns.size());
    for (std::int64_t n : ns) {
        if (n < 1) throw DomainError("scaled_norm_sequence: requires n >= 1");
        const ValueWithError v = psi_norm_sq(p, n, tol);
        const double scale =
            std::pow(static_cast<double>(n), p.alpha + 1.0 - 2.0 * p.degree);
        out.push_back({n, scale * v.value, scale * v.err});
    }
    return out;
}

} // namespace sfb
