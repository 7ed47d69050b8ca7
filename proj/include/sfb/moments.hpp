#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "sfb/errors.hpp"
#include "sfb/norms.hpp"
#include "sfb/rng.hpp"
#include "sfb/types.hpp"

namespace sfb {

struct PowerSums {
    std::vector<std::complex<double>> values; // p_1 .. p_M

    std::complex<double> at(std::int64_t s) const {
        if (s < 1 || s > static_cast<std::int64_t>(values.size()))
            throw DomainError("PowerSums: index out of range");
        return values[static_cast<std::size_t>(s - 1)];
    }
};

// p_s = sum_k e^{i s theta_k}, s = 1..M, by direct trigonometric sums
inline PowerSums power_sums(const CircleConfig& c, std::int64_t M) {
    if (M < 1) throw DomainError("power_sums: requires M >= 1");
    PowerSums out;
    out.values.assign(static_cast<std::size_t>(M), {0.0, 0.0});
    for (double a : c.angles()) {
        for (std::int64_t s = 1; s <= M; ++s) {
            const double ph = std::fmod(static_cast<double>(s) * a, kTwoPi);
            out.values[static_cast<std::size_t>(s - 1)] +=
                std::complex<double>(std::cos(ph), std::sin(ph));
        }
    }
    return out;
}

// membership in the moment-constrained class: distinct angles and vanishing
// power sums p_1 .. p_{N^2-2}
inline bool in_Wn(const CircleConfig& c, int N, double tol = 1e-9) {
    if (N < 2) throw DomainError("in_Wn: requires N >= 2");
    if (c.min_gap() < 1e-12) return false;
    const std::int64_t top = static_cast<std::int64_t>(N) * N - 2;
    if (top < 1) return true;
    const PowerSums p = power_sums(c, top);
    for (std::int64_t m = 1; m <= top; ++m)
        if (std::abs(p.at(m)) > tol) return false;
    return true;
}

// Union of n/q independently rotated regular q-gons, q the smallest divisor
// of n with q >= N^2 - 1. Every moment p_1..p_{N^2-2} of a regular q-gon of
// that size vanishes, so the union lies in W_n.
inline CircleConfig sample_Wn_structured(int n, int N, std::uint64_t seed) {
    if (N < 2) throw DomainError("sample_Wn_structured: requires N >= 2");
    if (n < 1) throw DomainError("sample_Wn_structured: requires n >= 1");
    const int qmin = N * N - 1;
    int q = 0;
    for (int d = 1; d <= n; ++d) {
        if (n % d == 0 && d >= qmin) {
            q = d;
            break;
        }
    }
    if (q == 0)
        throw DomainError("sample_Wn_structured: n has no divisor >= N^2 - 1");

    SplitMix64 rng(seed);
    const int groups = n / q;
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<double> angles;
        angles.reserve(static_cast<std::size_t>(n));
        for (int g = 0; g < groups; ++g) {
            const double rot = rng.uniform(0.0, kTwoPi);
            for (int j = 0; j < q; ++j) angles.push_back(rot + kTwoPi * j / q);
        }
        CircleConfig c = CircleConfig::from_angles(std::move(angles));
        if (c.min_gap() >= 1e-9) {
            if (!in_Wn(c, N))
                throw InvariantFailure("sample_Wn_structured: sample fails the moment check");
            return c;
        }
    }
    throw NonConvergence("sample_Wn_structured: 100 resamples all collided", 1e-9);
}

struct MomentConstrainedCheck {
    double energy = 0.0;
    double energy_err = 0.0;
    double equi_energy = 0.0;
    double equi_err = 0.0;
    bool holds = false;
    double pair_identity_residual = 0.0; // max over constrained m of the cosine-sum identity defect
};

namespace detail {

// pairwise energy with the short series, switching to the long one for
// nearly coincident pairs where the parts-summed tail needs more terms
inline ValueWithError sampling_energy(const Interaction& I, const CircleConfig& c) {
    const std::vector<double>& ang = c.angles();
    const int n = c.size();
    CompensatedSum e;
    double err = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            const double d = ang[k] - ang[j];
            const double gap = gap_to_zero(reduce_angle(d));
            const ValueWithError v = (gap < 2e-3) ? I.value(d) : I.value_fast(d);
            e.add(2.0 * v.value);
            err += 2.0 * v.err;
        }
    }
    return {e.get(), err};
}

} // namespace detail

// Checks that a moment-constrained configuration has energy at least that of
// the equidistributed one (critical exponent only), plus the cosine-pair-sum
// identity sum_{j!=k} cos(m(theta_j - theta_k)) = |p_m|^2 - n.
inline MomentConstrainedCheck moment_constrained_verify(const SpaceParams& p, const CircleConfig& c) {
    p.validate();
    if (!p.is_critical())
        throw DomainError("moment_constrained_verify: requires alpha = 2*degree - 1 exactly");
    if (!in_Wn(c, p.degree)) throw DomainError("moment_constrained_verify: configuration is not in W_n");

    const int n = c.size();
    const Interaction& I = Interaction::cached(p);

    MomentConstrainedCheck out;
    const ValueWithError e = detail::sampling_energy(I, c);
    out.energy = e.value;
    out.energy_err = e.err;

    // equidistributed energy via the n-1 distinct gaps, each hit n times
    detail::CompensatedSum eq;
    double eq_err = 0.0;
    for (int d = 1; d < n; ++d) {
        const ValueWithError v = I.value_fast(kTwoPi * d / n);
        eq.add(n * v.value);
        eq_err += n * v.err;
    }
    out.equi_energy = eq.get();
    out.equi_err = eq_err;
    out.holds = out.energy >= out.equi_energy - 1e-9;

    const std::int64_t top = static_cast<std::int64_t>(p.degree) * p.degree - 2;
    if (top >= 1) {
        const PowerSums ps = power_sums(c, top);
        const std::vector<double>& ang = c.angles();
        for (std::int64_t m = 1; m <= top; ++m) {
            double lhs = 0.0;
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    if (j != k) lhs += std::cos(m * (ang[j] - ang[k]));
            const double rhs = std::norm(ps.at(m)) - n;
            out.pair_identity_residual = std::max(out.pair_identity_residual, std::fabs(lhs - rhs));
        }
    }
    return out;
}

struct PowerSumBound {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

// sum_{s=1}^{2nN} |p_s|^2 >= n (2nN - n + 1) / 2
inline PowerSumBound powersum_lower_bound_check(const CircleConfig& c, int N) {
    if (N < 1) throw DomainError("powersum_lower_bound_check: requires N >= 1");
    const int n = c.size();
    const std::int64_t M = 2 * static_cast<std::int64_t>(n) * N;
    const PowerSums p = power_sums(c, M);
    double lhs = 0.0;
    for (std::int64_t s = 1; s <= M; ++s) lhs += std::norm(p.at(s));
    PowerSumBound out;
    out.lhs = lhs;
    out.rhs = 0.5 * n * (static_cast<double>(M) - n + 1.0);
    out.holds = lhs >= out.rhs - 1e-9;
    return out;
}

} // namespace sfb
