#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "sfb/cosine_series.hpp"
#include "sfb/errors.hpp"
#include "sfb/special.hpp"
#include "sfb/tail_sum.hpp"
#include "sfb/types.hpp"

namespace sfb {

// ---------------------------------------------------------------------------
// sequence container
// ---------------------------------------------------------------------------

// A finite prefix a_0..a_M, optionally extensible on demand.
struct RealSequencePrefix {
    std::vector<double> values;
    std::function<double(std::int64_t)> generator; // optional

    std::int64_t size() const { return static_cast<std::int64_t>(values.size()); }

    double at(std::int64_t i) const {
        if (i < 0) throw DomainError("RealSequencePrefix: negative index");
        if (i < size()) return values[static_cast<std::size_t>(i)];
        if (generator) return generator(i);
        throw InsufficientData("RealSequencePrefix: index beyond prefix and no generator");
    }

    bool can_reach(std::int64_t i) const { return i < size() || static_cast<bool>(generator); }
};

inline double delta1(const RealSequencePrefix& s, std::int64_t n) { return s.at(n) - s.at(n + 1); }
inline double delta2(const RealSequencePrefix& s, std::int64_t n) {
    return s.at(n) - 2.0 * s.at(n + 1) + s.at(n + 2);
}

// ---------------------------------------------------------------------------
// the coefficient family 1 - (m!)^2 / ((m-N)! (m+N)!)
// ---------------------------------------------------------------------------

// Defined for real m >= N as 1 - prod_{j=1..N} (m-N+j)/(m+j); equals 1 for
// integer m < N. Decays like N^2/m.
inline double second_derivative_coefficient(int N, double m) {
    if (N < 1) throw DomainError("second_derivative_coefficient: requires N >= 1");
    if (m < N) return 1.0;
    double prod = 1.0;
    for (int j = 1; j <= N; ++j) prod *= (m - N + j) / (m + j);
    return 1.0 - prod;
}

inline RealSequencePrefix second_derivative_coefficients(int N, std::int64_t M) {
    if (N < 1) throw DomainError("second_derivative_coefficients: requires N >= 1");
    if (M < N) throw DomainError("second_derivative_coefficients: requires M >= N");
    RealSequencePrefix out;
    out.values.resize(static_cast<std::size_t>(M) + 1);
    for (std::int64_t m = 0; m <= M; ++m)
        out.values[static_cast<std::size_t>(m)] = second_derivative_coefficient(N, static_cast<double>(m));
    out.generator = [N](std::int64_t m) { return second_derivative_coefficient(N, static_cast<double>(m)); };
    return out;
}

// (m+1) a_m - m a_{m+1} for the family above
inline double threshold_quantity(int N, std::int64_t m) {
    const double am = second_derivative_coefficient(N, static_cast<double>(m));
    const double am1 = second_derivative_coefficient(N, static_cast<double>(m + 1));
    return (m + 1) * am - m * am1;
}

// Smallest m >= N with (m+1) a_m - m a_{m+1} <= a_0 = 1. Must land exactly on
// N^2 - 1 with equality there; anything else is an implementation bug.
inline std::int64_t threshold_check(int N) {
    if (N < 2) throw DomainError("threshold_check: requires N >= 2");
    const std::int64_t expected = static_cast<std::int64_t>(N) * N - 1;
    std::int64_t found = -1;
    for (std::int64_t m = N; m <= 4 * expected + 16; ++m) {
        if (threshold_quantity(N, m) <= 1.0 + 1e-12) {
            found = m;
            break;
        }
    }
    if (found != expected)
        throw InvariantFailure("threshold_check: first index with quantity <= 1 is not N^2 - 1");
    if (std::fabs(threshold_quantity(N, expected) - 1.0) > 1e-12)
        throw InvariantFailure("threshold_check: equality residual at N^2 - 1 exceeds 1e-12");
    return found;
}

// ---------------------------------------------------------------------------
// convexification of an asymptotically convex sequence
// ---------------------------------------------------------------------------

struct ConvexifyResult {
    std::int64_t N0 = 0;
    std::vector<double> modified;          // \tilde a_0 .. \tilde a_{N0-1}
    std::int64_t original_tail_start = 0;  // == N0
    std::int64_t certified_through = 0;    // last index checked for convexity
};

inline double convexified_at(const ConvexifyResult& r, const RealSequencePrefix& src,
                             std::int64_t i) {
    if (i < r.N0) return r.modified[static_cast<std::size_t>(i)];
    return src.at(i);
}

// Replaces a_1..a_{N0-1} by the linear backward extension from a_{N0} with
// slope a_{N0} - a_{N0+1} (the epsilon = 0 choice), keeping a_0. N0 is the
// smallest index from which the input is convex and whose linear extension
// stays below a_0.
inline ConvexifyResult convexify(const RealSequencePrefix& seq) {
    std::int64_t L = seq.size() - 1;
    if (seq.generator && L < 1024) L = 1024;
    if (L < 4) throw InsufficientData("convexify: prefix too short");

    std::vector<double> a(static_cast<std::size_t>(L) + 1);
    for (std::int64_t i = 0; i <= L; ++i) a[static_cast<std::size_t>(i)] = seq.at(i);

    const double scale = std::max(std::fabs(a[0]), 1.0);
    for (std::int64_t i = 0; i <= L; ++i) {
        if (!(a[static_cast<std::size_t>(i)] > 0.0))
            throw DomainError("convexify: sequence must be positive");
        if (i + 1 <= L &&
            a[static_cast<std::size_t>(i + 1)] > a[static_cast<std::size_t>(i)] + 1e-15 * scale)
            throw DomainError("convexify: sequence must be decreasing");
    }

    // first index from which every second difference in range is nonnegative
    std::int64_t suffix_start = -1;
    {
        std::int64_t i = L - 2;
        for (; i >= 0; --i) {
            const double d2 = a[static_cast<std::size_t>(i)] -
                              2.0 * a[static_cast<std::size_t>(i + 1)] +
                              a[static_cast<std::size_t>(i + 2)];
            if (d2 < -1e-15 * scale) break;
        }
        suffix_start = i + 1;
    }
    if (suffix_start > L - 10)
        throw InsufficientData("convexify: prefix does not certify asymptotic convexity");

    std::int64_t N0 = -1;
    for (std::int64_t n = std::max<std::int64_t>(1, suffix_start); n <= L - 10; ++n) {
        const double qn = (n + 1) * a[static_cast<std::size_t>(n)] -
                          n * a[static_cast<std::size_t>(n + 1)];
        if (qn <= a[0] + 1e-12 * scale) {
            N0 = n;
            break;
        }
    }
    if (N0 < 0)
        throw InsufficientData("convexify: no admissible modification index within the prefix");

    ConvexifyResult out;
    out.N0 = N0;
    out.original_tail_start = N0;
    out.certified_through = L;
    out.modified.resize(static_cast<std::size_t>(N0));
    out.modified[0] = a[0];
    const double slope = a[static_cast<std::size_t>(N0)] - a[static_cast<std::size_t>(N0 + 1)];
    for (std::int64_t k = 1; k < N0; ++k)
        out.modified[static_cast<std::size_t>(k)] =
            a[static_cast<std::size_t>(N0)] + static_cast<double>(N0 - k) * slope;

    // the Prop-style postconditions, on the certified range
    auto m_at = [&](std::int64_t i) {
        return i < N0 ? out.modified[static_cast<std::size_t>(i)] : a[static_cast<std::size_t>(i)];
    };
    for (std::int64_t i = 0; i <= L; ++i) {
        if (!(m_at(i) >= 0.0)) throw InvariantFailure("convexify: negative modified term");
        if (i + 2 <= L) {
            const double d2 = m_at(i) - 2.0 * m_at(i + 1) + m_at(i + 2);
            if (d2 < -1e-15 * scale)
                throw InvariantFailure("convexify: modified sequence is not convex");
        }
        if (i + 1 <= L && m_at(i + 1) > m_at(i) + 1e-15 * scale)
            throw InvariantFailure("convexify: modified sequence is not decreasing");
    }
    return out;
}

inline RealSequencePrefix to_prefix(const ConvexifyResult& r, const RealSequencePrefix& src,
                                    std::int64_t length) {
    RealSequencePrefix out;
    out.values.resize(static_cast<std::size_t>(length));
    for (std::int64_t i = 0; i < length; ++i)
        out.values[static_cast<std::size_t>(i)] = convexified_at(r, src, i);
    if (src.generator && r.N0 <= length) out.generator = src.generator;
    return out;
}

// ---------------------------------------------------------------------------
// Fejer-kernel identity and nonnegativity check
// ---------------------------------------------------------------------------

struct FejerIdentity {
    double lhs = 0.0;
    double rhs = 0.0;
    double bound = 0.0; // combined truncation bound for |lhs - rhs|
};

// lhs = a_0/2 + sum a_n cos(n theta), rhs = (1/2) sum (n+1) D2 a_n F_{n+1},
// both truncated after `terms` coefficients.
inline FejerIdentity fejer_identity_check(const RealSequencePrefix& seq, double theta,
                                          std::int64_t terms) {
    const double tr = reduce_angle(theta);
    const double delta = gap_to_zero(tr);
    if (delta <= 0.0) throw DomainError("fejer_identity_check: theta must not be 0 mod 2pi");
    if (terms < 4) throw DomainError("fejer_identity_check: needs at least 4 terms");
    if (!seq.can_reach(terms + 1))
        throw InsufficientData("fejer_identity_check: prefix shorter than requested terms");

    double cs = 0.0, ss = 0.0;
    detail::clenshaw_trig(
        terms, [&](std::int64_t k) { return k == 0 ? 0.5 * seq.at(0) : seq.at(k); }, tr, &cs, &ss);

    const double sh = std::sin(0.5 * tr);
    double rhs = 0.0;
    for (std::int64_t n = terms - 2; n >= 0; --n) {
        const double d2 = delta2(seq, n);
        const double sk = std::sin(0.5 * (n + 1) * tr);
        rhs += 0.5 * d2 * sk * sk / (sh * sh); // (n+1) D2 a_n F_{n+1} / 2
    }

    const double shd = std::sin(0.5 * delta);
    FejerIdentity out;
    out.lhs = cs;
    out.rhs = rhs;
    out.bound = seq.at(terms + 1) / shd +
                std::max(delta1(seq, terms - 1), 0.0) / (2.0 * shd * shd) + 1e-13;
    return out;
}

// Minimum over equispaced theta in (0, 2pi) of the truncated series minus its
// truncation bound. Diagnostic: >= -1e-8 is expected for positive decreasing
// convex null sequences, arbitrary otherwise.
inline double bari_positivity_check(const RealSequencePrefix& seq, int samples) {
    if (samples < 1) throw DomainError("bari_positivity_check: requires samples >= 1");
    const std::int64_t T = seq.size() - 1;
    if (T < 2) throw InsufficientData("bari_positivity_check: prefix too short");
    const double a_next = seq.can_reach(T + 1) ? seq.at(T + 1) : seq.at(T);

    double min_val = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= samples; ++i) {
        const double theta = kTwoPi * i / (samples + 1.0);
        double cs = 0.0, ss = 0.0;
        detail::clenshaw_trig(
            T, [&](std::int64_t k) { return k == 0 ? 0.5 * seq.at(0) : seq.at(k); }, theta, &cs,
            &ss);
        const double bound = a_next / std::sin(0.5 * gap_to_zero(theta));
        min_val = std::min(min_val, cs - bound);
    }
    return min_val;
}

// ---------------------------------------------------------------------------
// split of the critical-exponent interaction into a convex part plus a
// finite cosine correction
// ---------------------------------------------------------------------------

struct CriticalPhiDecomposition {
    int degree = 2;
    double prefactor = 0.0;                 // (2N)! / ((N-1)!)^2
    TruncatedCosineSeries smooth;           // coefficients (1 - \tilde a_m)/m^2, m >= 1
    std::vector<double> correction_coeffs;  // (a_m - \tilde a_m)/m^2, m = 1..N^2-2

    ValueWithError reconstruct(double theta) const {
        const ValueWithError v = smooth.eval(theta);
        const double tr = reduce_angle(theta);
        double corr = 0.0;
        for (std::size_t m = correction_coeffs.size(); m >= 1; --m)
            corr += correction_coeffs[m - 1] * std::cos(static_cast<double>(m) * tr);
        return {prefactor * (v.value - corr), prefactor * v.err};
    }
};

inline CriticalPhiDecomposition critical_phi_decomposition(int N, double tol) {
    if (N < 2) throw DomainError("critical_phi_decomposition: requires N >= 2");
    if (!(tol > 0.0)) throw DomainError("critical_phi_decomposition: requires tol > 0");

    const std::int64_t n0_expected = static_cast<std::int64_t>(N) * N - 1;
    RealSequencePrefix a = second_derivative_coefficients(N, std::max<std::int64_t>(4 * n0_expected + 64, 1024));
    const ConvexifyResult conv = convexify(a);
    if (conv.N0 != n0_expected)
        throw InvariantFailure("critical_phi_decomposition: modification index is not N^2 - 1");

    CriticalPhiDecomposition out;
    out.degree = N;
    out.prefactor = factorial(2 * N) / (factorial(N - 1) * factorial(N - 1));

    out.correction_coeffs.resize(static_cast<std::size_t>(n0_expected) - 1);
    for (std::int64_t m = 1; m <= n0_expected - 1; ++m) {
        const double am = a.at(m);
        const double at = convexified_at(conv, a, m);
        out.correction_coeffs[static_cast<std::size_t>(m - 1)] =
            (am - at) / (static_cast<double>(m) * m);
    }

    // smooth part: length chosen so the parts-summed tail keeps the
    // reconstruction error below tol at angles >= 0.05 away from 0
    const double tol_inner = 0.5 * tol / out.prefactor;
    const double sin_ref_sq = 4.0 * std::pow(std::sin(0.025), 2);
    std::int64_t M = static_cast<std::int64_t>(std::cbrt(8.0 / (sin_ref_sq * tol_inner))) + 1;
    M = std::max<std::int64_t>(M, std::max<std::int64_t>(64, 4 * n0_expected));

    auto smooth_coef = [&](double x) {
        // (1 - a(x)) / x^2 for x >= N0 (where the tail lives)
        double prod = 1.0;
        for (int j = 1; j <= N; ++j) prod *= (x - N + j) / (x + j);
        return prod / (x * x);
    };

    TruncatedCosineSeries& s = out.smooth;
    s.start = 1;
    s.coeffs.resize(static_cast<std::size_t>(M));
    detail::CompensatedSum csum;
    detail::CompensatedSum wsum;
    for (std::int64_t m = 1; m <= M; ++m) {
        const double at = convexified_at(conv, a, m);
        const double c = (1.0 - at) / (static_cast<double>(m) * m);
        s.coeffs[static_cast<std::size_t>(m - 1)] = c;
        csum.add(c);
        wsum.add(std::fabs(c) * static_cast<double>(m));
    }
    s.coeff_sum = csum.get();
    s.weighted_sum = wsum.get();
    s.next_coeff = smooth_coef(static_cast<double>(M + 1));
    s.next_coeff2 = smooth_coef(static_cast<double>(M + 2));
    s.decay_exponent = 2.0;
    const TailSum tail = euler_maclaurin_tail(smooth_coef, static_cast<double>(M + 1));
    s.tail_sum = tail.value;
    s.tail_sum_err = tail.err;
    s.tail_bound = tail.value + tail.err;
    return out;
}

} // namespace sfb
