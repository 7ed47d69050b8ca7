#include <cmath>

#include "doctest.h"
#include "sfb/interaction.hpp"
#include "sfb/rng.hpp"
#include "sfb/sequences.hpp"

using namespace sfb;

namespace {

// random positive decreasing convex null sequence: a mixture of geometric and
// power-law terms (both convex, sums of convex stay convex)
RealSequencePrefix random_convex(SplitMix64* rng, std::int64_t len) {
    const double c1 = rng->uniform(0.1, 2.0);
    const double q = rng->uniform(0.3, 0.9);
    const double c2 = rng->uniform(0.1, 2.0);
    const double p = rng->uniform(1.2, 3.0);
    RealSequencePrefix out;
    out.values.resize(static_cast<std::size_t>(len));
    for (std::int64_t i = 0; i < len; ++i)
        out.values[static_cast<std::size_t>(i)] =
            c1 * std::pow(q, static_cast<double>(i)) + c2 * std::pow(i + 1.0, -p);
    out.generator = [c1, q, c2, p](std::int64_t i) {
        return c1 * std::pow(q, static_cast<double>(i)) + c2 * std::pow(i + 1.0, -p);
    };
    return out;
}

} // namespace

TEST_CASE("coefficient family values") {
    CHECK(second_derivative_coefficient(2, 2) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
    CHECK(second_derivative_coefficient(2, 3) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(second_derivative_coefficient(2, 1) == 1.0);
    CHECK(second_derivative_coefficient(2, 0) == 1.0);
    // closed rational form for degree 2: (4m+2)/((m+1)(m+2))
    for (int m = 2; m <= 200; ++m) {
        const double closed = (4.0 * m + 2.0) / ((m + 1.0) * (m + 2.0));
        CHECK(second_derivative_coefficient(2, m) == doctest::Approx(closed).epsilon(1e-14));
    }
    // range (0, 1] with limit 0
    for (int m = 2; m <= 4000; m += 7) {
        const double a = second_derivative_coefficient(3, m);
        CHECK(a > 0.0);
        CHECK(a <= 1.0);
    }
}

TEST_CASE("threshold index is N^2 - 1") {
    CHECK(threshold_check(2) == 3);
    CHECK(threshold_check(3) == 8);
    CHECK(threshold_check(4) == 15);
    CHECK(threshold_check(5) == 24);
    CHECK(threshold_check(6) == 35);
    CHECK_THROWS_AS(threshold_check(1), DomainError);
    for (int m = 2; m <= 100; ++m) {
        const double closed = (8.0 * m + 6.0) / ((m + 2.0) * (m + 3.0));
        CHECK(std::fabs(threshold_quantity(2, m) - closed) <= 1e-12);
    }
}

TEST_CASE("convexify on the motivating sequence") {
    RealSequencePrefix seq = second_derivative_coefficients(2, 256);
    const ConvexifyResult r = convexify(seq);
    CHECK(r.N0 == 3);
    CHECK(r.original_tail_start == 3);
    REQUIRE(r.modified.size() == 3);
    CHECK(r.modified[0] == 1.0);
    CHECK(r.modified[1] == doctest::Approx(0.9).epsilon(1e-14));
    CHECK(r.modified[2] == doctest::Approx(0.8).epsilon(1e-14));

    // all five clauses over the certified range
    const double scale = 1.0;
    for (std::int64_t i = 0; i <= r.certified_through; ++i) {
        CHECK(convexified_at(r, seq, i) >= 0.0);
        if (i + 1 <= r.certified_through)
            CHECK(convexified_at(r, seq, i + 1) < convexified_at(r, seq, i) + 1e-15 * scale);
        if (i + 2 <= r.certified_through) {
            const double d2 = convexified_at(r, seq, i) - 2 * convexified_at(r, seq, i + 1) +
                              convexified_at(r, seq, i + 2);
            CHECK(d2 >= -1e-15);
        }
        if (i >= r.N0) CHECK(convexified_at(r, seq, i) == seq.at(i));
    }
    CHECK(convexified_at(r, seq, 0) == seq.at(0));
}

TEST_CASE("convexify leaves already convex sequences alone") {
    RealSequencePrefix harmonic;
    harmonic.values.resize(64);
    for (int i = 0; i < 64; ++i) harmonic.values[static_cast<std::size_t>(i)] = 1.0 / (i + 1.0);
    const ConvexifyResult r = convexify(harmonic);
    CHECK(r.N0 == 1);
    CHECK(r.modified.size() == 1);
    CHECK(r.modified[0] == 1.0);

    RealSequencePrefix geo;
    geo.values.resize(64);
    for (int i = 0; i < 64; ++i) geo.values[static_cast<std::size_t>(i)] = std::exp2(-i);
    CHECK(convexify(geo).N0 == 1);
}

TEST_CASE("convexify input validation") {
    RealSequencePrefix inc;
    inc.values = {1.0, 2.0, 1.0, 0.5, 0.25, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001};
    CHECK_THROWS_AS(convexify(inc), DomainError);

    RealSequencePrefix neg;
    neg.values = {1.0, -0.5, 0.25, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001, 5e-4, 2e-4};
    CHECK_THROWS_AS(convexify(neg), DomainError);

    RealSequencePrefix tiny;
    tiny.values = {1.0, 0.5, 0.25};
    CHECK_THROWS_AS(convexify(tiny), InsufficientData);
}

TEST_CASE("second differences are linear") {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        RealSequencePrefix a, b, sum;
        a.values.resize(32);
        b.values.resize(32);
        sum.values.resize(32);
        for (int i = 0; i < 32; ++i) {
            a.values[static_cast<std::size_t>(i)] = static_cast<double>(rng.next() % 1000);
            b.values[static_cast<std::size_t>(i)] = static_cast<double>(rng.next() % 1000);
            sum.values[static_cast<std::size_t>(i)] =
                a.values[static_cast<std::size_t>(i)] + b.values[static_cast<std::size_t>(i)];
        }
        for (int i = 0; i < 30; ++i)
            CHECK(delta2(sum, i) == delta2(a, i) + delta2(b, i)); // exact on small integers
    }
}

TEST_CASE("Fejer identity: geometric closed forms") {
    RealSequencePrefix geo;
    geo.values.resize(128);
    for (int i = 0; i < 128; ++i) geo.values[static_cast<std::size_t>(i)] = std::exp2(-i);
    geo.generator = [](std::int64_t i) { return std::exp2(static_cast<double>(-i)); };

    // Poisson kernel value (1/2)(1-r^2)/(1-2r cos + r^2) at r = 1/2
    const FejerIdentity at_pi = fejer_identity_check(geo, kPi, 64);
    CHECK(at_pi.lhs == doctest::Approx(1.0 / 6.0).epsilon(1e-8));
    CHECK(at_pi.rhs == doctest::Approx(1.0 / 6.0).epsilon(1e-8));
    const FejerIdentity at_pi2 = fejer_identity_check(geo, kPi / 2, 64);
    CHECK(at_pi2.lhs == doctest::Approx(0.3).epsilon(1e-8));
    CHECK(at_pi2.rhs == doctest::Approx(0.3).epsilon(1e-8));
    CHECK_THROWS_AS(fejer_identity_check(geo, 0.0, 64), DomainError);
}

TEST_CASE("Fejer identity on random convex sequences") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const RealSequencePrefix seq = random_convex(&rng, 4096);
        for (int j = 0; j < 20; ++j) {
            const double theta = rng.uniform(0.05, kTwoPi - 0.05);
            const FejerIdentity fi = fejer_identity_check(seq, theta, 600);
            CHECK(std::fabs(fi.lhs - fi.rhs) <= fi.bound);
            CHECK(fi.rhs >= -1e-12); // kernel form is nonnegative term by term
        }
    }
}

TEST_CASE("positivity check on the convexified sequence") {
    RealSequencePrefix seq = second_derivative_coefficients(2, 200'000);
    const ConvexifyResult conv = convexify(seq);
    const RealSequencePrefix merged = to_prefix(conv, seq, 200'000);
    CHECK(bari_positivity_check(merged, 10'000) >= -1e-8);
}

TEST_CASE("positivity check on a geometric sequence") {
    // Poisson kernel: the full series is (1/2)(1-r^2)/(1-2r cos + r^2) >= 1/6
    RealSequencePrefix geo;
    geo.values.resize(256);
    for (int i = 0; i < 256; ++i) geo.values[static_cast<std::size_t>(i)] = std::exp2(-i);
    geo.generator = [](std::int64_t i) { return std::exp2(static_cast<double>(-i)); };
    CHECK(bari_positivity_check(geo, 2048) >= 0.0);
}

TEST_CASE("positivity check flags a non-convex input") {
    RealSequencePrefix bad;
    bad.values = {1.0, 0.9, 0.9, 0.0, 0.0, 0.0, 0.0, 0.0};
    CHECK(bari_positivity_check(bad, 512) < 0.0); // diagnostic only, must not throw
}

TEST_CASE("critical-exponent decomposition") {
    const CriticalPhiDecomposition dec = critical_phi_decomposition(2, 1e-6);
    REQUIRE(dec.correction_coeffs.size() == 2); // N^2 - 2 entries
    CHECK(dec.correction_coeffs[0] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(dec.correction_coeffs[1] == doctest::Approx(1.0 / 120.0).epsilon(1e-12));
    CHECK(dec.prefactor == 24.0);

    const double phi_pi = 96 * std::log(2.0) - 66;
    const double phi_pi2 = -30 + 12 * kPi - 12 * std::log(2.0);
    CHECK(std::fabs(dec.reconstruct(kPi).value - phi_pi) <= 1e-6);
    CHECK(std::fabs(dec.reconstruct(kPi / 2).value - phi_pi2) <= 1e-6);

    const Interaction& I = Interaction::cached(SpaceParams{2, 3.0});
    for (int i = 0; i < 25; ++i) {
        const double th = 0.05 + (kTwoPi - 0.1) * i / 24.0;
        CHECK(std::fabs(dec.reconstruct(th).value - I.value(th).value) <= 1e-6);
    }
    CHECK_THROWS_AS(critical_phi_decomposition(1, 1e-6), DomainError);

    const CriticalPhiDecomposition dec3 = critical_phi_decomposition(3, 1e-5);
    CHECK(dec3.correction_coeffs.size() == 7);
    const Interaction& I3 = Interaction::cached(SpaceParams{3, 5.0});
    for (int i = 0; i < 10; ++i) {
        const double th = 0.3 + (kTwoPi - 0.6) * i / 9.0;
        CHECK(std::fabs(dec3.reconstruct(th).value - I3.value(th).value) <= 1e-5);
    }
}

TEST_CASE("correction term is constant across moment-constrained configurations") {
    // sum_{j!=k} sum_m c_m cos(m(theta_j - theta_k)) = sum_m c_m (|p_m|^2 - n),
    // which is -n sum_m c_m whenever the constrained moments vanish
    const CriticalPhiDecomposition dec = critical_phi_decomposition(2, 1e-6);
    auto correction_pair_sum = [&](const std::vector<double>& ang) {
        double s = 0.0;
        for (std::size_t j = 0; j < ang.size(); ++j)
            for (std::size_t k = 0; k < ang.size(); ++k) {
                if (j == k) continue;
                for (std::size_t m = 1; m <= dec.correction_coeffs.size(); ++m)
                    s += dec.correction_coeffs[m - 1] *
                         std::cos(static_cast<double>(m) * (ang[j] - ang[k]));
            }
        return s;
    };
    const double csum = dec.correction_coeffs[0] + dec.correction_coeffs[1];

    SplitMix64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        // two rotated triangles: moments 1..2 vanish
        std::vector<double> ang;
        for (int g = 0; g < 2; ++g) {
            const double rot = rng.uniform(0.0, kTwoPi);
            for (int j = 0; j < 3; ++j) ang.push_back(rot + kTwoPi * j / 3.0);
        }
        CHECK(correction_pair_sum(ang) == doctest::Approx(-6.0 * csum).epsilon(1e-9));
    }
    std::vector<double> equi;
    for (int j = 0; j < 6; ++j) equi.push_back(kTwoPi * j / 6.0);
    CHECK(correction_pair_sum(equi) == doctest::Approx(-6.0 * csum).epsilon(1e-9));
}
