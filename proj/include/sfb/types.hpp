#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sfb/errors.hpp"
#include "sfb/special.hpp"

namespace sfb {

struct ValueWithError {
    double value = 0.0;
    double err = 0.0;
};

inline double reduce_angle(double theta) {
    double r = std::fmod(theta, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

// circular distance from a reduced angle to 0 (== 2*pi)
inline double gap_to_zero(double reduced) { return std::min(reduced, kTwoPi - reduced); }

// The space A^2_alpha together with the pole degree. Membership of the
// degree-N fractions requires alpha > 2(N-1).
struct SpaceParams {
    int degree = 1;
    double alpha = 1.0;

    double normalization() const { return alpha + 1.0; }
    bool is_critical() const { return alpha == 2.0 * degree - 1.0; }
    // decay exponent of the interaction coefficients
    double coefficient_decay() const { return alpha + 3.0 - 2.0 * degree; }

    void validate() const {
        if (degree < 1) throw DomainError("SpaceParams: degree must be >= 1");
        if (!std::isfinite(alpha)) throw DomainError("SpaceParams: alpha must be finite");
        if (!(alpha > 2.0 * (degree - 1)))
            throw DomainError("SpaceParams: membership requires alpha > 2(degree - 1)");
    }
};

// n distinct-or-not pole angles, stored sorted in [0, 2*pi).
class CircleConfig {
public:
    static CircleConfig from_angles(std::vector<double> angles) {
        if (angles.empty()) throw DomainError("CircleConfig: needs at least one angle");
        for (double& a : angles) {
            if (!std::isfinite(a)) throw DomainError("CircleConfig: non-finite angle");
            a = reduce_angle(a);
        }
        std::sort(angles.begin(), angles.end());
        return CircleConfig(std::move(angles));
    }

    static CircleConfig equidistributed(int n) {
        if (n < 1) throw DomainError("CircleConfig: needs n >= 1");
        std::vector<double> a(n);
        for (int k = 0; k < n; ++k) a[k] = kTwoPi * k / n;
        return CircleConfig(std::move(a));
    }

    const std::vector<double>& angles() const { return angles_; }
    int size() const { return static_cast<int>(angles_.size()); }

    // smallest circular gap between two poles; 2*pi for a single pole
    double min_gap() const {
        const int n = size();
        if (n == 1) return kTwoPi;
        double g = kTwoPi - (angles_.back() - angles_.front());
        for (int i = 0; i + 1 < n; ++i) g = std::min(g, angles_[i + 1] - angles_[i]);
        return g;
    }

    CircleConfig rotated(double delta) const {
        std::vector<double> a = angles_;
        for (double& x : a) x += delta;
        return from_angles(std::move(a));
    }

private:
    explicit CircleConfig(std::vector<double> a) : angles_(std::move(a)) {}
    std::vector<double> angles_;
};

} // namespace sfb
