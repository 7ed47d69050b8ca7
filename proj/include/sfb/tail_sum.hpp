#pragma once

#include <cmath>

#include "sfb/quadrature.hpp"

namespace sfb {

struct TailSum {
    double value = 0.0;
    double err = 0.0;
};

// sum_{k=a}^{inf} f(k) for a smooth, positive, eventually-monotone term
// function with integrable polynomial-type decay. Euler-Maclaurin through the
// f^(5) correction; derivatives by central differences (f must be evaluable
// at real arguments in [a - 3h, inf)).
template <class F>
TailSum euler_maclaurin_tail(const F& f, double a) {
    const double h = std::max(0.25, a / 256.0);
    const double f0 = f(a);

    const double scale = std::max(std::fabs(f0) * std::max(a, 1.0), 1e-30);
    const QuadratureResult integral = integrate_to_infinity(f, a, 1e-13 * scale, 4000);

    const double fm3 = f(a - 3 * h), fm2 = f(a - 2 * h), fm1 = f(a - h);
    const double fp1 = f(a + h), fp2 = f(a + 2 * h), fp3 = f(a + 3 * h);

    const double d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    const double d3 = (fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) / (2.0 * h * h * h);
    const double d5 = (fp3 - 4.0 * fp2 + 5.0 * fp1 - 5.0 * fm1 + 4.0 * fm2 - fm3) /
                      (2.0 * h * h * h * h * h);

    // half-step first derivative as a Richardson error probe
    const double hh = 0.5 * h;
    const double d1h = (f(a - 2 * hh) - 8.0 * f(a - hh) + 8.0 * f(a + hh) - f(a + 2 * hh)) /
                       (12.0 * hh);

    const double t1 = -d1h / 12.0;
    const double t3 = d3 / 720.0;
    const double t5 = -d5 / 30240.0;

    TailSum out;
    out.value = integral.value + 0.5 * f0 + t1 + t3 + t5;
    out.err = integral.err + 2.0 * std::fabs(t5) + 1e-3 * std::fabs(t3) +
              std::fabs(d1 - d1h) / 12.0 +
              4e-16 * (std::fabs(out.value) + std::fabs(f0)) + 1e-300;
    return out;
}

} // namespace sfb
