#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <thread>
#include <vector>

#include "sfb/errors.hpp"
#include "sfb/norms.hpp"
#include "sfb/rng.hpp"
#include "sfb/types.hpp"

namespace sfb {

struct BrentResult {
    double x = 0.0;
    double fx = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Brent minimization (golden section + successive parabolic interpolation)
template <class F>
BrentResult brent_min(const F& f, double a, double b, double tol) {
    if (!(a < b)) throw DomainError("brent_min: requires a < b");
    if (!(tol > 0.0)) throw DomainError("brent_min: requires tol > 0");
    constexpr double golden = 0.3819660112501051;
    constexpr int max_iter = 200;

    double x = a + golden * (b - a), w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;

    BrentResult out;
    for (int iter = 0; iter < max_iter; ++iter) {
        out.iterations = iter + 1;
        const double m = 0.5 * (a + b);
        const double tol1 = tol * std::fabs(x) + 1e-15;
        const double tol2 = 2.0 * tol1;
        if (std::fabs(x - m) <= tol2 - 0.5 * (b - a)) {
            out.converged = true;
            break;
        }
        double u;
        bool parabolic = false;
        if (std::fabs(e) > tol1) {
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double pp = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) pp = -pp;
            q = std::fabs(q);
            const double e_old = e;
            e = d;
            if (std::fabs(pp) < std::fabs(0.5 * q * e_old) && pp > q * (a - x) &&
                pp < q * (b - x)) {
                d = pp / q;
                u = x + d;
                if (u - a < tol2 || b - u < tol2) d = (x < m) ? tol1 : -tol1;
                parabolic = true;
            }
        }
        if (!parabolic) {
            e = (x < m) ? b - x : a - x;
            d = golden * e;
        }
        u = (std::fabs(d) >= tol1) ? x + d : x + ((d > 0.0) ? tol1 : -tol1);
        const double fu = f(u);
        if (fu <= fx) {
            if (u < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    out.x = x;
    out.fx = fx;
    if (!out.converged) throw NonConvergence("brent_min: iteration cap reached", std::fabs(b - a));
    return out;
}

// Brent root bracketing (bisection / secant / inverse quadratic)
template <class F>
BrentResult brent_root(const F& f, double a, double b, double tol) {
    if (!(tol > 0.0)) throw DomainError("brent_root: requires tol > 0");
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return {a, 0.0, 0, true};
    if (fb == 0.0) return {b, 0.0, 0, true};
    if (fa * fb > 0.0) throw DomainError("brent_root: no sign change on [a, b]");

    double c = a, fc = fa, d = b - a, e = d;
    BrentResult out;
    for (int iter = 0; iter < 200; ++iter) {
        out.iterations = iter + 1;
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * 1.1e-16 * std::fabs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0) {
            out.converged = true;
            break;
        }
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::fabs(d) > tol1) ? d : ((xm > 0.0) ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a; fc = fa;
            d = b - a; e = d;
        }
    }
    out.x = b;
    out.fx = fb;
    if (!out.converged) throw NonConvergence("brent_root: iteration cap reached", std::fabs(fb));
    return out;
}

struct OptimizationResult {
    CircleConfig config = CircleConfig::equidistributed(1);
    double energy = 0.0;
    double energy_err = 0.0;
    double norm_sq = 0.0;
    int n_starts = 0;
    int iterations = 0;
    bool converged = false;
    double equi_energy = 0.0;
    bool below_equidistribution = false;
};

// dE/dtheta_j = 2 sum_{k != j} phi'(theta_j - theta_k)
inline std::vector<double> energy_gradient(const SpaceParams& p, const CircleConfig& c) {
    p.validate();
    if (c.min_gap() < 1e-12) throw DomainError("energy_gradient: coincident poles");
    const Interaction& I = Interaction::cached(p);
    const std::vector<double>& ang = c.angles();
    const int n = c.size();
    std::vector<double> g(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            const double d = reduce_angle(ang[k] - ang[j]);
            const double dphi = I.derivative(d).value;
            g[static_cast<std::size_t>(k)] += 2.0 * dphi;
            g[static_cast<std::size_t>(j)] -= 2.0 * dphi;
        }
    }
    return g;
}

namespace detail {

// canonical gauge: sorted angles with the first pinned to 0
inline std::vector<double> canonical_gauge(std::vector<double> ang) {
    for (double& a : ang) a = reduce_angle(a);
    std::sort(ang.begin(), ang.end());
    const double base = ang.front();
    for (double& a : ang) a = reduce_angle(a - base);
    std::sort(ang.begin(), ang.end());
    return ang;
}

inline double min_circular_gap(const std::vector<double>& sorted) {
    const std::size_t n = sorted.size();
    if (n < 2) return kTwoPi;
    double g = kTwoPi - (sorted.back() - sorted.front());
    for (std::size_t i = 0; i + 1 < n; ++i) g = std::min(g, sorted[i + 1] - sorted[i]);
    return g;
}

struct LocalRun {
    std::vector<double> angles;
    double energy = 0.0;
    int iterations = 0;
    bool converged = false;
};

// projected gradient descent with Armijo backtracking in the pinned gauge
inline LocalRun descend(const SpaceParams& p, std::vector<double> ang, int max_iter) {
    const Interaction& I = Interaction::cached(p);
    const int n = static_cast<int>(ang.size());

    auto energy_of = [&](const std::vector<double>& a) {
        double e = 0.0;
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k) e += 2.0 * I.value_coarse(a[k] - a[j]).value;
        return e;
    };
    auto gradient_of = [&](const std::vector<double>& a, std::vector<double>* g) {
        std::fill(g->begin(), g->end(), 0.0);
        for (int j = 0; j < n; ++j) {
            for (int k = j + 1; k < n; ++k) {
                const double dphi = I.derivative_fast(reduce_angle(a[k] - a[j])).value;
                (*g)[static_cast<std::size_t>(k)] += 2.0 * dphi;
                (*g)[static_cast<std::size_t>(j)] -= 2.0 * dphi;
            }
        }
    };

    LocalRun run;
    ang = canonical_gauge(std::move(ang));
    double e0 = energy_of(ang);
    std::vector<double> g(static_cast<std::size_t>(n));
    std::vector<double> trial(static_cast<std::size_t>(n));

    for (int iter = 0; iter < max_iter; ++iter) {
        run.iterations = iter + 1;
        gradient_of(ang, &g);
        g[0] = 0.0; // pinned
        double gmax = 0.0, gsq = 0.0;
        for (double gi : g) {
            gmax = std::max(gmax, std::fabs(gi));
            gsq += gi * gi;
        }
        if (gmax < 1e-9) {
            run.converged = true;
            break;
        }
        double step = std::min(0.25, 0.5 / gmax);
        bool accepted = false;
        while (step >= 1e-14) {
            for (int i = 0; i < n; ++i)
                trial[static_cast<std::size_t>(i)] =
                    ang[static_cast<std::size_t>(i)] - step * g[static_cast<std::size_t>(i)];
            std::vector<double> cand = canonical_gauge(trial);
            if (min_circular_gap(cand) < 1e-9) {
                step *= 0.5;
                continue;
            }
            const double e1 = energy_of(cand);
            if (e1 <= e0 - 1e-4 * step * gsq) {
                double move = 0.0;
                for (int i = 0; i < n; ++i)
                    move = std::max(move, std::fabs(cand[static_cast<std::size_t>(i)] -
                                                    ang[static_cast<std::size_t>(i)]));
                ang = std::move(cand);
                e0 = e1;
                accepted = true;
                if (move < 1e-10) {
                    run.converged = true;
                    iter = max_iter; // step tolerance met
                }
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            run.converged = true; // no admissible descent direction left
            break;
        }
        if (run.converged) break;
    }
    run.angles = std::move(ang);
    run.energy = e0;
    return run;
}

} // namespace detail

// 1-D minimization of 2 phi over (0, pi]: bracket every local minimum on a
// 256-point scan, refine each with Brent, return the best.
inline OptimizationResult two_point_minimize(const SpaceParams& p) {
    p.validate();
    const Interaction& I = Interaction::cached(p);
    const int grid = 256;
    std::vector<double> theta(grid + 1), val(grid + 1);
    for (int i = 1; i <= grid; ++i) {
        theta[static_cast<std::size_t>(i)] = kPi * i / grid;
        val[static_cast<std::size_t>(i)] = I.value_fast(theta[static_cast<std::size_t>(i)]).value;
    }

    auto f = [&](double t) { return I.value(t).value; };

    OptimizationResult out;
    double best_x = kPi, best_f = val[grid];
    int refined = 0, iters = 0;
    bool all_converged = true;
    for (int i = 1; i < grid; ++i) {
        const double left_val =
            (i == 1) ? I.value_fast(0.5 * theta[1]).value : val[static_cast<std::size_t>(i - 1)];
        if (val[static_cast<std::size_t>(i)] <= left_val &&
            val[static_cast<std::size_t>(i)] <= val[static_cast<std::size_t>(i + 1)]) {
            const double left_edge = (i == 1) ? 1e-9 : theta[static_cast<std::size_t>(i - 1)];
            const BrentResult r =
                brent_min(f, left_edge, theta[static_cast<std::size_t>(i + 1)], 1e-12);
            ++refined;
            iters += r.iterations;
            all_converged = all_converged && r.converged;
            if (r.fx < best_f) {
                best_f = r.fx;
                best_x = r.x;
            }
        }
    }
    // the symmetric endpoint theta = pi (phi is symmetric about pi)
    if (val[grid] <= val[grid - 1]) {
        const BrentResult r =
            brent_min(f, theta[grid - 1], kTwoPi - theta[grid - 1], 1e-12);
        ++refined;
        iters += r.iterations;
        if (r.fx < best_f) {
            best_f = r.fx;
            best_x = std::min(r.x, kTwoPi - r.x);
        }
    }

    out.config = CircleConfig::from_angles({0.0, best_x});
    out.energy = 2.0 * best_f;
    out.energy_err = 2.0 * I.value(best_x).err;
    out.norm_sq = 2.0 * I.value_at_zero().value + out.energy;
    out.n_starts = refined;
    out.iterations = iters;
    out.converged = all_converged && refined > 0;
    out.equi_energy = 2.0 * I.value(kPi).value;
    out.below_equidistribution = out.energy < out.equi_energy - 1e-12;
    return out;
}

// Multistart projected descent over n pole angles (first pinned to 0).
// Deterministic: per-start substreams of `seed`, minimum-energy merge with
// lowest start index winning ties.
inline OptimizationResult npoint_minimize(const SpaceParams& p, int n, int starts,
                                          std::uint64_t seed) {
    p.validate();
    if (n < 2) throw DomainError("npoint_minimize: requires n >= 2");
    if (starts < 1) throw DomainError("npoint_minimize: requires starts >= 1");
    Interaction::cached(p); // build the shared series before spawning workers

    constexpr int kMaxIter = 5000;
    auto run_start = [&](int s) {
        SplitMix64 rng = SplitMix64::substream(seed, static_cast<std::uint64_t>(s));
        std::vector<double> init(static_cast<std::size_t>(n));
        for (int attempt = 0;; ++attempt) {
            init[0] = 0.0;
            for (int i = 1; i < n; ++i) init[static_cast<std::size_t>(i)] = rng.uniform(0.0, kTwoPi);
            std::vector<double> c = detail::canonical_gauge(init);
            if (detail::min_circular_gap(c) >= 1e-6 || attempt > 64) {
                init = std::move(c);
                break;
            }
        }
        return detail::descend(p, init, kMaxIter);
    };

    std::vector<detail::LocalRun> runs(static_cast<std::size_t>(starts));
    const unsigned workers = std::min<unsigned>(std::thread::hardware_concurrency(), 8);
    if (workers > 1 && starts > 1) {
        std::vector<std::future<void>> futs;
        std::atomic<int> next{0};
        for (unsigned w = 0; w < workers; ++w) {
            futs.push_back(std::async(std::launch::async, [&]() {
                int i;
                while ((i = next.fetch_add(1)) < starts)
                    runs[static_cast<std::size_t>(i)] = run_start(i);
            }));
        }
        for (auto& f : futs) f.get();
    } else {
        for (int i = 0; i < starts; ++i) runs[static_cast<std::size_t>(i)] = run_start(i);
    }

    int best = -1;
    bool any_converged = false;
    for (int i = 0; i < starts; ++i) {
        any_converged = any_converged || runs[static_cast<std::size_t>(i)].converged;
        if (best < 0 || runs[static_cast<std::size_t>(i)].energy < runs[static_cast<std::size_t>(best)].energy)
            best = i;
    }
    if (!any_converged)
        throw NonConvergence("npoint_minimize: no start converged",
                             runs[static_cast<std::size_t>(best)].energy);

    OptimizationResult out;
    out.config = CircleConfig::from_angles(runs[static_cast<std::size_t>(best)].angles);
    const ValueWithError e = config_energy_interaction(p, out.config, 1e-9);
    out.energy = e.value;
    out.energy_err = e.err;
    const Interaction& I = Interaction::cached(p);
    out.norm_sq = n * I.value_at_zero().value + out.energy;
    out.n_starts = starts;
    out.iterations = runs[static_cast<std::size_t>(best)].iterations;
    out.converged = runs[static_cast<std::size_t>(best)].converged;

    detail::CompensatedSum eq;
    for (int d = 1; d < n; ++d) eq.add(n * I.value(kTwoPi * d / n).value);
    out.equi_energy = eq.get();
    out.below_equidistribution = out.energy < out.equi_energy - 1e-9;
    return out;
}

} // namespace sfb
