#include "sl2r/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sl2r::ode {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
// dense-output weights of the continuous extension
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

bool finite(const State& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

State hermite(double si, double s0, const State& y0, const State& f0, double s1, const State& y1,
              const State& f1) {
    const double h = s1 - s0;
    const double t = (si - s0) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2,
                 h11 = t3 - t2;
    State out(y0.size());
    for (std::size_t i = 0; i < y0.size(); ++i)
        out[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
    return out;
}

State eval_dense(const std::array<State, 5>& rc, double theta) {
    const double t1 = 1.0 - theta;
    State out(rc[0].size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = rc[0][i] +
                 theta * (rc[1][i] + t1 * (rc[2][i] + theta * (rc[3][i] + t1 * rc[4][i])));
    return out;
}

// Hairer-style automatic initial step.
double initial_step_guess(const OdeSystem& sys, double s0, const State& y0, const State& f0,
                          double posneg, double rtol, double atol, double span) {
    auto scnorm = [&](const State& v, const State& ref) {
        double acc = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double sc = atol + rtol * std::abs(ref[i]);
            const double q = v[i] / sc;
            acc += q * q;
        }
        return std::sqrt(acc / v.size());
    };
    const double d0 = scnorm(y0, y0);
    const double dd1 = scnorm(f0, y0);
    double h0 = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 : 0.01 * d0 / dd1;
    h0 = std::min(h0, span);
    State y1(y0.size());
    for (std::size_t i = 0; i < y0.size(); ++i) y1[i] = y0[i] + posneg * h0 * f0[i];
    State f1(y0.size());
    try {
        f1 = sys.eval(s0 + posneg * h0, y1);
    } catch (...) {
        return std::max(1e-6, h0 * 1e-3);
    }
    if (!finite(f1)) return std::max(1e-10, h0 * 1e-3);
    State df(y0.size());
    for (std::size_t i = 0; i < y0.size(); ++i) df[i] = f1[i] - f0[i];
    const double d2 = scnorm(df, y0) / h0;
    const double dm = std::max(dd1, d2);
    double h1 = (dm <= 1e-15) ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    return std::min({100 * h0, h1, span});
}

}  // namespace

State Trajectory::state_at(double si) const {
    if (s.empty()) throw std::runtime_error("sl2r: empty trajectory");
    if (s.size() == 1) return states.front();
    const bool forward = s.back() >= s.front();
    const double lo = forward ? s.front() : s.back();
    const double hi = forward ? s.back() : s.front();
    const double pad = 1e-9 * (1.0 + std::abs(hi) + std::abs(lo));
    if (si < lo - pad || si > hi + pad)
        throw std::domain_error("sl2r: dense evaluation outside the integrated range");
    si = std::clamp(si, lo, hi);
    std::size_t k = 0;
    if (forward) {
        auto it = std::upper_bound(s.begin(), s.end(), si);
        k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - s.begin())) - 1;
    } else {
        auto it = std::upper_bound(s.begin(), s.end(), si, std::greater<double>());
        k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - s.begin())) - 1;
    }
    k = std::min(k, s.size() - 2);
    if (k < dense.size() && dense_h[k] != 0.0)
        return eval_dense(dense[k], (si - s[k]) / dense_h[k]);
    return hermite(si, s[k], states[k], derivs[k], s[k + 1], states[k + 1], derivs[k + 1]);
}

Trajectory integrate(const OdeSystem& system, const State& y0, double s0, double s1,
                     const IntegratorConfig& config, const std::vector<EventSpec>& events) {
    if (static_cast<int>(y0.size()) != system.dim)
        throw std::invalid_argument("sl2r: initial state dimension mismatch");
    if (!(config.rel_tol > 0) || !(config.abs_tol > 0) || !(config.event_tol > 0) ||
        config.max_steps <= 0)
        throw std::invalid_argument("sl2r: integrator tolerances and max steps must be positive");
    if (!system.contains(s0, y0))
        throw std::domain_error("sl2r: initial state outside the system domain");

    Trajectory out;
    const int n = system.dim;
    const double posneg = (s1 >= s0) ? 1.0 : -1.0;
    const double span = std::abs(s1 - s0);

    State y = y0;
    State f = system.eval(s0, y);
    if (!finite(f)) throw std::domain_error("sl2r: RHS not finite at the initial state");
    out.s.push_back(s0);
    out.states.push_back(y);
    out.derivs.push_back(f);
    if (span == 0.0) return out;

    struct EventTracker {
        const EventSpec* spec;
        double g_prev;
    };
    std::vector<EventTracker> trackers;
    trackers.reserve(events.size());
    for (const auto& ev : events) trackers.push_back({&ev, ev.value(s0, y)});

    auto direction_ok = [](const EventSpec& ev, double ga, double gb) {
        const bool crossed = (ga <= 0.0) != (gb <= 0.0);
        if (!crossed) return false;
        if (ev.direction < 0) return ga > 0.0 && gb <= 0.0;
        if (ev.direction > 0) return ga < 0.0 && gb >= 0.0;
        return true;
    };

    // Bisects fun over [sa, sb] using the supplied interpolant, appends the
    // located point and marks the trajectory as event-terminated.
    auto finish_at_root = [&](double sa, double sb,
                              const std::function<State(double)>& interp,
                              const std::function<double(double, const State&)>& fun, double ga,
                              const State& fallback_deriv, const std::string& name) {
        double lo = sa, hi = sb, glo = ga;
        for (int it = 0; it < 200 && std::abs(hi - lo) > config.event_tol; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double gm = fun(mid, interp(mid));
            if ((glo <= 0.0) == (gm <= 0.0)) {
                lo = mid;
                glo = gm;
            } else {
                hi = mid;
            }
        }
        const double se = hi;
        const State ye = interp(se);
        State fe(n);
        try {
            fe = system.eval(se, ye);
        } catch (...) {
            fe = fallback_deriv;
        }
        if (!finite(fe)) fe = fallback_deriv;
        out.s.push_back(se);
        out.states.push_back(ye);
        out.derivs.push_back(fe);
        out.reason = Termination::Event;
        out.event_name = name;
    };

    // Handles domain exit and events on an accepted step; returns true when
    // the trajectory was terminated inside the step.
    auto handle_step_checks = [&](double sa, double sb, const std::function<State(double)>& interp,
                                  const State& fb_deriv, const State& ynew) -> bool {
        if (!system.contains(sb, ynew)) {
            auto fun = [&](double si, const State& yi) {
                return system.contains(si, yi) ? 1.0 : -1.0;
            };
            finish_at_root(sa, sb, interp, fun, 1.0, fb_deriv, "domain");
            return true;
        }
        const EventSpec* best = nullptr;
        double best_gprev = 0.0;
        double best_root = 0.0;
        for (auto& tr : trackers) {
            const double gnew = tr.spec->value(sb, ynew);
            if (tr.spec->terminal && direction_ok(*tr.spec, tr.g_prev, gnew)) {
                // locate this crossing to compare positions when several fire
                double lo = sa, hi = sb, glo = tr.g_prev;
                for (int it = 0; it < 200 && std::abs(hi - lo) > config.event_tol; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double gm = tr.spec->value(mid, interp(mid));
                    if ((glo <= 0.0) == (gm <= 0.0)) {
                        lo = mid;
                        glo = gm;
                    } else {
                        hi = mid;
                    }
                }
                if (!best || posneg * hi < posneg * best_root) {
                    best = tr.spec;
                    best_gprev = tr.g_prev;
                    best_root = hi;
                }
            }
            tr.g_prev = gnew;
        }
        if (best) {
            finish_at_root(sa, sb, interp, best->value, best_gprev, fb_deriv, best->name);
            return true;
        }
        return false;
    };

    // --- fixed-step RK4 ------------------------------------------------------
    if (config.method == Method::Rk4Fixed) {
        if (!(config.fixed_step > 0)) throw std::invalid_argument("sl2r: fixed_step must be > 0");
        const long nsteps = std::max<long>(1, std::lround(std::ceil(span / config.fixed_step)));
        const double h = posneg * span / static_cast<double>(nsteps);
        for (long k = 0; k < nsteps; ++k) {
            const double s = out.s.back();
            State k1 = f;
            State tmp(n);
            for (int i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
            State k2 = system.eval(s + 0.5 * h, tmp);
            for (int i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
            State k3 = system.eval(s + 0.5 * h, tmp);
            for (int i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
            State k4 = system.eval(s + h, tmp);
            State ynew(n);
            for (int i = 0; i < n; ++i)
                ynew[i] = y[i] + h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
            const double snew = s + h;
            if (!finite(ynew)) {
                out.reason = Termination::StepFailure;
                out.failure = "non-finite state in fixed-step integration";
                return out;
            }
            State fnew = system.eval(snew, ynew);
            auto interp = [&](double si) { return hermite(si, s, y, f, snew, ynew, fnew); };
            if (handle_step_checks(s, snew, interp, fnew, ynew)) return out;
            y = ynew;
            f = fnew;
            out.s.push_back(snew);
            out.states.push_back(y);
            out.derivs.push_back(f);
        }
        out.reason = Termination::ReachedEnd;
        return out;
    }

    // --- adaptive Dormand-Prince 5(4) with continuous extension ----------------
    double h = config.initial_step > 0
                   ? std::min(config.initial_step, span)
                   : initial_step_guess(system, s0, y, f, posneg, config.rel_tol, config.abs_tol,
                                        span);
    double err_old = 1e-4;
    double s = s0;
    long nsteps = 0;

    State k1 = f, k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n);

    while (posneg * (s1 - s) > 0.0) {
        if (++nsteps > config.max_steps) {
            out.reason = Termination::StepFailure;
            out.failure = "maximum number of steps exceeded";
            return out;
        }
        const double hmin = 16.0 * std::numeric_limits<double>::epsilon() *
                            std::max(1.0, std::abs(s));
        if (h < hmin) {
            out.reason = Termination::StepFailure;
            out.failure = "step size underflow";
            return out;
        }
        if (posneg * (s + posneg * h - s1) > 0.0) h = std::abs(s1 - s);
        const double hs = posneg * h;

        bool stage_ok = true;
        auto stage = [&](State& k, double cc, auto&&... terms) {
            for (int i = 0; i < n; ++i) {
                double acc = 0.0;
                ((acc += terms.first * terms.second[i]), ...);
                tmp[i] = y[i] + hs * acc;
            }
            try {
                system.rhs(s + cc * hs, tmp, k);
            } catch (...) {
                stage_ok = false;
                return;
            }
            if (!finite(k)) stage_ok = false;
        };
        using P = std::pair<double, const State&>;
        stage(k2, c2, P{a21, k1});
        if (stage_ok) stage(k3, c3, P{a31, k1}, P{a32, k2});
        if (stage_ok) stage(k4, c4, P{a41, k1}, P{a42, k2}, P{a43, k3});
        if (stage_ok) stage(k5, c5, P{a51, k1}, P{a52, k2}, P{a53, k3}, P{a54, k4});
        if (stage_ok) stage(k6, 1.0, P{a61, k1}, P{a62, k2}, P{a63, k3}, P{a64, k4}, P{a65, k5});
        if (stage_ok) {
            for (int i = 0; i < n; ++i)
                ynew[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                       b6 * k6[i]);
            try {
                system.rhs(s + hs, ynew, k7);
            } catch (...) {
                stage_ok = false;
            }
            if (stage_ok && !finite(k7)) stage_ok = false;
        }
        if (!stage_ok || !finite(ynew)) {
            h *= 0.25;
            continue;
        }

        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            const double ee = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                    e6 * k6[i] + e7 * k7[i]);
            const double sc =
                config.abs_tol + config.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (ee / sc) * (ee / sc);
        }
        err = std::sqrt(err / n);

        if (err <= 1.0) {
            const double snew = s + hs;
            // continuous extension over the accepted step
            std::array<State, 5> rc;
            for (auto& r : rc) r.resize(n);
            for (int i = 0; i < n; ++i) {
                const double ydiff = ynew[i] - y[i];
                const double bspl = hs * k1[i] - ydiff;
                rc[0][i] = y[i];
                rc[1][i] = ydiff;
                rc[2][i] = bspl;
                rc[3][i] = ydiff - hs * k7[i] - bspl;
                rc[4][i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                                 d7 * k7[i]);
            }
            auto interp = [&](double si) { return eval_dense(rc, (si - s) / hs); };

            out.dense.push_back(rc);
            out.dense_h.push_back(hs);
            const bool stopped = handle_step_checks(s, snew, interp, k7, ynew);
            if (stopped) return out;

            s = snew;
            y = ynew;
            k1 = k7;  // first-same-as-last
            out.s.push_back(s);
            out.states.push_back(y);
            out.derivs.push_back(k1);

            // PI step-size controller
            const double alpha = 0.17, beta = 0.04, safe = 0.9;
            double fac = safe * std::pow(std::max(err, 1e-16), -alpha) * std::pow(err_old, beta);
            fac = std::clamp(fac, 0.2, 10.0);
            err_old = std::max(err, 1e-4);
            h *= fac;
        } else {
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
        }
    }
    out.reason = Termination::ReachedEnd;
    return out;
}

std::vector<std::pair<State, State>> sample_direction_field(const OdeSystem& system,
                                                            const std::vector<State>& points) {
    std::vector<std::pair<State, State>> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        if (!system.contains(0.0, p)) continue;
        State d = system.eval(0.0, p);
        double nn = 0.0;
        for (double v : d) nn += v * v;
        nn = std::sqrt(nn);
        if (nn > 0.0)
            for (double& v : d) v /= nn;
        out.emplace_back(p, std::move(d));
    }
    return out;
}

}  // namespace sl2r::ode
