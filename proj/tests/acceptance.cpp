// Copyright 2026 The stirap-lambda Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Parameters: Omega0 = 25/T, tau = 1.5 T, T Delta = 1,
// alpha = 1 unless stated.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "stirap/experiments.hpp"
#include "stirap/integrator.hpp"
#include "stirap/verify.hpp"

namespace {

using namespace stirap;

struct Point {
    Sequence sequence;
    ModelKind model;
    double gamma;
    double alpha;
    double n;
};

struct Outcome {
    double p3 = 0.0;
    double trace_err = 0.0;
    double min_eig = 0.0;
    double state_herm = 0.0;       // stored states after each step
    double generator_herm = 0.0;   // G[rho_final]
    double raw_step_herm = 0.0;    // step result before symmetrization
};

Outcome simulate(const Point& p, const IntegratorConfig& cfg)
{
    PulseSchedule s;
    s.sequence = p.sequence;
    const Model m = make_model(p.model, p.gamma, p.alpha, p.n);
    const EvolveResult r = evolve(m, s, pure_state(1), cfg);
    Outcome o;
    o.p3 = efficiency(r.final_state);
    o.trace_err = r.diagnostics.max_trace_error;
    o.min_eig = r.diagnostics.min_eigenvalue;
    o.state_herm = hermiticity_error(r.final_state.elements());
    o.generator_herm = hermiticity_error(rhs(m, s, cfg.t_end, r.final_state.elements()));
    o.raw_step_herm = r.diagnostics.max_hermiticity_error;
    return o;
}

std::vector<Outcome> simulate_all(const std::vector<Point>& points, const IntegratorConfig& cfg)
{
    std::vector<Outcome> out(points.size());
    parallel_for(points.size(), 0, [&](std::size_t i) { out[i] = simulate(points[i], cfg); });
    return out;
}

/// Points of one criterion with their outcomes, addressable by coordinates.
class Batch {
public:
    std::size_t add(Sequence seq, ModelKind model, double gamma, double alpha = 1.0,
                    double n = 0.0)
    {
        points_.push_back({seq, model, gamma, alpha, n});
        return points_.size() - 1;
    }
    const std::vector<Point>& points() const { return points_; }

private:
    std::vector<Point> points_;
};

struct Line {
    int id;
    std::string name;
    bool passed;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

} // namespace

int main()
{
    const auto started = std::chrono::steady_clock::now();
    const IntegratorConfig cfg;
    constexpr auto CI = Sequence::Counterintuitive;
    constexpr auto IN = Sequence::Intuitive;
    constexpr auto MICRO = ModelKind::Microscopic;
    constexpr auto PHEN = ModelKind::Phenomenological;

    // Every simulated point of criteria 2-8 goes through one batch so the
    // physicality and convergence checks see all of them.
    Batch b;

    // 2: closed system.
    const std::size_t c2_ci = b.add(CI, MICRO, 0.0);
    const std::size_t c2_in = b.add(IN, MICRO, 0.0);

    // 4: counterintuitive gamma sweep, N = 0.
    const std::vector<double> gamma40 = log_space(1e-2, 1e2, 40);
    std::vector<std::size_t> c4_micro, c4_phen;
    for (double g : gamma40) {
        c4_micro.push_back(b.add(CI, MICRO, g));
        c4_phen.push_back(b.add(CI, PHEN, g));
    }

    // 5: counterintuitive (gamma, alpha) surface, N = 0.
    const std::vector<double> alpha9 = log_space(0.2, 5.0, 9);
    std::vector<std::size_t> c5;
    for (double a : alpha9) {
        for (std::size_t i = 0; i < gamma40.size(); ++i) {
            c5.push_back(a == 1.0 ? c4_micro[i] : b.add(CI, MICRO, gamma40[i], a));
        }
    }

    // 6: intuitive gamma sweep over [0.01, 2], N = 0, plus gamma = 1.
    std::vector<double> gamma6 = log_space(1e-2, 2.0, 24);
    gamma6.push_back(1.0);
    std::sort(gamma6.begin(), gamma6.end());
    std::vector<std::size_t> c6_micro, c6_phen;
    std::size_t c6_micro_at1 = 0, c6_phen_at1 = 0;
    for (double g : gamma6) {
        c6_micro.push_back(b.add(IN, MICRO, g));
        c6_phen.push_back(b.add(IN, PHEN, g));
        if (g == 1.0) {
            c6_micro_at1 = c6_micro.back();
            c6_phen_at1 = c6_phen.back();
        }
    }

    // 7: intuitive, gamma = 1, N over [1e-2, 1e3] with 5 points per decade.
    const std::vector<double> n26 = log_space(1e-2, 1e3, 26);
    const std::size_t c7_zero = c6_micro_at1;
    std::vector<std::size_t> c7;
    for (double n : n26) {
        c7.push_back(b.add(IN, MICRO, 1.0, 1.0, n));
    }

    // 8: counterintuitive thermal degradation.
    const double gamma8[] = {0.1, 1.0, 10.0};
    std::size_t c8_cold[3], c8_warm[3];
    for (int i = 0; i < 3; ++i) {
        c8_cold[i] = b.add(CI, MICRO, gamma8[i], 1.0, 0.0);
        c8_warm[i] = b.add(CI, MICRO, gamma8[i], 1.0, 1.0);
    }

    const std::vector<Outcome> res = simulate_all(b.points(), cfg);
    auto p3 = [&](std::size_t i) { return res[i].p3; };

    std::vector<Line> lines;

    // 1
    {
        double trace = 0.0, state_herm = 0.0, gen_herm = 0.0, raw_herm = 0.0;
        double min_eig = std::numeric_limits<double>::infinity();
        for (const Outcome& o : res) {
            trace = std::max(trace, o.trace_err);
            state_herm = std::max(state_herm, o.state_herm);
            gen_herm = std::max(gen_herm, o.generator_herm);
            raw_herm = std::max(raw_herm, o.raw_step_herm);
            min_eig = std::min(min_eig, o.min_eig);
        }
        const bool ok = trace <= 1e-8 && state_herm <= 1e-12 && gen_herm <= 1e-12 &&
                        min_eig >= -1e-7;
        lines.push_back(
            {1, "physicality over all runs of 2-8", ok,
             fmt("%zu runs; trace drift %.2e (<=1e-8), state Hermiticity %.2e, generator "
                 "Hermiticity %.2e (<=1e-12), min eigenvalue %.2e (>=-1e-7); unsymmetrized step "
                 "defect %.2e",
                 res.size(), trace, state_herm, gen_herm, min_eig, raw_herm)});
    }

    // 2
    lines.push_back({2, "closed-system transfer, both sequences", p3(c2_ci) >= 0.99 &&
                                                                     p3(c2_in) >= 0.99,
                     fmt("P3 counterintuitive %.6f, intuitive %.6f (>=0.99)", p3(c2_ci),
                         p3(c2_in))});

    // 3
    {
        std::mt19937_64 rng(20260101);
        OracleErrors worst;
        for (int i = 0; i < 100; ++i) {
            const AngleSample a = random_angles(rng);
            const OracleErrors e = oracle_errors(a.theta, a.phi, a.rabi);
            worst.closed_form = std::max(worst.closed_form, e.closed_form);
            worst.completeness = std::max(worst.completeness, e.completeness);
            worst.commutator = std::max(worst.commutator, e.commutator);
        }
        lines.push_back({3, "closed-form jump operators vs Bohr decomposition",
                         worst.closed_form <= 1e-10 && worst.completeness <= 1e-12 &&
                             worst.commutator <= 1e-10,
                         fmt("100 random angles; element-wise %.2e (<=1e-10), completeness %.2e "
                             "(<=1e-12), commutator identity %.2e (<=1e-10)",
                             worst.closed_form, worst.completeness, worst.commutator)});
    }

    // 4
    {
        double min_micro = 1.0, min_gap = 1.0, max_gap = -1.0, g_max = 0.0;
        for (std::size_t i = 0; i < gamma40.size(); ++i) {
            const double gap = p3(c4_micro[i]) - p3(c4_phen[i]);
            min_micro = std::min(min_micro, p3(c4_micro[i]));
            min_gap = std::min(min_gap, gap);
            if (gap > max_gap) {
                max_gap = gap;
                g_max = gamma40[i];
            }
        }
        lines.push_back({4, "counterintuitive gamma sweep, N=0",
                         min_micro >= 0.95 && min_gap >= -1e-3 && max_gap >= 0.3,
                         fmt("min micro P3 %.4f (>=0.95), min(micro-phen) %.2e (>=-1e-3), "
                             "max(micro-phen) %.4f at gamma T=%g (>=0.3)",
                             min_micro, min_gap, max_gap, g_max)});
    }

    // 5
    {
        double worst = 1.0;
        double wg = 0.0, wa = 0.0;
        for (std::size_t k = 0; k < c5.size(); ++k) {
            if (p3(c5[k]) < worst) {
                worst = p3(c5[k]);
                wg = b.points()[c5[k]].gamma;
                wa = b.points()[c5[k]].alpha;
            }
        }
        lines.push_back({5, "counterintuitive (gamma, alpha) surface, N=0", worst >= 0.9,
                         fmt("%zu points, min P3 %.4f at gamma T=%g, alpha=%g (>=0.9)",
                             c5.size(), worst, wg, wa)});
    }

    // 6
    {
        double max_diff = 0.0, g_at = 0.0;
        for (std::size_t i = 0; i < gamma6.size(); ++i) {
            const double d = std::abs(p3(c6_micro[i]) - p3(c6_phen[i]));
            if (d > max_diff) {
                max_diff = d;
                g_at = gamma6[i];
            }
        }
        const double m1 = p3(c6_micro_at1), f1 = p3(c6_phen_at1);
        lines.push_back({6, "intuitive gamma sweep, N=0",
                         max_diff <= 0.02 && m1 <= 0.05 && f1 <= 0.05,
                         fmt("max |micro-phen| %.4f at gamma T=%.3g (<=0.02); at gamma T=1 "
                             "micro %.4f, phen %.4f (<=0.05)",
                             max_diff, g_at, m1, f1)});
    }

    // 7
    {
        std::size_t best = 0;
        for (std::size_t k = 0; k < c7.size(); ++k) {
            if (p3(c7[k]) > p3(c7[best])) {
                best = k;
            }
        }
        bool monotone_up = true, monotone_down = true;
        double prev = p3(c7_zero);
        for (std::size_t k : c7) {
            monotone_up = monotone_up && p3(k) >= prev;
            monotone_down = monotone_down && p3(k) <= prev;
            prev = p3(k);
        }
        const double step = std::pow(10.0, 0.2);
        const double n_best = n26[best];
        const bool located = n_best >= 3.0 / step && n_best <= 30.0 * step;
        const bool ok = !monotone_up && !monotone_down && located &&
                        p3(c7[best]) > p3(c7_zero);
        lines.push_back({7, "intuitive thermal optimum, gamma T=1", ok,
                         fmt("grid max P3 %.4f at N=%.3g (needs N in [3,30] within one grid "
                             "step); P3(N=0) %.4f, P3(N=10) %.4f, P3(N=1000) %.4f",
                             p3(c7[best]), n_best, p3(c7_zero), p3(c7[15]), p3(c7.back()))});
    }

    // 8
    {
        bool ok = true;
        std::string detail;
        for (int i = 0; i < 3; ++i) {
            ok = ok && p3(c8_warm[i]) < p3(c8_cold[i]);
            detail += fmt("gamma T=%g: N=0 %.4f, N=1 %.4f; ", gamma8[i], p3(c8_cold[i]),
                          p3(c8_warm[i]));
        }
        const double drop = p3(c8_cold[1]) - p3(c8_warm[1]);
        ok = ok && drop >= 0.05;
        detail += fmt("drop at gamma T=1 %.4f (>=0.05)", drop);
        lines.push_back({8, "counterintuitive thermal degradation", ok, detail});
    }

    // 9
    {
        constexpr double pi = std::numbers::pi;
        const BathModel bath{1.0, 1.0, 0.0};
        double worst_gap = 0.0, worst_drop = 0.0;
        Matrix3 starts[3] = {Matrix3::Zero(), Matrix3::Zero(), Matrix3::Identity() / 3.0};
        starts[0](kPlus, kPlus) = 1.0;
        starts[1](kMinus, kMinus) = 1.0;
        for (const Matrix3& s : starts) {
            const FunnelingOutcome f = funneling(pi / 4.0, pi / 6.0, bath, s, 50.0);
            worst_gap = std::max(worst_gap, 1.0 - f.final_p0);
            worst_drop = std::max(worst_drop, f.largest_drop);
        }
        lines.push_back({9, "zero-temperature funneling into |0>",
                         worst_gap <= 1e-6 && worst_drop <= 0.0,
                         fmt("starts |+>, |->, I/3; max 1-P0 at t=50T %.2e (<=1e-6), largest "
                             "P0 decrease %.2e (none allowed)",
                             worst_gap, worst_drop)});
    }

    // 10
    {
        std::vector<Point> reported;
        std::vector<double> base;
        for (std::size_t i = 0; i < b.points().size(); ++i) {
            if (i != c2_ci && i != c2_in) {
                reported.push_back(b.points()[i]);
                base.push_back(res[i].p3);
            }
        }
        const IntegratorConfig fine = cfg.refined();
        const std::vector<Outcome> refined = simulate_all(reported, fine);
        double worst = 0.0;
        for (std::size_t i = 0; i < reported.size(); ++i) {
            worst = std::max(worst, std::abs(refined[i].p3 - base[i]));
        }
        lines.push_back({10, "integrator refinement", worst <= 1e-6,
                         fmt("%zu reported P3 values; max |P3(default) - P3(refined)| %.2e "
                             "(<=1e-6); refined run rtol %.0e, atol %.0e",
                             reported.size(), worst, fine.rel_tol, fine.abs_tol)});
    }

    int failures = 0;
    for (const Line& l : lines) {
        std::printf("%s [%2d] %s: %s\n", l.passed ? "PASS" : "FAIL", l.id, l.name.c_str(),
                    l.detail.c_str());
        failures += l.passed ? 0 : 1;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::printf("%d of %zu criteria passed (%.1f s)\n", static_cast<int>(lines.size()) - failures,
                lines.size(), secs);
    return failures == 0 ? 0 : 1;
}
