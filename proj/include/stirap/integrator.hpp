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

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "stirap/core.hpp"
#include "stirap/dissipator.hpp"
#include "stirap/drive.hpp"

namespace stirap {

enum class StepMode { Fixed, Adaptive };

struct IntegratorConfig {
    double t_start = -6.0;
    double t_end = 6.0;
    /// Adaptive is the default: thermal runs at large N are too stiff for a
    /// fixed 1e-3 RK4 step.
    StepMode step_mode = StepMode::Adaptive;
    /// Fixed step, or initial trial step in adaptive mode.
    double step = 1e-3;
    double rel_tol = 1e-9;
    double abs_tol = 1e-11;
    int invariant_check_every = 100;
    int samples = 600;

    void validate() const
    {
        if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_start < t_end)) {
            throw std::invalid_argument("integrator: need finite t_start < t_end");
        }
        if (!std::isfinite(step) || step <= 0.0) {
            throw std::invalid_argument("integrator: step must be > 0");
        }
        if (!std::isfinite(rel_tol) || rel_tol <= 0.0 || !std::isfinite(abs_tol) ||
            abs_tol <= 0.0) {
            throw std::invalid_argument("integrator: tolerances must be > 0");
        }
        if (invariant_check_every < 1) {
            throw std::invalid_argument("integrator: invariant_check_every must be >= 1");
        }
        if (samples < 2) {
            throw std::invalid_argument("integrator: need at least 2 samples");
        }
    }

    /// Same run with a tighter discretisation, for convergence checks.
    IntegratorConfig refined() const
    {
        IntegratorConfig c = *this;
        if (step_mode == StepMode::Fixed) {
            c.step *= 0.5;
        } else {
            c.rel_tol *= 0.1;
            c.abs_tol *= 0.1;
        }
        return c;
    }
};

struct MicroscopicModel {
    BathModel bath;
};

struct PhenomenologicalModel {
    PhenomenologicalRates rates;
};

using Model = std::variant<MicroscopicModel, PhenomenologicalModel>;

inline void validate(const Model& model)
{
    std::visit([](const auto& m) {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, MicroscopicModel>) {
            m.bath.validate();
        } else {
            m.rates.validate();
        }
    }, model);
}

inline Matrix3 rhs(const Model& model, const PulseSchedule& sched, double t, const Matrix3& rho)
{
    if (const auto* micro = std::get_if<MicroscopicModel>(&model)) {
        return microscopic_generator(t, sched, micro->bath, rho);
    }
    return phenomenological_generator(t, sched, std::get<PhenomenologicalModel>(model).rates,
                                      rho);
}

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<std::array<double, 3>> bare;      // rho_11, rho_22, rho_33
    std::vector<std::array<double, 3>> dressed;   // P_+, P_0, P_-
    std::vector<double> trace_error;
    std::vector<double> min_eigenvalue;
};

struct EvolveDiagnostics {
    std::size_t steps = 0;
    std::size_t rejected_steps = 0;
    double max_trace_error = 0.0;
    double min_eigenvalue = std::numeric_limits<double>::infinity();
    /// Largest Hermiticity defect seen before the per-step symmetrization.
    double max_hermiticity_error = 0.0;
};

struct EvolveResult {
    DensityMatrix final_state;
    TrajectoryRecord trajectory;
    EvolveDiagnostics diagnostics;
};

/// Physicality violations beyond this abort the run.
inline constexpr double kIntegrationFailureTol = 1e-6;

namespace detail {

class Propagator {
public:
    Propagator(const Model& model, const PulseSchedule& sched, const IntegratorConfig& cfg)
        : model_(model), sched_(sched), cfg_(cfg)
    {
    }

    Matrix3 derivative(double t, const Matrix3& rho) const { return rhs(model_, sched_, t, rho); }

    Matrix3 rk4_step(double t, const Matrix3& y, double h) const
    {
        const Matrix3 k1 = derivative(t, y);
        const Matrix3 k2 = derivative(t + 0.5 * h, y + 0.5 * h * k1);
        const Matrix3 k3 = derivative(t + 0.5 * h, y + 0.5 * h * k2);
        const Matrix3 k4 = derivative(t + h, y + h * k3);
        return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    struct TrialStep {
        Matrix3 y;
        Matrix3 k_last;
        double error;
    };

    // Dormand-Prince 5(4); k1 is f(t, y) carried over from the previous step.
    TrialStep dopri_step(double t, const Matrix3& y, const Matrix3& k1, double h) const
    {
        const Matrix3 k2 = derivative(t + h / 5.0, y + h * (k1 / 5.0));
        const Matrix3 k3 =
            derivative(t + 3.0 * h / 10.0, y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
        const Matrix3 k4 = derivative(
            t + 4.0 * h / 5.0, y + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3));
        const Matrix3 k5 = derivative(
            t + 8.0 * h / 9.0,
            y + h * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 + 64448.0 / 6561.0 * k3 -
                     212.0 / 729.0 * k4));
        const Matrix3 k6 = derivative(
            t + h, y + h * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 + 46732.0 / 5247.0 * k3 +
                            49.0 / 176.0 * k4 - 5103.0 / 18656.0 * k5));
        TrialStep out;
        out.y = y + h * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 + 125.0 / 192.0 * k4 -
                         2187.0 / 6784.0 * k5 + 11.0 / 84.0 * k6);
        out.k_last = derivative(t + h, out.y);
        const Matrix3 err =
            h * (71.0 / 57600.0 * k1 - 71.0 / 16695.0 * k3 + 71.0 / 1920.0 * k4 -
                 17253.0 / 339200.0 * k5 + 22.0 / 525.0 * k6 - 1.0 / 40.0 * out.k_last);
        double worst = 0.0;
        for (Eigen::Index i = 0; i < 9; ++i) {
            const double scale = cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(y.data()[i]),
                                                                        std::abs(out.y.data()[i]));
            worst = std::max(worst, std::abs(err.data()[i]) / scale);
        }
        out.error = std::isfinite(worst) ? worst : std::numeric_limits<double>::infinity();
        return out;
    }

private:
    const Model& model_;
    const PulseSchedule& sched_;
    const IntegratorConfig& cfg_;
};

inline std::string describe_failure(const std::string& what, double t)
{
    std::ostringstream os;
    os << "evolve: " << what << " at t=" << t;
    return os.str();
}

} // namespace detail

/// Propagates rho0 from cfg.t_start to cfg.t_end. The state is symmetrized
/// after every accepted step; trace and positivity are only monitored.
inline EvolveResult evolve(const Model& model, const PulseSchedule& sched,
                           const DensityMatrix& rho0, const IntegratorConfig& cfg = {})
{
    cfg.validate();
    sched.validate();
    validate(model);
    if (rho0.basis() != Basis::BareRotating) {
        throw std::invalid_argument("evolve: initial state must be in the bare basis");
    }
    if (!rho0.is_physical()) {
        throw std::invalid_argument("evolve: initial state is not physical");
    }

    const detail::Propagator prop(model, sched, cfg);
    EvolveDiagnostics diag;
    TrajectoryRecord traj;
    traj.times.reserve(cfg.samples);

    const double span = cfg.t_end - cfg.t_start;
    auto sample_time = [&](int k) {
        return k == cfg.samples - 1 ? cfg.t_end
                                    : cfg.t_start + span * static_cast<double>(k) /
                                                        static_cast<double>(cfg.samples - 1);
    };

    auto check = [&](double t, const Matrix3& y) {
        if (!all_finite(y)) {
            throw NumericalError(detail::describe_failure("non-finite state", t));
        }
        const double terr = std::abs(y.trace() - Complex{1.0, 0.0});
        const double lmin = min_eigenvalue(y);
        diag.max_trace_error = std::max(diag.max_trace_error, terr);
        diag.min_eigenvalue = std::min(diag.min_eigenvalue, lmin);
        if (terr > kIntegrationFailureTol) {
            throw NumericalError(detail::describe_failure("trace drift " + std::to_string(terr), t));
        }
        if (lmin < -kIntegrationFailureTol) {
            throw NumericalError(
                detail::describe_failure("negative eigenvalue " + std::to_string(lmin), t));
        }
        return std::pair{terr, lmin};
    };

    auto record = [&](double t, const Matrix3& y) {
        const auto [terr, lmin] = check(t, y);
        const DressedFrame frame = dressed_frame(t, sched);
        const Matrix3 yd = frame.to_dressed(y);
        traj.times.push_back(t);
        traj.bare.push_back({y(0, 0).real(), y(1, 1).real(), y(2, 2).real()});
        traj.dressed.push_back({yd(kPlus, kPlus).real(), yd(kZero, kZero).real(),
                                yd(kMinus, kMinus).real()});
        traj.trace_error.push_back(terr);
        traj.min_eigenvalue.push_back(lmin);
    };

    auto accept = [&](Matrix3& y) {
        diag.max_hermiticity_error = std::max(diag.max_hermiticity_error, hermiticity_error(y));
        y = hermitian_part(y);
        ++diag.steps;
    };

    Matrix3 y = rho0.elements();
    double t = cfg.t_start;
    record(t, y);

    if (cfg.step_mode == StepMode::Fixed) {
        for (int k = 1; k < cfg.samples; ++k) {
            const double target = sample_time(k);
            // Equal sub-steps no longer than cfg.step between samples.
            const auto n = static_cast<long>(std::ceil((target - t) / cfg.step - 1e-9));
            const double h = (target - t) / static_cast<double>(std::max(n, 1L));
            for (long i = 0; i < std::max(n, 1L); ++i) {
                y = prop.rk4_step(t, y, h);
                t = (i + 1 == std::max(n, 1L)) ? target : t + h;
                accept(y);
                if (diag.steps % static_cast<std::size_t>(cfg.invariant_check_every) == 0) {
                    check(t, y);
                }
            }
            record(t, y);
        }
    } else {
        constexpr double kMinStep = 1e-12;
        double h = cfg.step;
        Matrix3 k1 = prop.derivative(t, y);
        for (int k = 1; k < cfg.samples; ++k) {
            const double target = sample_time(k);
            while (t < target) {
                const bool last = t + h >= target;
                const double h_try = last ? target - t : h;
                auto trial = prop.dopri_step(t, y, k1, h_try);
                if (trial.error <= 1.0) {
                    t = last ? target : t + h_try;
                    y = trial.y;
                    accept(y);
                    k1 = trial.k_last;
                    if (diag.steps % static_cast<std::size_t>(cfg.invariant_check_every) == 0) {
                        check(t, y);
                    }
                    const double grow =
                        trial.error == 0.0 ? 5.0
                                           : std::clamp(0.9 * std::pow(trial.error, -0.2), 0.2, 5.0);
                    // A step shortened to land on a sample says nothing about h.
                    if (!last || h_try >= h) {
                        h = h_try * grow;
                    }
                } else {
                    ++diag.rejected_steps;
                    const double shrink =
                        std::isfinite(trial.error)
                            ? std::clamp(0.9 * std::pow(trial.error, -0.2), 0.2, 1.0)
                            : 0.2;
                    h = h_try * shrink;
                    if (h < kMinStep) {
                        throw NumericalError(detail::describe_failure("step size underflow", t));
                    }
                }
            }
            record(t, y);
        }
    }

    return {DensityMatrix(y), std::move(traj), diag};
}

} // namespace stirap
