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

// Self-checks run by `stirap verify`: closed-form jump operators against the
// Bohr-frequency pipeline, generator structure, and the zero-temperature
// funneling into the dark state.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "stirap/core.hpp"
#include "stirap/dissipator.hpp"
#include "stirap/drive.hpp"
#include "stirap/spectral.hpp"

namespace stirap {

struct CheckResult {
    std::string name;
    double worst = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

/// Random full-rank density matrix G G^dag / tr(G G^dag), G complex Gaussian.
template <typename Rng>
Matrix3 random_density_matrix(Rng& rng)
{
    std::normal_distribution<double> normal;
    Matrix3 g;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            g(i, j) = Complex(normal(rng), normal(rng));
        }
    }
    const Matrix3 rho = g * g.adjoint();
    return hermitian_part(rho / rho.trace());
}

/// Mixing angles drawn away from the degenerate edges phi = 0 and
/// phi = pi/4, where Bohr frequencies coincide.
struct AngleSample {
    double theta;
    double phi;
    double rabi;
};

template <typename Rng>
AngleSample random_angles(Rng& rng)
{
    constexpr double quarter_pi = 0.25 * std::numbers::pi;
    std::uniform_real_distribution<double> theta(0.0, 2.0 * quarter_pi);
    std::uniform_real_distribution<double> phi(0.05, quarter_pi - 0.05);
    std::uniform_real_distribution<double> rabi(0.5, 20.0);
    return {theta(rng), phi(rng), rabi(rng)};
}

inline double detuning_for_angles(double phi, double rabi)
{
    return 2.0 * rabi / std::tan(2.0 * phi);
}

/// Hamiltonian whose closed-form mixing angles are (theta, phi) at Rabi
/// frequency `rabi`.
inline Matrix3 hamiltonian_for_angles(double theta, double phi, double rabi)
{
    return hamiltonian(PulseAmplitudes{rabi * std::sin(theta), rabi * std::cos(theta)},
                       detuning_for_angles(phi, rabi));
}

struct OracleErrors {
    double closed_form = 0.0;    // |A(omega) numeric - closed form|
    double completeness = 0.0;   // |sum_omega A(omega) - A|
    double commutator = 0.0;     // |[H, A(omega)] + omega A(omega)|
};

/// Decomposes all four coupling operators with a numerically diagonalized
/// Hamiltonian and compares against the closed forms.
inline OracleErrors oracle_errors(double theta, double phi, double rabi)
{
    const double delta = detuning_for_angles(phi, rabi);
    const Matrix3 h = hamiltonian_for_angles(theta, phi, rabi);
    const DressedFrame frame = dressed_frame(theta, phi, rabi, delta);
    const Eigensystem eig = numerical_eigensystem(h);
    const double threshold = 1e-9 * std::max(rabi, 1.0);

    const auto w = frame.eigenvalues();
    OracleErrors e;
    for (Coupling c : kAllCouplings) {
        const Matrix3 a = coupling_operator(c);
        const auto parts = spectral_decompose(a, eig, threshold);

        Matrix3 sum = Matrix3::Zero();
        for (const BohrComponent& p : parts) {
            sum += p.op;
            e.commutator = std::max(
                e.commutator, (commutator(h, p.op) + p.frequency * p.op).cwiseAbs().maxCoeff());
        }
        e.completeness = std::max(e.completeness, (sum - a).cwiseAbs().maxCoeff());

        // Every dressed pair (u, v) owns the Bohr frequency w_v - w_u; the
        // diagonal pairs share omega = 0.
        for (int u = 0; u < 3; ++u) {
            for (int v = 0; v < 3; ++v) {
                if (u != v || u == 0) {
                    const double freq = u == v ? 0.0 : w[v] - w[u];
                    Matrix3 numeric = Matrix3::Zero();
                    for (const BohrComponent& p : parts) {
                        if (std::abs(p.frequency - freq) < 1e-6 * std::max(rabi, 1.0)) {
                            numeric = p.op;
                        }
                    }
                    const Matrix3 closed = closed_form_component(c, frame, u, v);
                    e.closed_form =
                        std::max(e.closed_form, (numeric - closed).cwiseAbs().maxCoeff());
                }
            }
        }
    }
    return e;
}

/// Integrates the dissipative part alone at frozen angles, in the dressed
/// basis, with classical RK4. `observe(t, rho)` sees every step.
inline Matrix3 fixed_angle_flow(double theta, double phi, const BathModel& bath,
                                const Matrix3& rho0_dressed, double t_end, double step,
                                const std::function<void(double, const Matrix3&)>& observe = {})
{
    const auto terms = jump_operators(theta, phi, bath);
    auto f = [&](const Matrix3& r) { return apply_dissipators(terms, r); };
    Matrix3 rho = rho0_dressed;
    const auto n = static_cast<long>(std::ceil(t_end / step));
    const double h = t_end / static_cast<double>(n);
    if (observe) {
        observe(0.0, rho);
    }
    for (long i = 0; i < n; ++i) {
        const Matrix3 k1 = f(rho);
        const Matrix3 k2 = f(rho + 0.5 * h * k1);
        const Matrix3 k3 = f(rho + 0.5 * h * k2);
        const Matrix3 k4 = f(rho + h * k3);
        rho = hermitian_part(rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
        if (observe) {
            observe(h * static_cast<double>(i + 1), rho);
        }
    }
    return rho;
}

struct FunnelingOutcome {
    double final_p0 = 0.0;
    double largest_drop = 0.0;   // max decrease of P0 between consecutive steps
};

inline FunnelingOutcome funneling(double theta, double phi, const BathModel& bath,
                                  const Matrix3& rho0_dressed, double t_end, double step = 1e-2)
{
    FunnelingOutcome out;
    double previous = rho0_dressed(kZero, kZero).real();
    const Matrix3 final = fixed_angle_flow(theta, phi, bath, rho0_dressed, t_end, step,
                                           [&](double, const Matrix3& r) {
                                               const double p0 = r(kZero, kZero).real();
                                               out.largest_drop =
                                                   std::max(out.largest_drop, previous - p0);
                                               previous = p0;
                                           });
    out.final_p0 = final(kZero, kZero).real();
    return out;
}

/// Full self-check suite. Deterministic for a given seed.
inline std::vector<CheckResult> run_verification(std::uint64_t seed = 20260101, int samples = 100)
{
    std::mt19937_64 rng(seed);
    std::vector<CheckResult> results;
    auto add = [&](std::string name, double worst, double tol) {
        results.push_back({std::move(name), worst, tol, worst <= tol});
    };

    OracleErrors worst;
    for (int i = 0; i < samples; ++i) {
        const AngleSample a = random_angles(rng);
        const OracleErrors e = oracle_errors(a.theta, a.phi, a.rabi);
        worst.closed_form = std::max(worst.closed_form, e.closed_form);
        worst.completeness = std::max(worst.completeness, e.completeness);
        worst.commutator = std::max(worst.commutator, e.commutator);
    }
    add("closed-form jump operators match Bohr decomposition", worst.closed_form, 1e-10);
    add("Bohr components sum back to the coupling operator", worst.completeness, 1e-12);
    add("[H, A(w)] = -w A(w)", worst.commutator, 1e-10);

    // Generator equivalence at interior times, where the dressed spectrum is
    // well separated.
    std::uniform_real_distribution<double> time(-2.0, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double gen_gap = 0.0, trace = 0.0, herm = 0.0, zero_t = 0.0, phen_trace = 0.0,
           phen_herm = 0.0, residual = 0.0;
    for (int i = 0; i < samples; ++i) {
        PulseSchedule s;
        s.sequence = (i % 2 == 0) ? Sequence::Counterintuitive : Sequence::Intuitive;
        const double t = time(rng);
        const BathModel bath{0.1 + 5.0 * unit(rng), 0.2 + 4.8 * unit(rng), 3.0 * unit(rng)};
        const Matrix3 rho = random_density_matrix(rng);

        const Matrix3 g = microscopic_generator(t, s, bath, rho);
        const Matrix3 oracle = spectral_generator(hamiltonian(t, s), bath, rho,
                                                  degeneracy_threshold(s));
        gen_gap = std::max(gen_gap, (g - oracle).cwiseAbs().maxCoeff());
        trace = std::max(trace, std::abs(g.trace()));
        herm = std::max(herm, hermiticity_error(g));

        const BathModel cold{bath.gamma, bath.alpha, 0.0};
        zero_t = std::max(zero_t, (microscopic_generator(t, s, cold, rho) -
                                   microscopic_generator_zero_temperature(t, s, cold.gamma,
                                                                          cold.alpha, rho))
                                      .cwiseAbs()
                                      .maxCoeff());

        const Matrix3 p = phenomenological_generator(t, s, {bath.gamma, bath.alpha * bath.gamma},
                                                      rho);
        phen_trace = std::max(phen_trace, std::abs(p.trace()));
        phen_herm = std::max(phen_herm, hermiticity_error(p));

        residual = std::max(residual, eigen_residual(dressed_frame(t, s), hamiltonian(t, s)));
    }
    add("microscopic generator equals Bohr-decomposition generator", gen_gap, 1e-10);
    add("microscopic generator is traceless", trace, 1e-12);
    add("microscopic generator preserves Hermiticity", herm, 1e-12);
    add("finite-T generator at N=0 equals zero-T generator", zero_t, 1e-14);
    add("phenomenological generator is traceless", phen_trace, 1e-12);
    add("phenomenological generator preserves Hermiticity", phen_herm, 1e-12);
    add("dressed eigenvectors solve H v = w v", residual, 1e-10);

    // Zero-temperature funneling into |0>, worst case starting in |->.
    constexpr double pi = std::numbers::pi;
    Matrix3 start = Matrix3::Zero();
    start(kMinus, kMinus) = 1.0;
    const FunnelingOutcome f = funneling(pi / 4.0, pi / 6.0, BathModel{1.0, 1.0, 0.0}, start, 50.0);
    add("zero-T flow reaches |0> (1 - P0 at t=50)", 1.0 - f.final_p0, 1e-6);
    add("zero-T flow never lowers P0", f.largest_drop, 1e-15);

    return results;
}

} // namespace stirap
