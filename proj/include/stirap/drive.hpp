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

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include "stirap/core.hpp"

namespace stirap {

/// Pulse ordering. Counterintuitive (Stokes first) is STIRAP through the
/// dark state; Intuitive (pump first) is b-STIRAP through |->.
enum class Sequence { Counterintuitive, Intuitive };

inline std::string_view to_string(Sequence s)
{
    return s == Sequence::Counterintuitive ? "counterintuitive" : "intuitive";
}

/// Gaussian pulse pair. Times are in units of the pulse width, so `width`
/// is normally 1; rates and detuning are in units of 1/width.
struct PulseSchedule {
    double omega0 = 25.0;
    double tau = 1.5;
    double width = 1.0;
    double delta = 1.0;
    Sequence sequence = Sequence::Counterintuitive;

    // omega0 == 0 is accepted and means "drive off".
    void validate() const
    {
        if (!std::isfinite(omega0) || omega0 < 0.0) {
            throw std::invalid_argument("omega0 must be finite and >= 0");
        }
        if (!std::isfinite(width) || width <= 0.0) {
            throw std::invalid_argument("pulse width must be finite and > 0");
        }
        if (!std::isfinite(tau)) {
            throw std::invalid_argument("tau must be finite");
        }
        if (!std::isfinite(delta) || delta < 0.0) {
            throw std::invalid_argument("delta must be finite and >= 0");
        }
        if (sequence == Sequence::Intuitive && delta <= 0.0) {
            throw std::invalid_argument("intuitive sequence (b-STIRAP) requires delta > 0");
        }
    }
};

struct PulseAmplitudes {
    double pump = 0.0;
    double stokes = 0.0;
};

/// Gaussians centred at +tau/2 (early = false) and -tau/2 (early = true).
inline double gaussian_pulse(double t, const PulseSchedule& s, bool early)
{
    const double centre = early ? -0.5 * s.tau : 0.5 * s.tau;
    const double x = (t - centre) / s.width;
    return 0.5 * s.omega0 * std::exp(-x * x);
}

inline PulseAmplitudes pulse_amplitudes(double t, const PulseSchedule& s)
{
    const double late = gaussian_pulse(t, s, false);
    const double early = gaussian_pulse(t, s, true);
    if (s.sequence == Sequence::Counterintuitive) {
        return {late, early};
    }
    return {early, late};
}

struct MixingAngles {
    double theta = 0.0;
    double phi = 0.0;
    double rabi = 0.0;
};

inline MixingAngles mixing_angles(double pump, double stokes, double delta)
{
    if (!(pump >= 0.0) || !(stokes >= 0.0) || !std::isfinite(pump) ||
        !std::isfinite(stokes)) {
        throw std::invalid_argument("mixing_angles: couplings must be finite and >= 0");
    }
    if (pump == 0.0 && stokes == 0.0) {
        throw std::domain_error("mixing_angles: undefined for zero couplings");
    }
    if (!std::isfinite(delta) || delta < 0.0) {
        throw std::invalid_argument("mixing_angles: delta must be finite and >= 0");
    }
    MixingAngles a;
    a.theta = std::atan2(pump, stokes);
    a.rabi = std::hypot(pump, stokes);
    a.phi = 0.5 * std::atan2(2.0 * a.rabi, delta);
    return a;
}

/// tan(theta) = pump/stokes written as exp(+-2 t tau / T^2); stays exact where
/// both Gaussians underflow.
inline double mixing_theta(double t, const PulseSchedule& s)
{
    const double exponent = 2.0 * t * s.tau / (s.width * s.width);
    const double signed_exponent =
        s.sequence == Sequence::Counterintuitive ? exponent : -exponent;
    return std::atan2(1.0, std::exp(-signed_exponent));
}

inline Matrix3 hamiltonian(const PulseAmplitudes& a, double delta)
{
    Matrix3 h = Matrix3::Zero();
    h(0, 1) = h(1, 0) = a.pump;
    h(1, 1) = delta;
    h(1, 2) = h(2, 1) = a.stokes;
    return h;
}

inline Matrix3 hamiltonian(double t, const PulseSchedule& s)
{
    return hamiltonian(pulse_amplitudes(t, s), s.delta);
}

/// Instantaneous eigensystem of the rotating-frame Hamiltonian.
struct DressedFrame {
    double theta = 0.0;
    double phi = 0.0;
    double rabi = 0.0;
    double omega_plus = 0.0;
    double omega_zero = 0.0;
    double omega_minus = 0.0;
    Ket plus;
    Ket zero;
    Ket minus;

    /// Columns |+>, |0>, |-> in the bare basis.
    Matrix3 basis() const
    {
        Matrix3 u;
        u.col(0) = plus;
        u.col(1) = zero;
        u.col(2) = minus;
        return u;
    }

    std::array<double, 3> eigenvalues() const
    {
        return {omega_plus, omega_zero, omega_minus};
    }

    Matrix3 to_dressed(const Matrix3& bare) const { return change_basis(bare, basis()); }
    Matrix3 to_bare(const Matrix3& dressed) const { return restore_basis(dressed, basis()); }

    DensityMatrix to_dressed(const DensityMatrix& rho) const
    {
        return DensityMatrix(to_dressed(rho.elements()), Basis::Dressed);
    }
    DensityMatrix to_bare(const DensityMatrix& rho) const
    {
        return DensityMatrix(to_bare(rho.elements()), Basis::BareRotating);
    }
};

/// Closed-form eigensystem for given angles, Rabi frequency and detuning.
/// omega_plus = Omega cot(phi) and omega_minus = -Omega tan(phi), evaluated in
/// the rationalised form (Delta +- sqrt(Delta^2 + 4 Omega^2)) / 2 so that the
/// Omega -> 0 tails stay finite and cancellation-free.
inline DressedFrame dressed_frame(double theta, double phi, double rabi, double delta)
{
    DressedFrame f;
    f.theta = theta;
    f.phi = phi;
    f.rabi = rabi;

    const double root = std::hypot(delta, 2.0 * rabi);
    f.omega_plus = 0.5 * (delta + root);
    f.omega_zero = 0.0;
    f.omega_minus = (delta + root) > 0.0 ? -2.0 * rabi * rabi / (delta + root) : 0.0;

    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(phi), cp = std::cos(phi);
    f.plus = Ket(sp * st, cp, sp * ct);
    f.zero = Ket(ct, 0.0, -st);
    f.minus = Ket(cp * st, -sp, cp * ct);
    return f;
}

/// max_v |H v - omega_v v|
inline double eigen_residual(const DressedFrame& f, const Matrix3& h)
{
    const double r_plus = (h * f.plus - f.omega_plus * f.plus).cwiseAbs().maxCoeff();
    const double r_zero = (h * f.zero - f.omega_zero * f.zero).cwiseAbs().maxCoeff();
    const double r_minus = (h * f.minus - f.omega_minus * f.minus).cwiseAbs().maxCoeff();
    return std::max({r_plus, r_zero, r_minus});
}

inline constexpr double kEigenResidualTol = 1e-10;

inline DressedFrame dressed_frame(double t, const PulseSchedule& s)
{
    const PulseAmplitudes a = pulse_amplitudes(t, s);
    const double rabi = std::hypot(a.pump, a.stokes);
    const double theta = mixing_theta(t, s);
    const double phi = 0.5 * std::atan2(2.0 * rabi, s.delta);
    DressedFrame f = dressed_frame(theta, phi, rabi, s.delta);

    const Matrix3 h = hamiltonian(a, s.delta);
    const double residual = eigen_residual(f, h);
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if (!(residual <= kEigenResidualTol * scale)) {
        throw NumericalError("dressed_frame: eigen-residual " + std::to_string(residual) +
                             " at t=" + std::to_string(t));
    }
    return f;
}

} // namespace stirap
