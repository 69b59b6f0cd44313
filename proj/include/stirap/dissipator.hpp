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
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stirap/core.hpp"
#include "stirap/drive.hpp"

namespace stirap {

/// Flat-spectrum bosonic bath: J_a = gamma, J_b = alpha * gamma, with one
/// photon occupation number for both (nearly degenerate) optical transitions.
struct BathModel {
    double gamma = 0.0;
    double alpha = 1.0;
    double n_photons = 0.0;

    void validate() const
    {
        if (!std::isfinite(gamma) || gamma < 0.0) {
            throw std::invalid_argument("gamma must be finite and >= 0");
        }
        if (!std::isfinite(alpha) || alpha < 0.0) {
            throw std::invalid_argument("alpha must be finite and >= 0");
        }
        if (!std::isfinite(n_photons) || n_photons < 0.0) {
            throw std::invalid_argument("n_photons must be finite and >= 0");
        }
    }
};

/// Decay rates after class selection. The "plus" rates multiply the
/// A^+(omega) components and carry (1 + N); the "minus" rates multiply the
/// A^-(omega) components and carry N. With a flat spectrum none of them
/// depends on the Bohr frequency.
struct RateTable {
    double aa_plus = 0.0;
    double bb_plus = 0.0;
    double aa_minus = 0.0;
    double bb_minus = 0.0;
};

inline RateTable rates(const BathModel& bath)
{
    bath.validate();
    const double ja = bath.gamma;
    const double jb = bath.alpha * bath.gamma;
    return {ja * (1.0 + bath.n_photons), jb * (1.0 + bath.n_photons),
            ja * bath.n_photons, jb * bath.n_photons};
}

/// Dressed-state indices in DressedFrame::basis() column order.
enum DressedIndex : int { kPlus = 0, kZero = 1, kMinus = 2 };

/// Dissipative channels in the order they appear in the finite-temperature
/// master equation.
enum class Channel {
    PlusToZero,
    ZeroToMinus,
    PlusToMinus,
    Dephasing,
    ZeroToPlus,
    MinusToZero,
    MinusToPlus,
};

inline std::string_view to_string(Channel c)
{
    switch (c) {
    case Channel::PlusToZero: return "+->0";
    case Channel::ZeroToMinus: return "0->-";
    case Channel::PlusToMinus: return "+->-";
    case Channel::Dephasing: return "dephasing";
    case Channel::ZeroToPlus: return "0->+";
    case Channel::MinusToZero: return "-->0";
    case Channel::MinusToPlus: return "-->+";
    }
    return "?";
}

struct LindbladTerm {
    Channel channel;
    Matrix3 jump;   // dressed basis
    double rate;
};

inline Matrix3 dressed_transition(int to, int from)
{
    Matrix3 m = Matrix3::Zero();
    m(to, from) = 1.0;
    return m;
}

/// |+><+| - |-><-| in the dressed basis.
inline Matrix3 dressed_dephasing()
{
    Matrix3 m = Matrix3::Zero();
    m(kPlus, kPlus) = 1.0;
    m(kMinus, kMinus) = -1.0;
    return m;
}

inline void check_angles(double theta, double phi)
{
    constexpr double half_pi = 0.5 * std::numbers::pi;
    if (!(theta >= 0.0 && theta <= half_pi) || !(phi >= 0.0 && phi <= half_pi)) {
        throw std::domain_error("jump_operators: angles outside [0, pi/2]");
    }
}

/// Seven channels of the microscopic finite-temperature generator, jump
/// operators in the dressed basis.
inline std::array<LindbladTerm, 7> jump_operators(double theta, double phi,
                                                  const BathModel& bath)
{
    check_angles(theta, phi);
    const RateTable r = rates(bath);

    const double s2t = std::pow(std::sin(theta), 2), c2t = std::pow(std::cos(theta), 2);
    const double s2p = std::pow(std::sin(phi), 2), c2p = std::pow(std::cos(phi), 2);
    const double s4p = s2p * s2p, c4p = c2p * c2p;

    return {{
        {Channel::PlusToZero, dressed_transition(kZero, kPlus),
         (r.aa_plus * c2t + r.bb_plus * s2t) * c2p},
        {Channel::ZeroToMinus, dressed_transition(kMinus, kZero),
         (r.aa_minus * c2t + r.bb_minus * s2t) * s2p},
        {Channel::PlusToMinus, dressed_transition(kMinus, kPlus),
         r.aa_plus * s2t * c4p + r.aa_minus * s2t * s4p + r.bb_plus * c2t * c4p +
             r.bb_minus * c2t * s4p},
        {Channel::Dephasing, dressed_dephasing(),
         ((r.aa_plus + r.aa_minus) * s2t + (r.bb_plus + r.bb_minus) * c2t) * s2p * c2p},
        {Channel::ZeroToPlus, dressed_transition(kPlus, kZero),
         (r.aa_minus * c2t + r.bb_minus * s2t) * c2p},
        {Channel::MinusToZero, dressed_transition(kZero, kMinus),
         (r.aa_plus * c2t + r.bb_plus * s2t) * s2p},
        {Channel::MinusToPlus, dressed_transition(kPlus, kMinus),
         r.aa_minus * s2t * c4p + r.aa_plus * s2t * s4p + r.bb_minus * c2t * c4p +
             r.bb_plus * c2t * s4p},
    }};
}

/// Five channels of the zero-temperature generator. Written out separately
/// from jump_operators() so the N = 0 reduction can be cross-checked.
inline std::array<LindbladTerm, 5> jump_operators_zero_temperature(double theta, double phi,
                                                                   double gamma, double alpha)
{
    check_angles(theta, phi);
    BathModel{gamma, alpha, 0.0}.validate();
    const double ga = gamma;
    const double gb = alpha * gamma;

    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(phi), cp = std::cos(phi);

    return {{
        {Channel::PlusToZero, dressed_transition(kZero, kPlus),
         ga * ct * ct * cp * cp + gb * st * st * cp * cp},
        {Channel::MinusToZero, dressed_transition(kZero, kMinus),
         ga * ct * ct * sp * sp + gb * st * st * sp * sp},
        {Channel::PlusToMinus, dressed_transition(kMinus, kPlus),
         ga * st * st * std::pow(cp, 4) + gb * ct * ct * std::pow(cp, 4)},
        {Channel::MinusToPlus, dressed_transition(kPlus, kMinus),
         ga * st * st * std::pow(sp, 4) + gb * ct * ct * std::pow(sp, 4)},
        {Channel::Dephasing, dressed_dephasing(),
         ga * st * st * sp * sp * cp * cp + gb * ct * ct * sp * sp * cp * cp},
    }};
}

/// Sum of rate * D[jump] rho over a set of terms, all in one basis.
template <typename Terms>
Matrix3 apply_dissipators(const Terms& terms, const Matrix3& rho)
{
    Matrix3 out = Matrix3::Zero();
    for (const LindbladTerm& term : terms) {
        if (term.rate != 0.0) {
            out += term.rate * lindblad_dissipator(term.jump, rho);
        }
    }
    return out;
}

/// Dissipative part evaluated in the instantaneous dressed frame and
/// returned in the bare basis.
template <typename Terms>
Matrix3 dressed_dissipation(const DressedFrame& frame, const Terms& terms, const Matrix3& rho)
{
    const Matrix3 u = frame.basis();
    return restore_basis(apply_dissipators(terms, change_basis(rho, u)), u);
}

/// d rho/dt of the microscopic finite-temperature master equation.
inline Matrix3 microscopic_generator(double t, const PulseSchedule& sched, const BathModel& bath,
                                     const Matrix3& rho)
{
    const PulseAmplitudes amps = pulse_amplitudes(t, sched);
    const Matrix3 h = hamiltonian(amps, sched.delta);
    Matrix3 out = -kI * commutator(h, rho);
    if (bath.gamma == 0.0) {
        bath.validate();
        return out;
    }
    const DressedFrame frame = dressed_frame(t, sched);
    out += dressed_dissipation(frame, jump_operators(frame.theta, frame.phi, bath), rho);
    return out;
}

inline Matrix3 microscopic_generator(double t, const PulseSchedule& sched, const BathModel& bath,
                                     const DensityMatrix& rho)
{
    return microscopic_generator(t, sched, bath, rho.elements());
}

/// Zero-temperature master equation through its own five-channel table.
inline Matrix3 microscopic_generator_zero_temperature(double t, const PulseSchedule& sched,
                                                      double gamma, double alpha,
                                                      const Matrix3& rho)
{
    const Matrix3 h = hamiltonian(t, sched);
    Matrix3 out = -kI * commutator(h, rho);
    const DressedFrame frame = dressed_frame(t, sched);
    out += dressed_dissipation(
        frame, jump_operators_zero_temperature(frame.theta, frame.phi, gamma, alpha), rho);
    return out;
}

/// Emission from level 2 to levels 1 and 3 with rates gamma1, gamma3 in the
/// bare basis.
struct PhenomenologicalRates {
    double gamma1 = 0.0;
    double gamma3 = 0.0;

    void validate() const
    {
        if (!std::isfinite(gamma1) || gamma1 < 0.0 || !std::isfinite(gamma3) || gamma3 < 0.0) {
            throw std::invalid_argument("phenomenological rates must be finite and >= 0");
        }
    }
};

/// The dissipation matrix D of the phenomenological model; d rho/dt
/// receives -D/2.
inline Matrix3 phenomenological_dissipation_matrix(const PhenomenologicalRates& g,
                                                   const Matrix3& rho)
{
    const double sum = g.gamma1 + g.gamma3;
    const Complex p2 = rho(1, 1);
    Matrix3 d = Matrix3::Zero();
    d(0, 0) = -2.0 * g.gamma1 * p2;
    d(1, 1) = 2.0 * sum * p2;
    d(2, 2) = -2.0 * g.gamma3 * p2;
    d(0, 1) = sum * rho(0, 1);
    d(1, 0) = sum * rho(1, 0);
    d(1, 2) = sum * rho(1, 2);
    d(2, 1) = sum * rho(2, 1);
    return d;
}

inline Matrix3 phenomenological_generator(double t, const PulseSchedule& sched,
                                          const PhenomenologicalRates& g, const Matrix3& rho)
{
    g.validate();
    const Matrix3 h = hamiltonian(t, sched);
    return -kI * commutator(h, rho) - 0.5 * phenomenological_dissipation_matrix(g, rho);
}

} // namespace stirap
