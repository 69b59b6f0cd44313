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

// Bohr-frequency decomposition of system operators and the master-equation
// pipeline built directly from it. The production generator in
// dissipator.hpp never calls into this file; it exists to check the
// closed-form jump operators against a first-principles construction.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "stirap/core.hpp"
#include "stirap/dissipator.hpp"
#include "stirap/drive.hpp"

namespace stirap {

/// Eigenvalues with matching eigenvector columns.
struct Eigensystem {
    std::array<double, 3> values{};
    Matrix3 vectors = Matrix3::Identity();
};

inline Eigensystem eigensystem(const DressedFrame& f)
{
    return {f.eigenvalues(), f.basis()};
}

/// Eigensystem by numerical diagonalization, independent of the closed forms.
inline Eigensystem numerical_eigensystem(const Matrix3& h)
{
    Eigen::SelfAdjointEigenSolver<Matrix3> solver(hermitian_part(h));
    if (solver.info() != Eigen::Success) {
        throw NumericalError("numerical_eigensystem: diagonalization failed");
    }
    Eigensystem e;
    for (int i = 0; i < 3; ++i) {
        e.values[i] = solver.eigenvalues()(i);
    }
    e.vectors = solver.eigenvectors();
    return e;
}

struct BohrComponent {
    double frequency = 0.0;
    Matrix3 op = Matrix3::Zero();
};

class DegenerateSpectrumError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

enum class DegeneracyPolicy { Abort, Merge };

/// Binning threshold for Bohr frequencies of a given schedule.
inline double degeneracy_threshold(const PulseSchedule& s)
{
    return 1e-9 * std::max(s.omega0, 1.0);
}

/// A(omega) = sum over eps' - eps = omega of Pi(eps) A Pi(eps'), sorted by
/// frequency. Components that vanish identically are dropped. Distinct level
/// pairs whose frequencies lie closer than `threshold` raise
/// DegenerateSpectrumError unless the policy is Merge.
inline std::vector<BohrComponent> spectral_decompose(const Matrix3& a, const Eigensystem& eig,
                                                     double threshold = 1e-9,
                                                     DegeneracyPolicy policy =
                                                         DegeneracyPolicy::Abort)
{
    std::array<Matrix3, 3> proj;
    for (int i = 0; i < 3; ++i) {
        const Ket v = eig.vectors.col(i);
        proj[i] = v * v.adjoint();
    }

    struct Bin {
        double frequency;
        bool diagonal;
        Matrix3 op;
    };
    std::vector<Bin> bins;
    bins.push_back({0.0, true, Matrix3::Zero()});

    for (int i = 0; i < 3; ++i) {
        bins.front().op += proj[i] * a * proj[i];
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i == j) {
                continue;
            }
            const double w = eig.values[j] - eig.values[i];
            const Matrix3 piece = proj[i] * a * proj[j];
            auto near = std::find_if(bins.begin(), bins.end(), [&](const Bin& b) {
                return std::abs(b.frequency - w) < threshold;
            });
            if (near == bins.end()) {
                bins.push_back({w, false, piece});
                continue;
            }
            if (policy == DegeneracyPolicy::Abort) {
                throw DegenerateSpectrumError(
                    "spectral_decompose: Bohr frequencies " + std::to_string(w) + " and " +
                    std::to_string(near->frequency) + " closer than threshold");
            }
            near->op += piece;
        }
    }

    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    std::vector<BohrComponent> out;
    for (const Bin& b : bins) {
        if (b.op.cwiseAbs().maxCoeff() > 1e-14 * scale) {
            out.push_back({b.frequency, b.op});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const BohrComponent& x, const BohrComponent& y) { return x.frequency < y.frequency; });
    return out;
}

inline std::vector<BohrComponent> spectral_decompose(const Matrix3& a, const DressedFrame& frame,
                                                     double threshold = 1e-9,
                                                     DegeneracyPolicy policy =
                                                         DegeneracyPolicy::Abort)
{
    return spectral_decompose(a, eigensystem(frame), threshold, policy);
}

/// The four system coupling operators: A_a^+ = |1><2|, A_a^- = |2><1|,
/// A_b^+ = |3><2|, A_b^- = |2><3|.
enum class Coupling { APlus, AMinus, BPlus, BMinus };

inline constexpr std::array<Coupling, 4> kAllCouplings{Coupling::APlus, Coupling::AMinus,
                                                       Coupling::BPlus, Coupling::BMinus};

inline Matrix3 coupling_operator(Coupling c)
{
    Matrix3 m = Matrix3::Zero();
    switch (c) {
    case Coupling::APlus: m(0, 1) = 1.0; break;
    case Coupling::AMinus: m(1, 0) = 1.0; break;
    case Coupling::BPlus: m(2, 1) = 1.0; break;
    case Coupling::BMinus: m(1, 2) = 1.0; break;
    }
    return m;
}

/// Closed-form matrix elements <u|A|v> in the dressed basis (+, 0, -).
/// Entry (u, v) is the amplitude of the jump |u><v| at Bohr frequency
/// omega_v - omega_u; the diagonal is the omega = 0 dephasing component.
inline Matrix3 dressed_coupling(Coupling c, double theta, double phi)
{
    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(phi), cp = std::cos(phi);
    Matrix3 m = Matrix3::Zero();
    switch (c) {
    case Coupling::APlus:
        m(kZero, kPlus) = ct * cp;
        m(kMinus, kPlus) = st * cp * cp;
        m(kZero, kMinus) = -ct * sp;
        m(kPlus, kMinus) = -st * sp * sp;
        m(kPlus, kPlus) = st * sp * cp;
        m(kMinus, kMinus) = -st * sp * cp;
        break;
    case Coupling::AMinus:
        m(kPlus, kZero) = ct * cp;
        m(kMinus, kZero) = -ct * sp;
        m(kMinus, kPlus) = -st * sp * sp;
        m(kPlus, kMinus) = st * cp * cp;
        m(kPlus, kPlus) = st * sp * cp;
        m(kMinus, kMinus) = -st * sp * cp;
        break;
    case Coupling::BPlus:
        m(kZero, kPlus) = -st * cp;
        m(kMinus, kPlus) = ct * cp * cp;
        m(kZero, kMinus) = st * sp;
        m(kPlus, kMinus) = -ct * sp * sp;
        m(kPlus, kPlus) = ct * sp * cp;
        m(kMinus, kMinus) = -ct * sp * cp;
        break;
    case Coupling::BMinus:
        m(kPlus, kZero) = -st * cp;
        m(kMinus, kZero) = st * sp;
        m(kMinus, kPlus) = -ct * sp * sp;
        m(kPlus, kMinus) = ct * cp * cp;
        m(kPlus, kPlus) = ct * sp * cp;
        m(kMinus, kMinus) = -ct * sp * cp;
        break;
    }
    return m;
}

/// Closed-form component of A at the Bohr frequency of the dressed pair
/// (u, v), in the bare basis. Passing u == v gives the omega = 0 component.
inline Matrix3 closed_form_component(Coupling c, const DressedFrame& frame, int u, int v)
{
    const Matrix3 coeff = dressed_coupling(c, frame.theta, frame.phi);
    Matrix3 dressed = Matrix3::Zero();
    if (u == v) {
        dressed.diagonal() = coeff.diagonal();
    } else {
        dressed(u, v) = coeff(u, v);
    }
    return frame.to_bare(dressed);
}

/// Master equation assembled from first principles: Bohr decomposition of
/// every coupling operator, secular grouping, class-selected flat rates and
/// one Lindblad dissipator per (operator, frequency) pair.
inline Matrix3 spectral_generator(const Matrix3& h, const BathModel& bath, const Matrix3& rho,
                                  double threshold = 1e-9)
{
    const RateTable r = rates(bath);
    const Eigensystem eig = numerical_eigensystem(h);
    Matrix3 out = -kI * commutator(h, rho);
    for (Coupling c : kAllCouplings) {
        double rate = 0.0;
        switch (c) {
        case Coupling::APlus: rate = r.aa_plus; break;
        case Coupling::AMinus: rate = r.aa_minus; break;
        case Coupling::BPlus: rate = r.bb_plus; break;
        case Coupling::BMinus: rate = r.bb_minus; break;
        }
        for (const BohrComponent& comp : spectral_decompose(coupling_operator(c), eig, threshold)) {
            out += rate * lindblad_dissipator(comp.op, rho);
        }
    }
    return out;
}

} // namespace stirap
