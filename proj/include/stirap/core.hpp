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
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace stirap {

using Complex = std::complex<double>;
using Matrix3 = Eigen::Matrix3cd;
using Ket = Eigen::Vector3cd;

inline constexpr Complex kI{0.0, 1.0};

/// Tolerances used when deciding whether a density matrix is physical.
inline constexpr double kHermiticityTol = 1e-12;
inline constexpr double kTraceTol = 1e-9;
inline constexpr double kPositivityTol = 1e-8;

/// Raised when a numerical invariant breaks (non-finite values, loss of
/// positivity or trace, eigen-residual mismatch).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Basis { BareRotating, Dressed };

inline double hermiticity_error(const Matrix3& m)
{
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline Matrix3 hermitian_part(const Matrix3& m)
{
    return 0.5 * (m + m.adjoint());
}

inline bool all_finite(const Matrix3& m)
{
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        const Complex z = m.data()[i];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            return false;
        }
    }
    return true;
}

inline Matrix3 commutator(const Matrix3& a, const Matrix3& b)
{
    return a * b - b * a;
}

/// L rho L^dag - 1/2 {L^dag L, rho}
inline Matrix3 lindblad_dissipator(const Matrix3& jump, const Matrix3& rho)
{
    const Matrix3 jd = jump.adjoint();
    const Matrix3 jdj = jd * jump;
    return jump * rho * jd - 0.5 * (jdj * rho + rho * jdj);
}

/// Smallest eigenvalue of a Hermitian 3x3 matrix.
inline double min_eigenvalue(const Matrix3& m)
{
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (hermiticity_error(m) > 1e-10 * scale) {
        throw std::invalid_argument("min_eigenvalue: matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Matrix3> solver(hermitian_part(m),
                                                  Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

/// 3x3 density matrix of the Lambda system. The stored matrix is always
/// exactly Hermitian; trace and positivity are checked on demand.
class DensityMatrix {
public:
    explicit DensityMatrix(const Matrix3& elements,
                           Basis basis = Basis::BareRotating)
        : basis_(basis)
    {
        if (!all_finite(elements)) {
            throw NumericalError("DensityMatrix: non-finite elements");
        }
        const double scale = std::max(1.0, elements.cwiseAbs().maxCoeff());
        if (hermiticity_error(elements) > 1e-8 * scale) {
            throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
        }
        elements_ = hermitian_part(elements);
    }

    const Matrix3& elements() const { return elements_; }
    Basis basis() const { return basis_; }

    Complex operator()(int row, int col) const { return elements_(row, col); }

    double trace_error() const
    {
        return std::abs(elements_.trace() - Complex{1.0, 0.0});
    }

    double min_eigenvalue() const { return stirap::min_eigenvalue(elements_); }

    bool is_physical() const
    {
        return trace_error() <= kTraceTol && min_eigenvalue() >= -kPositivityTol;
    }

private:
    Matrix3 elements_;
    Basis basis_;
};

inline void check_level(int k)
{
    if (k < 1 || k > 3) {
        throw std::out_of_range("basis index must be 1, 2 or 3, got " +
                                std::to_string(k));
    }
}

/// |k><k| for k in {1, 2, 3}.
inline DensityMatrix pure_state(int k)
{
    check_level(k);
    Matrix3 m = Matrix3::Zero();
    m(k - 1, k - 1) = 1.0;
    return DensityMatrix(m);
}

inline DensityMatrix pure_state(const Ket& psi, Basis basis = Basis::BareRotating)
{
    const double norm = psi.norm();
    if (norm == 0.0 || !std::isfinite(norm)) {
        throw std::invalid_argument("pure_state: ket has zero or non-finite norm");
    }
    const Ket unit = psi / norm;
    return DensityMatrix(unit * unit.adjoint(), basis);
}

/// Real part of rho_kk, clamped to [0, 1].
inline double population(const DensityMatrix& rho, int k)
{
    check_level(k);
    if (rho.trace_error() > kTraceTol) {
        throw std::domain_error("population: density matrix trace deviates from 1");
    }
    const double p = rho(k - 1, k - 1).real();
    if (p < -kPositivityTol || p > 1.0 + kPositivityTol) {
        throw std::domain_error("population: diagonal element outside [0, 1]");
    }
    return std::clamp(p, 0.0, 1.0);
}

/// Columns of `basis` are the new basis kets expressed in the old basis.
inline Matrix3 change_basis(const Matrix3& m, const Matrix3& basis)
{
    return basis.adjoint() * m * basis;
}

inline Matrix3 restore_basis(const Matrix3& m, const Matrix3& basis)
{
    return basis * m * basis.adjoint();
}

} // namespace stirap
