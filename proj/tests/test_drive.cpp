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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "stirap/drive.hpp"

namespace stirap {
namespace {

constexpr double kPi = std::numbers::pi;

PulseSchedule schedule(Sequence seq)
{
    PulseSchedule s;
    s.sequence = seq;
    return s;
}

TEST(Pulses, PeakAtCentre)
{
    const PulseSchedule s = schedule(Sequence::Counterintuitive);
    EXPECT_DOUBLE_EQ(gaussian_pulse(0.5 * s.tau, s, false), 0.5 * s.omega0);
    EXPECT_DOUBLE_EQ(gaussian_pulse(-0.5 * s.tau, s, true), 0.5 * s.omega0);
}

TEST(Pulses, ValueAtOrigin)
{
    const PulseSchedule s = schedule(Sequence::Counterintuitive);
    const PulseAmplitudes a = pulse_amplitudes(0.0, s);
    EXPECT_NEAR(a.pump, 12.5 * std::exp(-0.5625), 1e-14);
    EXPECT_NEAR(a.stokes, 12.5 * std::exp(-0.5625), 1e-14);
    EXPECT_NEAR(a.pump, 7.12229, 1e-5);
}

TEST(Pulses, ReflectionSymmetry)
{
    const PulseSchedule s = schedule(Sequence::Counterintuitive);
    for (double t = -6.0; t <= 6.0; t += 0.37) {
        EXPECT_DOUBLE_EQ(gaussian_pulse(t, s, false), gaussian_pulse(-t, s, true));
    }
}

TEST(Pulses, SequenceOrder)
{
    const PulseAmplitudes ci = pulse_amplitudes(-1.0, schedule(Sequence::Counterintuitive));
    const PulseAmplitudes in = pulse_amplitudes(-1.0, schedule(Sequence::Intuitive));
    EXPECT_GT(ci.stokes, ci.pump);
    EXPECT_GT(in.pump, in.stokes);
    EXPECT_DOUBLE_EQ(ci.pump, in.stokes);
}

TEST(MixingAngles, Examples)
{
    const MixingAngles a = mixing_angles(3.0, 4.0, 1.0);
    EXPECT_NEAR(a.theta, std::atan(0.75), 1e-15);
    EXPECT_NEAR(a.theta, 0.643501, 1e-6);
    EXPECT_DOUBLE_EQ(a.rabi, 5.0);
    EXPECT_NEAR(a.phi, 0.5 * std::atan(10.0), 1e-15);
    EXPECT_NEAR(a.phi, 0.735564, 1e-6);

    EXPECT_DOUBLE_EQ(mixing_angles(2.0, 2.0, 1.0).theta, kPi / 4.0);
    EXPECT_NEAR(mixing_angles(2.0, 2.0, 1e-12).phi, kPi / 4.0, 1e-12);
    EXPECT_DOUBLE_EQ(mixing_angles(2.0, 2.0, 0.0).phi, kPi / 4.0);
}

TEST(MixingAngles, Errors)
{
    EXPECT_THROW(mixing_angles(0.0, 0.0, 1.0), std::domain_error);
    EXPECT_THROW(mixing_angles(-1.0, 1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(mixing_angles(1.0, 1.0, -1.0), std::invalid_argument);
    EXPECT_THROW(mixing_angles(std::numeric_limits<double>::quiet_NaN(), 1.0, 1.0),
                 std::invalid_argument);
}

TEST(Hamiltonian, Examples)
{
    Matrix3 expect = Matrix3::Zero();
    expect(1, 1) = 1.0;
    EXPECT_EQ(hamiltonian(PulseAmplitudes{0.0, 0.0}, 1.0), expect);

    expect << 0, 3, 0, 3, 1, 4, 0, 4, 0;
    EXPECT_EQ(hamiltonian(PulseAmplitudes{3.0, 4.0}, 1.0), expect);

    for (Sequence seq : {Sequence::Counterintuitive, Sequence::Intuitive}) {
        const PulseSchedule s = schedule(seq);
        for (double t = -6.0; t <= 6.0; t += 0.5) {
            EXPECT_DOUBLE_EQ(hamiltonian(t, s).trace().real(), s.delta);
        }
    }
}

TEST(DressedFrame, PumpOffDarkStateIsLevelOne)
{
    const MixingAngles a = mixing_angles(0.0, 4.0, 1.0);
    const DressedFrame f = dressed_frame(a.theta, a.phi, a.rabi, 1.0);
    EXPECT_LE((f.zero - Ket(1.0, 0.0, 0.0)).norm(), 1e-15);
}

TEST(DressedFrame, ResonantSplitting)
{
    const double rabi = 25.0 / std::sqrt(2.0);
    const DressedFrame f = dressed_frame(kPi / 4.0, kPi / 4.0, rabi, 0.0);
    EXPECT_NEAR(f.omega_plus, rabi, 1e-13);
    EXPECT_NEAR(f.omega_minus, -rabi, 1e-13);
    EXPECT_EQ(f.omega_zero, 0.0);
}

TEST(DressedFrame, MatchesNumericalDiagonalization)
{
    const MixingAngles a = mixing_angles(3.0, 4.0, 1.0);
    const DressedFrame f = dressed_frame(a.theta, a.phi, a.rabi, 1.0);
    Eigen::SelfAdjointEigenSolver<Matrix3> solver(hamiltonian(PulseAmplitudes{3.0, 4.0}, 1.0));
    // Ascending order: minus, zero, plus.
    EXPECT_NEAR(solver.eigenvalues()(0), f.omega_minus, 1e-10);
    EXPECT_NEAR(solver.eigenvalues()(1), f.omega_zero, 1e-10);
    EXPECT_NEAR(solver.eigenvalues()(2), f.omega_plus, 1e-10);
    EXPECT_NEAR(f.omega_plus, a.rabi / std::tan(a.phi), 1e-12);
    EXPECT_NEAR(f.omega_minus, -a.rabi * std::tan(a.phi), 1e-12);
}

TEST(DressedFrame, InvariantsAtRandomTimes)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> time(-6.0, 6.0);
    for (Sequence seq : {Sequence::Counterintuitive, Sequence::Intuitive}) {
        const PulseSchedule s = schedule(seq);
        for (int i = 0; i < 100; ++i) {
            const double t = time(rng);
            const DressedFrame f = dressed_frame(t, s);
            const Matrix3 h = hamiltonian(t, s);

            EXPECT_GE(f.theta, 0.0);
            EXPECT_LE(f.theta, kPi / 2.0);
            EXPECT_GT(f.phi, 0.0);
            EXPECT_LT(f.phi, kPi / 2.0);
            EXPECT_GE(f.omega_plus, 0.0);
            EXPECT_LE(f.omega_minus, 0.0);

            const Matrix3 u = f.basis();
            EXPECT_LE((u.adjoint() * u - Matrix3::Identity()).cwiseAbs().maxCoeff(), 1e-12);
            EXPECT_LE(eigen_residual(f, h), 1e-10);

            Matrix3 rebuilt = Matrix3::Zero();
            const auto w = f.eigenvalues();
            for (int v = 0; v < 3; ++v) {
                rebuilt += w[v] * u.col(v) * u.col(v).adjoint();
            }
            EXPECT_LE((rebuilt - h).cwiseAbs().maxCoeff(), 1e-10);
        }
    }
}

TEST(DressedFrame, AsymptoticAlignmentCounterintuitive)
{
    const PulseSchedule s = schedule(Sequence::Counterintuitive);
    EXPECT_GE(std::norm(dressed_frame(-6.0, s).zero(0)), 1.0 - 1e-6);
    EXPECT_GE(std::norm(dressed_frame(6.0, s).zero(2)), 1.0 - 1e-6);
}

TEST(DressedFrame, AsymptoticAlignmentIntuitive)
{
    const PulseSchedule s = schedule(Sequence::Intuitive);
    EXPECT_GE(std::norm(dressed_frame(-6.0, s).minus(0)), 1.0 - 1e-6);
    EXPECT_GE(std::norm(dressed_frame(6.0, s).minus(2)), 1.0 - 1e-6);
}

TEST(MixingTheta, LogRatioIdentity)
{
    // Reference theta = atan(exp(+-2 t tau / T^2)) in extended precision.
    for (Sequence seq : {Sequence::Counterintuitive, Sequence::Intuitive}) {
        const PulseSchedule s = schedule(seq);
        const long double sign = seq == Sequence::Counterintuitive ? 1.0L : -1.0L;
        for (double t = -40.0; t <= 40.0; t += 0.25) {
            const long double x = sign * 2.0L * t * static_cast<long double>(s.tau);
            const long double expected = std::atan(std::exp(x));
            const double theta = mixing_theta(t, s);
            EXPECT_LE(std::abs(static_cast<long double>(theta) - expected),
                      1e-12L * expected)
                << "t=" << t;
        }
    }
}

TEST(MixingTheta, AgreesWithAmplitudeRatioInTheBulk)
{
    const PulseSchedule s = schedule(Sequence::Counterintuitive);
    for (double t = -3.0; t <= 3.0; t += 0.1) {
        const PulseAmplitudes a = pulse_amplitudes(t, s);
        EXPECT_NEAR(mixing_theta(t, s), mixing_angles(a.pump, a.stokes, s.delta).theta, 1e-13);
    }
}

TEST(MixingTheta, FiniteWhereGaussiansUnderflow)
{
    const PulseSchedule s = schedule(Sequence::Counterintuitive);
    const PulseAmplitudes a = pulse_amplitudes(40.0, s);
    EXPECT_EQ(a.pump, 0.0);
    EXPECT_EQ(a.stokes, 0.0);
    EXPECT_DOUBLE_EQ(mixing_theta(40.0, s), kPi / 2.0);
    EXPECT_NEAR(mixing_theta(-40.0, s), std::exp(-120.0), 1e-12 * std::exp(-120.0));
    EXPECT_NO_THROW(dressed_frame(40.0, s));
}

TEST(PulseSchedule, Validation)
{
    PulseSchedule s;
    EXPECT_NO_THROW(s.validate());
    s.omega0 = 0.0;
    EXPECT_NO_THROW(s.validate());

    auto rejects = [](auto mutate) {
        PulseSchedule bad;
        mutate(bad);
        EXPECT_THROW(bad.validate(), std::invalid_argument);
    };
    rejects([](PulseSchedule& p) { p.omega0 = -1.0; });
    rejects([](PulseSchedule& p) { p.omega0 = std::numeric_limits<double>::infinity(); });
    rejects([](PulseSchedule& p) { p.width = 0.0; });
    rejects([](PulseSchedule& p) { p.tau = std::numeric_limits<double>::quiet_NaN(); });
    rejects([](PulseSchedule& p) { p.delta = -0.5; });
    rejects([](PulseSchedule& p) {
        p.sequence = Sequence::Intuitive;
        p.delta = 0.0;
    });
}

} // namespace
} // namespace stirap
