#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "resiqm/classical.hpp"

using namespace resiqm;
using namespace resiqm::potentials;

TEST(SymplecticEuler, KickThenDrift)
{
    const Potential pot = Harmonic{1.0, 1.0};
    const auto s = symplectic_euler_step({{1.0, 0.0}, 0.0, 0.0}, 0.1, pot, {1.0, 2.0});
    EXPECT_DOUBLE_EQ(s.point.p, -0.1);
    EXPECT_DOUBLE_EQ(s.point.q, 1.0 - 0.1 / 2.0 * 0.1);
    EXPECT_DOUBLE_EQ(s.time, 0.1);
    EXPECT_EQ(s.theta, 0.0);
}

TEST(SymplecticEuler, FreeParticleIsExact)
{
    auto traj = propagate({{0.0, 1.5}, 0.0, 0.0}, 0.01, 100, Free{}, {1.0, 3.0});
    ASSERT_EQ(traj.size(), 101u);
    EXPECT_NEAR(traj.back().point.q, 0.5, 1e-13);
    EXPECT_EQ(traj.back().point.p, 1.5);
}

TEST(SymplecticEuler, HarmonicEnergyOscillationBound)
{
    const Potential pot = Harmonic{1.0, 1.0};
    const SimulationParams params{0.001, 1.0};
    const double dt = 2.0 * pi / 10000.0;
    const auto traj = propagate({{0.6, 0.0}, 0.0, 0.0}, dt, 10000, pot, params);
    const double e0 = classical_energy(pot, traj.front().point, params);
    for (const auto& s : traj) EXPECT_LE(std::abs(classical_energy(pot, s.point, params) - e0), 2.0 * dt * e0);
}

TEST(SymplecticEuler, HarmonicReturnsAfterOnePeriod)
{
    const double dt = 2.0 * pi / 100000.0;
    const auto traj = propagate({{0.6, 0.0}, 0.0, 0.0}, dt, 100000, Harmonic{1.0, 1.0}, {1.0, 1.0});
    EXPECT_NEAR(traj.back().point.q, 0.6, 1e-4);
    EXPECT_NEAR(traj.back().point.p, 0.0, 1e-4);
}

TEST(SymplecticEuler, ThetaIsTrapezoidOfActionDensity)
{
    const Potential pot = Quartic{};
    const SimulationParams params{0.01, 1.0};
    const TrajectoryState s0{{0.3, 0.2}, 0.0, 0.5};
    const auto s1 = symplectic_euler_step(s0, 0.05, pot, params);
    const double expect = 0.5 + 0.05 / 0.01 * 0.5 * (action_density(pot, 0.3) + action_density(pot, s1.point.q));
    EXPECT_DOUBLE_EQ(s1.theta, expect);
}

TEST(ClassicalProperty, TimeReversal)
{
    // Symplectic Euler's adjoint is drift-then-kick; undoing a step exactly
    // requires stepping backwards through that adjoint.
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    const Potential pot = Morse{0.0025, 1.0};
    const SimulationParams params{0.001, 1.0};
    for (int k = 0; k < 50; ++k) {
        const TrajectoryState s0{{u(rng), u(rng) * 0.05}, 0.0, 0.0};
        const double dt = 0.01;
        const auto s1 = symplectic_euler_step(s0, dt, pot, params);
        const double q_back = s1.point.q - s1.point.p * dt;
        const double p_back = s1.point.p + dt * evaluate(pot, q_back, 1);
        EXPECT_NEAR(q_back, s0.point.q, 1e-15);
        EXPECT_NEAR(p_back, s0.point.p, 1e-15);
    }
}

TEST(ClassicalProperty, PhaseSpaceAreaPreserved)
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    const Potential pot = BarrierHarmonic{0.25, 0.01};
    const SimulationParams params{0.001, 1.0};
    for (int k = 0; k < 30; ++k) {
        const PhaseSpacePoint c{u(rng), u(rng)};
        const double h = 1e-6, dt = 0.003;
        auto step = [&](PhaseSpacePoint x) { return symplectic_euler_step({x, 0.0, 0.0}, dt, pot, params).point; };
        const auto a = step(c);
        const auto bq = step({c.q + h, c.p});
        const auto bp = step({c.q, c.p + h});
        const double det = ((bq.q - a.q) * (bp.p - a.p) - (bq.p - a.p) * (bp.q - a.q)) / (h * h);
        EXPECT_NEAR(det, 1.0, 1e-5);
    }
}
