#pragma once

#include <cstddef>
#include <vector>

#include "resiqm/core.hpp"
#include "resiqm/potential.hpp"

namespace resiqm {

/// Classical phase-space state plus the accumulated Weyl phase theta.
struct TrajectoryState {
    PhaseSpacePoint point;
    double time = 0.0;
    /// (1/hbar) * integral of V(q) - q V'(q)/2 along the trajectory.
    double theta = 0.0;
};

/**
 * One symplectic Euler step: momentum kick with the old force, then drift with
 * the new momentum. Theta is advanced with the trapezoid rule.
 */
inline TrajectoryState symplectic_euler_step(const TrajectoryState& s, double dt, const Potential& pot,
                                             const SimulationParams& params)
{
    TrajectoryState next = s;
    next.point.p = s.point.p - dt * evaluate(pot, s.point.q, 1);
    next.point.q = s.point.q + next.point.p / params.mass * dt;
    next.time = s.time + dt;
    next.theta = s.theta + dt / params.hbar * 0.5 *
                               (action_density(pot, s.point.q) + action_density(pot, next.point.q));
    return next;
}

/// n_steps + 1 states, starting with s0.
inline std::vector<TrajectoryState> propagate(const TrajectoryState& s0, double dt, std::size_t n_steps,
                                              const Potential& pot, const SimulationParams& params)
{
    std::vector<TrajectoryState> out;
    out.reserve(n_steps + 1);
    out.push_back(s0);
    for (std::size_t i = 0; i < n_steps; ++i) out.push_back(symplectic_euler_step(out.back(), dt, pot, params));
    return out;
}

}  // namespace resiqm
