#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "resiqm/core.hpp"
#include "resiqm/potential.hpp"
#include "resiqm/tridiagonal.hpp"

namespace resiqm {

enum class BoundaryCondition { dirichlet_zero, neumann };

namespace detail {

/**
 * Three-point discretization of
 *   H u = -kinetic * u'' + drift(x) * u' + potential(x) * u
 * with the boundary rows closed by the given condition. Neumann uses mirror
 * ghost nodes (u[-1] = u[1]); Dirichlet rows are left as-is and replaced by
 * the stepper.
 */
inline TridiagonalOperator stencil_operator(const GridSpec& grid, double kinetic, std::span<const cplx> drift,
                                            std::span<const double> potential, BoundaryCondition bc)
{
    const std::size_t n = grid.size();
    const double dx = grid.dx();
    const double off = -kinetic / (dx * dx);
    TridiagonalOperator op(n);
    cplx ghost_left{0.0, 0.0};
    cplx ghost_right{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const cplx d1 = drift.empty() ? cplx{} : drift[i] / (2.0 * dx);
        op.diagonal[i] = -2.0 * off + potential[i];
        const cplx lo = off - d1;
        const cplx up = off + d1;
        if (i > 0) op.lower[i - 1] = lo; else ghost_left = lo;
        if (i + 1 < n) op.upper[i] = up; else ghost_right = up;
    }
    if (bc == BoundaryCondition::neumann) {
        op.upper[0] += ghost_left;
        op.lower[n - 2] += ghost_right;
    }
    return op;
}

/**
 * Crank-Nicolson step (1 + s H_new) u_new = (1 - s H_old) u_old with s = i*scale.
 * Dirichlet-zero pins both endpoints to zero on both sides of the equation.
 */
inline std::vector<cplx> crank_nicolson(std::span<const cplx> u, const TridiagonalOperator& h_old,
                                        const TridiagonalOperator& h_new, double scale, BoundaryCondition bc)
{
    const std::size_t n = u.size();
    const cplx s{0.0, scale};
    std::vector<cplx> source(u.begin(), u.end());
    if (bc == BoundaryCondition::dirichlet_zero) {
        source.front() = 0.0;
        source.back() = 0.0;
    }
    std::vector<cplx> rhs = h_old.apply(source);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = source[i] - s * rhs[i];

    TridiagonalOperator lhs(n);
    for (std::size_t i = 0; i < n; ++i) lhs.diagonal[i] = 1.0 + s * h_new.diagonal[i];
    for (std::size_t i = 0; i + 1 < n; ++i) {
        lhs.lower[i] = s * h_new.lower[i];
        lhs.upper[i] = s * h_new.upper[i];
    }
    if (bc == BoundaryCondition::dirichlet_zero) {
        lhs.diagonal.front() = 1.0;
        lhs.upper.front() = 0.0;
        lhs.diagonal.back() = 1.0;
        lhs.lower.back() = 0.0;
        rhs.front() = 0.0;
        rhs.back() = 0.0;
    }
    return thomas_solve(lhs, rhs);
}

inline void require_positive_dt(double dt)
{
    if (!(dt > 0.0)) throw ValidationError("dt", "must be > 0");
}

}  // namespace detail

/// Lab-frame Hamiltonian -(hbar^2/2m) d^2/dx^2 + V(x) on the grid.
inline TridiagonalOperator schroedinger_operator(const GridSpec& grid, const Potential& pot,
                                                 const SimulationParams& params, BoundaryCondition bc)
{
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = evaluate(pot, grid.x(i), 0);
    return detail::stencil_operator(grid, params.hbar * params.hbar / (2.0 * params.mass), {}, v, bc);
}

/// Residual Hamiltonian T + V_eff(q, x) for a frame at position q.
inline TridiagonalOperator residual_operator(const GridSpec& grid, const Potential& pot, double q,
                                             const SimulationParams& params, BoundaryCondition bc)
{
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = effective_potential(pot, q, grid.x(i));
    return detail::stencil_operator(grid, params.hbar * params.hbar / (2.0 * params.mass), {}, v, bc);
}

/// Standard Schroedinger Crank-Nicolson step with a static potential.
inline WaveFunction cn_step_schroedinger(const WaveFunction& psi, const Potential& pot, double dt,
                                         const SimulationParams& params, BoundaryCondition bc)
{
    detail::require_positive_dt(dt);
    const auto h = schroedinger_operator(psi.grid(), pot, params, bc);
    return WaveFunction(psi.grid(), detail::crank_nicolson(psi.values(), h, h, dt / (2.0 * params.hbar), bc));
}

/// Residual Crank-Nicolson step; V_n and V_{n+1} come from the frame positions at either end.
inline WaveFunction cn_step_residual(const WaveFunction& phi, const PhaseSpacePoint& c_n,
                                     const PhaseSpacePoint& c_np1, const Potential& pot, double dt,
                                     const SimulationParams& params, BoundaryCondition bc)
{
    detail::require_positive_dt(dt);
    const auto h_old = residual_operator(phi.grid(), pot, c_n.q, params, bc);
    const auto h_new = residual_operator(phi.grid(), pot, c_np1.q, params, bc);
    return WaveFunction(phi.grid(),
                        detail::crank_nicolson(phi.values(), h_old, h_new, dt / (2.0 * params.hbar), bc));
}

/// Time derivative (qdot, pdot) of an arbitrary frame trajectory.
struct PhaseSpaceVelocity {
    double q_dot = 0.0;
    double p_dot = 0.0;
};

/// Velocity of the Hamiltonian flow at c.
inline PhaseSpaceVelocity hamiltonian_velocity(const PhaseSpacePoint& c, const Potential& pot,
                                               const SimulationParams& params)
{
    return {c.p / params.mass, -evaluate(pot, c.q, 1)};
}

/// Frame position and velocity at one end of a time step.
struct FrameSample {
    PhaseSpacePoint c;
    PhaseSpaceVelocity c_dot;
};

/**
 * Residual Hamiltonian for an arbitrary frame trajectory:
 *   T + (hbar/i)(p/m - qdot) d/dx + (V'(q) + pdot) x + V_eff(q, x) + offset.
 *
 * The constant offset is H(c) + (q pdot - p qdot)/2 - frame_energy, the part
 * of the zeroth-order term not absorbed by the frame phase (frame_energy is
 * hbar times the rate of theta). Without frame_energy the offset is zero,
 * which is the convention of the Hamiltonian-trajectory phase.
 */
inline TridiagonalOperator general_residual_operator(const GridSpec& grid, const FrameSample& frame,
                                                     const Potential& pot, const SimulationParams& params,
                                                     BoundaryCondition bc,
                                                     std::optional<double> frame_energy = std::nullopt)
{
    const auto& c = frame.c;
    const auto& v = frame.c_dot;
    const double force_mismatch = evaluate(pot, c.q, 1) + v.p_dot;
    const cplx drift = cplx{0.0, -params.hbar} * (c.p / params.mass - v.q_dot);
    double offset = 0.0;
    if (frame_energy) {
        offset = classical_energy(pot, c, params) + 0.5 * (c.q * v.p_dot - c.p * v.q_dot) - *frame_energy;
    }
    std::vector<double> pot_values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.x(i);
        pot_values[i] = effective_potential(pot, c.q, x) + force_mismatch * x + offset;
    }
    std::vector<cplx> drift_values(grid.size(), drift);
    return detail::stencil_operator(grid, params.hbar * params.hbar / (2.0 * params.mass), drift_values,
                                    pot_values, bc);
}

/// General residual Crank-Nicolson step with distinct frame samples at t_n and t_{n+1}.
inline WaveFunction cn_step_general_residual(const WaveFunction& phi, const FrameSample& at_n,
                                             const FrameSample& at_np1, const Potential& pot, double dt,
                                             const SimulationParams& params, BoundaryCondition bc,
                                             std::optional<double> frame_energy = std::nullopt)
{
    detail::require_positive_dt(dt);
    const auto h_old = general_residual_operator(phi.grid(), at_n, pot, params, bc, frame_energy);
    const auto h_new = general_residual_operator(phi.grid(), at_np1, pot, params, bc, frame_energy);
    return WaveFunction(phi.grid(),
                        detail::crank_nicolson(phi.values(), h_old, h_new, dt / (2.0 * params.hbar), bc));
}

/// Same frame on both sides of the step (constant trajectories).
inline WaveFunction cn_step_general_residual(const WaveFunction& phi, const PhaseSpacePoint& c,
                                             const PhaseSpaceVelocity& c_dot, const Potential& pot, double dt,
                                             const SimulationParams& params, BoundaryCondition bc,
                                             std::optional<double> frame_energy = std::nullopt)
{
    const FrameSample s{c, c_dot};
    return cn_step_general_residual(phi, s, s, pot, dt, params, bc, frame_energy);
}

/// <u|H u> / |u|^2 for a tridiagonal H in the trapezoid inner product.
inline double expectation_operator(const WaveFunction& u, const TridiagonalOperator& h)
{
    const double n2 = detail::norm_squared_or_throw(u);
    const auto hu = h.apply(u.values());
    return detail::weighted_inner(u.grid(), u.values(), hu).real() / n2;
}

}  // namespace resiqm
