#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "resiqm/core.hpp"
#include "resiqm/potential.hpp"
#include "resiqm/quantum.hpp"

namespace resiqm {

/// Gaussian beam A exp[(i/2) M xi^2] in the scaled variable xi = x / sqrt(hbar).
struct BeamState {
    cplx A{1.0, 0.0};
    cplx M{0.0, 1.0};
    double time = 0.0;

    void check() const
    {
        if (!(M.imag() > 0.0)) throw NumericalError("beam collapse");
        if (A == cplx{0.0, 0.0}) throw NumericalError("beam amplitude vanished");
    }
};

/// Correction factor kappa, sampled on a grid in the scaled variable xi.
struct KappaField {
    WaveFunction samples;

    static KappaField constant(const GridSpec& xi_grid, cplx value = {1.0, 0.0})
    {
        return {WaveFunction(xi_grid, std::vector<cplx>(xi_grid.size(), value))};
    }

    const GridSpec& grid() const noexcept { return samples.grid(); }
};

/**
 * RK4 step of Adot = -A M / (2m), Mdot = -M^2/m - V''(q) with q held fixed
 * for all stages. Callers that want second order in time pass q at the step
 * midpoint.
 */
inline BeamState beam_step(const BeamState& b, double q, double dt, const Potential& pot,
                           const SimulationParams& params)
{
    b.check();
    if (dt < 0.0) throw ValidationError("dt", "must be >= 0");
    if (dt == 0.0) return b;
    const double m = params.mass;
    const double curvature = evaluate(pot, q, 2);
    auto rhs = [&](cplx a, cplx mm) { return std::pair{-a * mm / (2.0 * m), -mm * mm / m - curvature}; };

    const auto [ka1, km1] = rhs(b.A, b.M);
    const auto [ka2, km2] = rhs(b.A + 0.5 * dt * ka1, b.M + 0.5 * dt * km1);
    const auto [ka3, km3] = rhs(b.A + 0.5 * dt * ka2, b.M + 0.5 * dt * km2);
    const auto [ka4, km4] = rhs(b.A + dt * ka3, b.M + dt * km3);

    BeamState next;
    next.A = b.A + dt / 6.0 * (ka1 + 2.0 * ka2 + 2.0 * ka3 + ka4);
    next.M = b.M + dt / 6.0 * (km1 + 2.0 * km2 + 2.0 * km3 + km4);
    next.time = b.time + dt;
    next.check();
    return next;
}

/// W(xi) = (1/hbar) [V(q + sqrt(hbar) xi) - V(q) - sqrt(hbar) xi V'(q) - hbar xi^2 V''(q) / 2].
inline double kappa_tail_potential(const Potential& pot, double q, double xi, const SimulationParams& params)
{
    return taylor_tail(pot, q, std::sqrt(params.hbar) * xi) / params.hbar;
}

/// Tridiagonal form of -(1/2m)[k'' + 2 i M xi k'] + W(xi) k.
inline TridiagonalOperator kappa_operator(const GridSpec& xi_grid, cplx M, double q, const Potential& pot,
                                          const SimulationParams& params, BoundaryCondition bc)
{
    const double m = params.mass;
    std::vector<cplx> drift(xi_grid.size());
    std::vector<double> tail(xi_grid.size());
    for (std::size_t i = 0; i < xi_grid.size(); ++i) {
        const double xi = xi_grid.x(i);
        drift[i] = -cplx{0.0, 1.0} * M * xi / m;
        tail[i] = kappa_tail_potential(pot, q, xi, params);
    }
    return detail::stencil_operator(xi_grid, 1.0 / (2.0 * m), drift, tail, bc);
}

/**
 * Crank-Nicolson step of i dk/dt = -(1/2m)[k'' + 2 i M xi k'] + W k.
 *
 * b is the beam at the start of the step; the drift uses M at the step
 * midpoint, obtained from a half beam step with the same q.
 */
inline KappaField kappa_step(const KappaField& k, const BeamState& b, double q, double dt, const Potential& pot,
                             const SimulationParams& params, BoundaryCondition bc)
{
    detail::require_positive_dt(dt);
    const cplx m_mid = beam_step(b, q, 0.5 * dt, pot, params).M;
    const auto op = kappa_operator(k.grid(), m_mid, q, pot, params, bc);
    return {WaveFunction(k.grid(), detail::crank_nicolson(k.samples.values(), op, op, 0.5 * dt, bc))};
}

/// Phi(x) = A exp[(i/2) M xi^2] kappa(xi) on the x-grid x = sqrt(hbar) xi.
inline WaveFunction assemble_gwpt(const BeamState& b, const KappaField& k, const SimulationParams& params)
{
    const double root = std::sqrt(params.hbar);
    const auto& xg = k.grid();
    const GridSpec x_grid(root * xg.x_min(), root * xg.x_max(), xg.size());
    std::vector<cplx> out(xg.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double xi = xg.x(i);
        out[i] = b.A * std::exp(cplx{0.0, 0.5} * b.M * xi * xi) * k.samples[i];
    }
    return WaveFunction(x_grid, std::move(out));
}

}  // namespace resiqm
