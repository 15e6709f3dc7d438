#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "resiqm/classical.hpp"
#include "resiqm/core.hpp"

namespace resiqm {

/// Data of the Weyl transform U(t): frame point, accumulated phase and units.
struct ResidualFrame {
    PhaseSpacePoint c;
    double theta = 0.0;
    SimulationParams params;

    static ResidualFrame from(const TrajectoryState& s, const SimulationParams& params)
    {
        return {s.point, s.theta, params};
    }
};

/// What to do when a shifted evaluation point falls outside the source grid.
enum class OutOfRange { error, zero_fill };

namespace detail {

// Linear interpolation of a sampled function at y. Nodes within 1e-9 of y are
// taken verbatim, so grid-aligned shifts introduce no interpolation error.
inline cplx interpolate(const WaveFunction& f, double y, OutOfRange policy)
{
    const auto& g = f.grid();
    const double s = (y - g.x_min()) / g.dx();
    const double last = static_cast<double>(g.size() - 1);
    constexpr double snap = 1e-9;
    if (s < -snap || s > last + snap) {
        if (policy == OutOfRange::zero_fill) return {0.0, 0.0};
        throw ValidationError("", "transform out of range");
    }
    const double nearest = std::round(s);
    if (std::abs(s - nearest) <= snap) return f[static_cast<std::size_t>(std::clamp(nearest, 0.0, last))];
    const auto i = static_cast<std::size_t>(std::floor(s));
    const double w = s - static_cast<double>(i);
    return (1.0 - w) * f[i] + w * f[i + 1];
}

inline cplx unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

}  // namespace detail

/**
 * Phi(x) = e^{i theta} e^{-(i/hbar) p (x + q/2)} psi(x + q), sampled on the
 * given residual grid.
 */
inline WaveFunction forward_weyl(const WaveFunction& psi, const ResidualFrame& frame, const GridSpec& residual_grid,
                                 OutOfRange policy = OutOfRange::error)
{
    const auto [q, p] = frame.c;
    const double hbar = frame.params.hbar;
    std::vector<cplx> out(residual_grid.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double x = residual_grid.x(i);
        out[i] = detail::unit_phase(frame.theta - p * (x + 0.5 * q) / hbar) *
                 detail::interpolate(psi, x + q, policy);
    }
    return WaveFunction(residual_grid, std::move(out));
}

/// Forward transform onto the co-moving grid [x_min - q, x_max - q]; no interpolation.
inline WaveFunction forward_weyl(const WaveFunction& psi, const ResidualFrame& frame)
{
    const auto& g = psi.grid();
    const GridSpec residual(g.x_min() - frame.c.q, g.x_max() - frame.c.q, g.size());
    const auto [q, p] = frame.c;
    std::vector<cplx> out(g.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = detail::unit_phase(frame.theta - p * (residual.x(i) + 0.5 * q) / frame.params.hbar) * psi[i];
    }
    return WaveFunction(residual, std::move(out));
}

/// psi(y) = e^{-i theta} e^{(i/hbar) p (y - q/2)} Phi(y - q) on a fixed target grid.
inline WaveFunction inverse_weyl(const WaveFunction& phi, const ResidualFrame& frame, const GridSpec& target_grid,
                                 OutOfRange policy = OutOfRange::error)
{
    const auto [q, p] = frame.c;
    const double hbar = frame.params.hbar;
    std::vector<cplx> out(target_grid.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double y = target_grid.x(i);
        out[i] = detail::unit_phase(-frame.theta + p * (y - 0.5 * q) / hbar) *
                 detail::interpolate(phi, y - q, policy);
    }
    return WaveFunction(target_grid, std::move(out));
}

/// Inverse transform onto the moving grid [x_min + q, x_max + q]; no interpolation.
inline WaveFunction inverse_weyl(const WaveFunction& phi, const ResidualFrame& frame)
{
    const auto& g = phi.grid();
    const GridSpec moving(g.x_min() + frame.c.q, g.x_max() + frame.c.q, g.size());
    const auto [q, p] = frame.c;
    std::vector<cplx> out(g.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = detail::unit_phase(-frame.theta + p * (moving.x(i) - 0.5 * q) / frame.params.hbar) * phi[i];
    }
    return WaveFunction(moving, std::move(out));
}

/// Frame phase that maps the free plane wave of momentum p onto the constant 1.
inline double scattering_phase(double p, double t, const SimulationParams& params)
{
    return p * p / (2.0 * params.mass * params.hbar) * t;
}

}  // namespace resiqm
