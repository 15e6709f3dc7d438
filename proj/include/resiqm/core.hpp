#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "resiqm/error.hpp"

namespace resiqm {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

/**
 * Uniform 1-D grid with inclusive endpoints.
 *
 * Node i sits at x_min + i * dx with dx = (x_max - x_min) / (n_points - 1).
 */
class GridSpec {
public:
    GridSpec(double x_min, double x_max, std::size_t n_points)
        : x_min_(x_min), x_max_(x_max), n_points_(n_points)
    {
        if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
            throw ValidationError("grid", "x_max must be greater than x_min");
        }
        if (n_points < 3) {
            throw ValidationError("grid", "n_points must be at least 3");
        }
    }

    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    std::size_t size() const noexcept { return n_points_; }
    double dx() const noexcept { return (x_max_ - x_min_) / static_cast<double>(n_points_ - 1); }
    double x(std::size_t i) const noexcept
    {
        return i + 1 == n_points_ ? x_max_ : x_min_ + static_cast<double>(i) * dx();
    }

    std::vector<double> nodes() const
    {
        std::vector<double> out(n_points_);
        for (std::size_t i = 0; i < n_points_; ++i) out[i] = x(i);
        return out;
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    double x_min_;
    double x_max_;
    std::size_t n_points_;
};

/// Complex amplitudes sampled on a GridSpec. Never auto-normalized.
class WaveFunction {
public:
    WaveFunction(GridSpec grid, std::vector<cplx> values)
        : grid_(grid), values_(std::move(values))
    {
        if (values_.size() != grid_.size()) {
            throw ValidationError("wave_function", "values length does not match grid size");
        }
        for (const auto& v : values_) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                throw NumericalError("non-finite amplitude in wave function");
            }
        }
    }

    /// Sample a callable f(x) -> complex on every grid node.
    template <class F>
    static WaveFunction sample(const GridSpec& grid, F&& f)
    {
        std::vector<cplx> values(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) values[i] = cplx(f(grid.x(i)));
        return WaveFunction(grid, std::move(values));
    }

    const GridSpec& grid() const noexcept { return grid_; }
    std::span<const cplx> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    const cplx& operator[](std::size_t i) const noexcept { return values_[i]; }

private:
    GridSpec grid_;
    std::vector<cplx> values_;
};

struct SimulationParams {
    double hbar = 1.0;
    double mass = 1.0;

    void validate() const
    {
        if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ValidationError("params.hbar", "must be > 0");
        if (!(mass > 0.0) || !std::isfinite(mass)) throw ValidationError("params.mass", "must be > 0");
    }
};

struct PhaseSpacePoint {
    double q = 0.0;
    double p = 0.0;
};

namespace detail {

inline void require_same_grid(const WaveFunction& a, const WaveFunction& b)
{
    if (!(a.grid() == b.grid())) throw ValidationError("", "incompatible grids");
}

// Trapezoid weight of node i (in units of dx).
inline double trapezoid_weight(std::size_t i, std::size_t n) noexcept
{
    return (i == 0 || i + 1 == n) ? 0.5 : 1.0;
}

inline cplx weighted_inner(const GridSpec& grid, std::span<const cplx> a, std::span<const cplx> b)
{
    const std::size_t n = grid.size();
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) acc += trapezoid_weight(i, n) * std::conj(a[i]) * b[i];
    return acc * grid.dx();
}

// Central first derivative, first-order one-sided at both ends.
inline std::vector<cplx> first_derivative(const GridSpec& grid, std::span<const cplx> a)
{
    const std::size_t n = grid.size();
    const double dx = grid.dx();
    std::vector<cplx> d(n);
    d[0] = (a[1] - a[0]) / dx;
    d[n - 1] = (a[n - 1] - a[n - 2]) / dx;
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (a[i + 1] - a[i - 1]) / (2.0 * dx);
    return d;
}

inline double norm_squared_or_throw(const WaveFunction& a)
{
    const double n2 = weighted_inner(a.grid(), a.values(), a.values()).real();
    if (!(n2 > 0.0)) throw ValidationError("", "null wave function");
    return n2;
}

}  // namespace detail

/// Trapezoid approximation of the integral of conj(a) * b.
inline cplx inner_product(const WaveFunction& a, const WaveFunction& b)
{
    detail::require_same_grid(a, b);
    return detail::weighted_inner(a.grid(), a.values(), b.values());
}

inline double norm(const WaveFunction& a)
{
    return std::sqrt(detail::weighted_inner(a.grid(), a.values(), a.values()).real());
}

/// <x> = <a|x a> / |a|^2.
inline double expectation_position(const WaveFunction& a)
{
    const double n2 = detail::norm_squared_or_throw(a);
    const auto& g = a.grid();
    std::vector<cplx> xa(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) xa[i] = g.x(i) * a[i];
    return detail::weighted_inner(g, a.values(), xa).real() / n2;
}

/// <p> = Re <a|(hbar/i) D a> / |a|^2 with the central-difference D.
inline double expectation_momentum(const WaveFunction& a, const SimulationParams& params)
{
    const double n2 = detail::norm_squared_or_throw(a);
    auto d = detail::first_derivative(a.grid(), a.values());
    const cplx factor(0.0, -params.hbar);
    for (auto& v : d) v *= factor;
    return detail::weighted_inner(a.grid(), a.values(), d).real() / n2;
}

struct ObservablePair {
    double q = 0.0;
    double p = 0.0;
};

/**
 * Lab-frame position and momentum expectations from a residual wave function.
 *
 * Exact for linear observables: <q>_psi = c.q + <x>_phi, <p>_psi = c.p + <p>_phi.
 */
inline ObservablePair residual_observables(const WaveFunction& phi, const PhaseSpacePoint& c,
                                           const SimulationParams& params)
{
    return {c.q + expectation_position(phi), c.p + expectation_momentum(phi, params)};
}

/// Relative L2 distance |a - b| / |b| on a common grid.
inline double relative_l2_distance(const WaveFunction& a, const WaveFunction& b)
{
    detail::require_same_grid(a, b);
    std::vector<cplx> diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
    const double num = std::sqrt(detail::weighted_inner(a.grid(), diff, diff).real());
    return num / norm(b);
}

}  // namespace resiqm
