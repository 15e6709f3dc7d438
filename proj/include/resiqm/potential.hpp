#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "resiqm/core.hpp"

namespace resiqm {

namespace potentials {

struct Free {};

/// V(q) = m omega^2 q^2 / 2
struct Harmonic {
    double m = 1.0;
    double omega = 1.0;
};

/// V(q) = q^2/2 + q^4/6
struct Quartic {};

/// V(q) = D (1 - exp(-a q))^2
struct Morse {
    double D = 1.0;
    double a = 1.0;
};

/// V(q) = (1 + q^2/2)(1 + a exp(-q^2 / (2b))) - 1
struct BarrierHarmonic {
    double a = 0.25;
    double b = 0.001;
};

/// V(q) = exp(-1/(1 - q^2)) on |q| < 1, zero outside.
struct CompactBump {};

}  // namespace potentials

class Potential {
public:
    using Variant = std::variant<potentials::Free, potentials::Harmonic, potentials::Quartic,
                                 potentials::Morse, potentials::BarrierHarmonic,
                                 potentials::CompactBump>;

    Potential() = default;

    template <class T>
        requires std::is_constructible_v<Variant, T>
    Potential(T v) : v_(std::move(v))  // NOLINT(google-explicit-constructor)
    {
        validate();
    }

    const Variant& variant() const noexcept { return v_; }

    std::string_view tag() const noexcept
    {
        static constexpr std::string_view names[] = {"free",  "harmonic",         "quartic",
                                                     "morse", "barrier_harmonic", "compact_bump"};
        return names[v_.index()];
    }

    bool is_at_most_quadratic() const noexcept
    {
        return std::holds_alternative<potentials::Free>(v_) ||
               std::holds_alternative<potentials::Harmonic>(v_);
    }

private:
    void validate() const
    {
        auto positive = [](double x, const char* path) {
            if (!(x > 0.0) || !std::isfinite(x)) throw ValidationError(path, "must be > 0");
        };
        if (auto* h = std::get_if<potentials::Harmonic>(&v_)) {
            positive(h->m, "potential.m");
            positive(h->omega, "potential.omega");
        } else if (auto* m = std::get_if<potentials::Morse>(&v_)) {
            positive(m->D, "potential.D");
            positive(m->a, "potential.a");
        } else if (auto* b = std::get_if<potentials::BarrierHarmonic>(&v_)) {
            positive(b->a, "potential.a");
            positive(b->b, "potential.b");
        }
    }

    Variant v_{potentials::Free{}};
};

namespace detail {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct Derivs {
    double v, d1, d2;
};

inline Derivs derivatives(const Potential& pot, double q)
{
    using namespace potentials;
    return std::visit(
        overloaded{
            [](const Free&) { return Derivs{0.0, 0.0, 0.0}; },
            [q](const Harmonic& h) {
                const double k = h.m * h.omega * h.omega;
                return Derivs{0.5 * k * q * q, k * q, k};
            },
            [q](const Quartic&) {
                const double q2 = q * q;
                return Derivs{0.5 * q2 + q2 * q2 / 6.0, q + 2.0 * q2 * q / 3.0, 1.0 + 2.0 * q2};
            },
            [q](const Morse& m) {
                const double e = std::exp(-m.a * q);
                const double s = 1.0 - e;
                return Derivs{m.D * s * s, 2.0 * m.a * m.D * s * e,
                              2.0 * m.a * m.a * m.D * e * (2.0 * e - 1.0)};
            },
            [q](const BarrierHarmonic& bh) {
                const double g = std::exp(-q * q / (2.0 * bh.b));
                const double g1 = -(q / bh.b) * g;
                const double g2 = (q * q / (bh.b * bh.b) - 1.0 / bh.b) * g;
                const double f = 1.0 + 0.5 * q * q;
                const double h = 1.0 + bh.a * g;
                return Derivs{f * h - 1.0, q * h + f * bh.a * g1,
                              h + 2.0 * q * bh.a * g1 + f * bh.a * g2};
            },
            [q](const CompactBump&) {
                const double s = 1.0 - q * q;
                // The closed form overflows before the analytic limit (0) is reached.
                if (s <= 1e-12) return Derivs{0.0, 0.0, 0.0};
                const double v = std::exp(-1.0 / s);
                const double u1 = -2.0 * q / (s * s);
                const double u2 = -2.0 / (s * s) - 8.0 * q * q / (s * s * s);
                return Derivs{v, v * u1, v * (u1 * u1 + u2)};
            },
        },
        pot.variant());
}

}  // namespace detail

/// V(q), V'(q) or V''(q) in closed form.
inline double evaluate(const Potential& pot, double q, int order)
{
    const auto d = detail::derivatives(pot, q);
    switch (order) {
        case 0: return d.v;
        case 1: return d.d1;
        case 2: return d.d2;
        default: throw ValidationError("order", "unsupported derivative order " + std::to_string(order));
    }
}

/**
 * Taylor remainder V(q+x) - V(q) - x V'(q), the potential seen by the residual
 * wave function. Polynomial variants use the expanded form, so the harmonic
 * case is exactly independent of q.
 */
inline double effective_potential(const Potential& pot, double q, double x)
{
    using namespace potentials;
    if (std::holds_alternative<Free>(pot.variant())) return 0.0;
    if (auto* h = std::get_if<Harmonic>(&pot.variant())) return 0.5 * h->m * h->omega * h->omega * x * x;
    if (std::holds_alternative<Quartic>(pot.variant())) {
        const double x2 = x * x;
        return 0.5 * x2 + (6.0 * q * q * x2 + 4.0 * q * x2 * x + x2 * x2) / 6.0;
    }
    const auto at_q = detail::derivatives(pot, q);
    return detail::derivatives(pot, q + x).v - at_q.v - x * at_q.d1;
}

/// V(q+h) - V(q) - h V'(q) - h^2 V''(q) / 2, i.e. the cubic-and-higher tail.
inline double taylor_tail(const Potential& pot, double q, double h)
{
    using namespace potentials;
    if (pot.is_at_most_quadratic()) return 0.0;
    if (std::holds_alternative<Quartic>(pot.variant())) {
        const double h3 = h * h * h;
        return (4.0 * q * h3 + h3 * h) / 6.0;
    }
    const auto at_q = detail::derivatives(pot, q);
    return detail::derivatives(pot, q + h).v - at_q.v - h * at_q.d1 - 0.5 * h * h * at_q.d2;
}

/// H(q, p) = p^2 / 2m + V(q)
inline double classical_energy(const Potential& pot, const PhaseSpacePoint& c, const SimulationParams& params)
{
    return c.p * c.p / (2.0 * params.mass) + detail::derivatives(pot, c.q).v;
}

/// V(q) - q V'(q)/2, the integrand of the Weyl-transform phase along a Hamiltonian trajectory.
inline double action_density(const Potential& pot, double q)
{
    if (pot.is_at_most_quadratic()) return 0.0;
    const auto d = detail::derivatives(pot, q);
    return d.v - 0.5 * q * d.d1;
}

/// Bound-state energies E_n = hw(n+1/2) - (hw(n+1/2))^2/(4D), n = 0..n_max.
inline std::vector<double> morse_spectrum(double D, double a, const SimulationParams& params)
{
    if (!(D > 0.0)) throw ValidationError("D", "must be > 0");
    if (!(a > 0.0)) throw ValidationError("a", "must be > 0");
    params.validate();
    const double omega = std::sqrt(2.0 * a * a * D / params.mass);
    const double bound = std::sqrt(2.0 * params.mass * D) / (a * params.hbar) - 0.5;
    std::vector<double> levels;
    if (bound < 0.0) return levels;
    const auto n_max = static_cast<long>(std::floor(bound));
    levels.reserve(static_cast<std::size_t>(n_max + 1));
    for (long n = 0; n <= n_max; ++n) {
        const double e = params.hbar * omega * (static_cast<double>(n) + 0.5);
        levels.push_back(e - e * e / (4.0 * D));
    }
    return levels;
}

}  // namespace resiqm
