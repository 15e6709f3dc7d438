#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "resiqm/core.hpp"

namespace resiqm {

/**
 * Complex tridiagonal matrix. Row i reads
 *   lower[i-1] * x[i-1] + diagonal[i] * x[i] + upper[i] * x[i+1].
 */
struct TridiagonalOperator {
    std::vector<cplx> lower;
    std::vector<cplx> diagonal;
    std::vector<cplx> upper;

    explicit TridiagonalOperator(std::size_t n = 0)
        : lower(n > 0 ? n - 1 : 0), diagonal(n), upper(n > 0 ? n - 1 : 0)
    {
    }

    TridiagonalOperator(std::vector<cplx> lo, std::vector<cplx> diag, std::vector<cplx> up)
        : lower(std::move(lo)), diagonal(std::move(diag)), upper(std::move(up))
    {
        if (diagonal.empty() || lower.size() + 1 != diagonal.size() || upper.size() + 1 != diagonal.size()) {
            throw ValidationError("tridiagonal", "inconsistent band lengths");
        }
    }

    std::size_t size() const noexcept { return diagonal.size(); }

    std::vector<cplx> apply(std::span<const cplx> x) const
    {
        const std::size_t n = size();
        std::vector<cplx> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            cplx acc = diagonal[i] * x[i];
            if (i > 0) acc += lower[i - 1] * x[i - 1];
            if (i + 1 < n) acc += upper[i] * x[i + 1];
            y[i] = acc;
        }
        return y;
    }
};

/// Thomas algorithm without pivoting; throws on a pivot below 1e-14 in magnitude.
inline std::vector<cplx> thomas_solve(const TridiagonalOperator& op, std::span<const cplx> rhs)
{
    const std::size_t n = op.size();
    if (rhs.size() != n) throw ValidationError("rhs", "length does not match operator size");
    if (n == 0) return {};
    constexpr double min_pivot = 1e-14;

    std::vector<cplx> c_prime(n);
    std::vector<cplx> x(n);
    cplx pivot = op.diagonal[0];
    if (std::abs(pivot) <= min_pivot) throw NumericalError("singular tridiagonal system");
    if (n > 1) c_prime[0] = op.upper[0] / pivot;
    x[0] = rhs[0] / pivot;

    // Forward sweep
    for (std::size_t i = 1; i < n; ++i) {
        const cplx a = op.lower[i - 1];
        pivot = op.diagonal[i] - a * c_prime[i - 1];
        if (std::abs(pivot) <= min_pivot) throw NumericalError("singular tridiagonal system");
        if (i + 1 < n) c_prime[i] = op.upper[i] / pivot;
        x[i] = (rhs[i] - a * x[i - 1]) / pivot;
    }

    // Back substitution
    for (std::size_t i = n - 1; i > 0; --i) x[i - 1] -= c_prime[i - 1] * x[i];
    return x;
}

}  // namespace resiqm
