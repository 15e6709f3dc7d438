#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "resiqm/tridiagonal.hpp"

using namespace resiqm;

namespace {

// Dense Gaussian elimination with partial pivoting.
std::vector<cplx> dense_solve(std::vector<std::vector<cplx>> a, std::vector<cplx> b)
{
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        }
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<cplx> x(n);
    for (std::size_t i = n; i-- > 0;) {
        cplx s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

std::vector<std::vector<cplx>> densify(const TridiagonalOperator& op)
{
    const std::size_t n = op.size();
    std::vector<std::vector<cplx>> a(n, std::vector<cplx>(n));
    for (std::size_t i = 0; i < n; ++i) {
        a[i][i] = op.diagonal[i];
        if (i + 1 < n) {
            a[i][i + 1] = op.upper[i];
            a[i + 1][i] = op.lower[i];
        }
    }
    return a;
}

TridiagonalOperator random_dominant(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TridiagonalOperator op(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        op.lower[i] = {u(rng), u(rng)};
        op.upper[i] = {u(rng), u(rng)};
    }
    for (std::size_t i = 0; i < n; ++i) op.diagonal[i] = cplx{3.0 + u(rng), u(rng)};
    return op;
}

}  // namespace

TEST(Thomas, MatchesDenseElimination)
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t n : {1u, 2u, 3u, 7u, 50u}) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto op = random_dominant(rng, n);
            std::vector<cplx> rhs(n);
            for (auto& r : rhs) r = {u(rng), u(rng)};
            const auto x = thomas_solve(op, rhs);
            const auto oracle = dense_solve(densify(op), rhs);
            for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(std::abs(x[i] - oracle[i]), 0.0, 1e-12);
        }
    }
}

TEST(Thomas, ResidualIsSmall)
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto op = random_dominant(rng, 2000);
    std::vector<cplx> rhs(2000);
    for (auto& r : rhs) r = {u(rng), u(rng)};
    const auto x = thomas_solve(op, rhs);
    const auto ax = op.apply(x);
    for (std::size_t i = 0; i < rhs.size(); ++i) EXPECT_LT(std::abs(ax[i] - rhs[i]), 1e-12);
}

TEST(Thomas, SingularPivot)
{
    TridiagonalOperator op(std::vector<cplx>{1.0}, std::vector<cplx>{1.0, 1.0}, std::vector<cplx>{1.0});
    EXPECT_THROW(thomas_solve(op, std::vector<cplx>{1.0, 2.0}), NumericalError);
}

TEST(Thomas, SizeMismatch)
{
    TridiagonalOperator op(3);
    EXPECT_THROW(thomas_solve(op, std::vector<cplx>(4)), ValidationError);
    EXPECT_THROW(TridiagonalOperator(std::vector<cplx>(3), std::vector<cplx>(3), std::vector<cplx>(2)),
                 ValidationError);
}

TEST(Tridiagonal, ApplyMatchesDense)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto op = random_dominant(rng, 9);
    std::vector<cplx> v(9);
    for (auto& x : v) x = {u(rng), u(rng)};
    const auto dense = densify(op);
    const auto y = op.apply(v);
    for (std::size_t i = 0; i < 9; ++i) {
        cplx s{};
        for (std::size_t j = 0; j < 9; ++j) s += dense[i][j] * v[j];
        EXPECT_NEAR(std::abs(y[i] - s), 0.0, 1e-14);
    }
}
