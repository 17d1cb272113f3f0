#include <catch_amalgamated.hpp>

#include <cmath>

#include "tvscb/optimize.hpp"

using namespace tvscb;
using Catch::Matchers::WithinAbs;

namespace {

// 1/2 (x - c)^T A (x - c)
BoxProblem quadratic(const MatrixXd& A, const VectorXd& c, const VectorXd& lo, const VectorXd& hi) {
    BoxProblem p;
    p.lower = lo;
    p.upper = hi;
    p.f = [A, c](const VectorXd& x, Order o) {
        LossEval e;
        const VectorXd r = x - c;
        e.value = 0.5 * r.dot(A * r);
        if (o != Order::Value) e.grad = A * r;
        if (o == Order::Hessian) e.hess = A;
        return e;
    };
    return p;
}

BoxProblem rosenbrock(const VectorXd& lo, const VectorXd& hi) {
    BoxProblem p;
    p.lower = lo;
    p.upper = hi;
    p.f = [](const VectorXd& x, Order o) {
        LossEval e;
        const double a = x(1) - x(0) * x(0), b = 1 - x(0);
        e.value = 100 * a * a + b * b;
        if (o != Order::Value) {
            e.grad.resize(2);
            e.grad << -400 * x(0) * a - 2 * b, 200 * a;
        }
        if (o == Order::Hessian) {
            e.hess.resize(2, 2);
            e.hess << 1200 * x(0) * x(0) - 400 * x(1) + 2, -400 * x(0), -400 * x(0), 200;
        }
        return e;
    };
    return p;
}

}  // namespace

TEST_CASE("newton solves an interior quadratic in one step") {
    MatrixXd A(2, 2);
    A << 3, 1, 1, 2;
    VectorXd c(2);
    c << 0.3, -0.2;
    const auto p = quadratic(A, c, VectorXd::Constant(2, -1), VectorXd::Constant(2, 1));
    const OptResult r = projected_newton(p, VectorXd::Zero(2));
    CHECK(r.converged);
    CHECK((r.x - c).norm() < 1e-12);
    CHECK(r.iterations <= 2);
}

TEST_CASE("newton respects active bounds") {
    MatrixXd A = MatrixXd::Identity(2, 2);
    VectorXd c(2);
    c << 2.0, -0.5;  // first coordinate wants to leave the box
    const auto p = quadratic(A, c, VectorXd::Constant(2, -1), VectorXd::Constant(2, 1));
    const OptResult r = projected_newton(p, VectorXd::Zero(2));
    CHECK(r.converged);
    CHECK_THAT(r.x(0), WithinAbs(1.0, 1e-14));
    CHECK_THAT(r.x(1), WithinAbs(-0.5, 1e-10));
}

TEST_CASE("newton handles nonconvex rosenbrock") {
    const auto p = rosenbrock(VectorXd::Constant(2, -2), VectorXd::Constant(2, 2));
    VectorXd x0(2);
    x0 << -1.2, 1.0;
    const OptResult r = projected_newton(p, x0);
    CHECK(r.converged);
    CHECK((r.x - VectorXd::Ones(2)).norm() < 1e-6);
}

TEST_CASE("newton on a box excluding the unconstrained minimum") {
    VectorXd lo(2), hi(2);
    lo << -2, -2;
    hi << 0.5, 2;
    const auto p = rosenbrock(lo, hi);
    const OptResult r = projected_newton(p, VectorXd::Zero(2));
    CHECK(r.converged);
    CHECK_THAT(r.x(0), WithinAbs(0.5, 1e-12));
    CHECK_THAT(r.x(1), WithinAbs(0.25, 1e-6));
}

TEST_CASE("nelder-mead finds box minima") {
    const auto p = rosenbrock(VectorXd::Constant(2, -2), VectorXd::Constant(2, 2));
    VectorXd x0(2);
    x0 << -1.2, 1.0;
    const OptResult r = nelder_mead_box(p, x0, VectorXd::Constant(2, 0.2));
    CHECK(r.converged);
    CHECK((r.x - VectorXd::Ones(2)).norm() < 1e-5);

    MatrixXd A = MatrixXd::Identity(3, 3);
    const VectorXd c = VectorXd::Constant(3, 5.0);
    const auto q = quadratic(A, c, VectorXd::Zero(3), VectorXd::Ones(3));
    const OptResult s = nelder_mead_box(q, VectorXd::Constant(3, 0.5), VectorXd::Constant(3, 0.1));
    CHECK((s.x - VectorXd::Ones(3)).norm() < 1e-7);
}

TEST_CASE("non-finite start is reported as not converged") {
    BoxProblem p;
    p.lower = VectorXd::Constant(1, -1);
    p.upper = VectorXd::Constant(1, 1);
    p.f = [](const VectorXd&, Order) {
        LossEval e;
        e.value = std::nan("");
        return e;
    };
    CHECK_FALSE(projected_newton(p, VectorXd::Zero(1)).converged);
}
