#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "tvscb/loss.hpp"
#include "tvscb/simulate.hpp"

using namespace tvscb;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Central differences of the value (for the gradient) and of the gradient
// (for the Hessian).
template <class F>
void check_derivatives(F f, const VectorXd& x, double tol) {
    const LossEval e = f(x, Order::Hessian);
    const auto d = x.size();
    VectorXd fd_g(d);
    MatrixXd fd_h(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        const double h = 1e-5 * std::max(1.0, std::abs(x(j)));
        VectorXd xp = x, xm = x;
        xp(j) += h;
        xm(j) -= h;
        fd_g(j) = (f(xp, Order::Value).value - f(xm, Order::Value).value) / (2 * h);
        fd_h.col(j) = (f(xp, Order::Gradient).grad - f(xm, Order::Gradient).grad) / (2 * h);
    }
    const double gs = std::max(1e-3, e.grad.cwiseAbs().maxCoeff());
    const double hs = std::max(1e-3, e.hess.cwiseAbs().maxCoeff());
    CHECK((e.grad - fd_g).cwiseAbs().maxCoeff() / gs < tol);
    CHECK((e.hess - fd_h).cwiseAbs().maxCoeff() / hs < tol);
    CHECK((e.hess - e.hess.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * hs);
}

Series arch_series(std::size_t n, std::uint64_t seed) { return simulate(design_arch_a(), n, seed).series; }

}  // namespace

TEST_CASE("arch loss closed form") {
    VectorXd th(2);
    th << 0.5, 0.3;
    VectorXd lag(1);
    lag << 2.0;
    const LossEval e = arch_loss(1.7, lag, th);
    const double s2 = 0.5 + 0.3 * 2.0;
    CHECK_THAT(e.value, WithinRel(0.5 * (1.7 / s2 + std::log(s2)), 1e-15));
    const double c = 0.5 / s2 * (1 - 1.7 / s2);
    CHECK_THAT(e.grad(0), WithinRel(c, 1e-14));
    CHECK_THAT(e.grad(1), WithinRel(c * 2.0, 1e-14));
    th(0) = -1.0;
    CHECK_THROWS_AS(arch_loss(1.0, lag, th), std::domain_error);
}

TEST_CASE("arch and ar derivatives match finite differences") {
    const Series s = arch_series(300, 1);
    const ModelSpec m = ModelSpec::arch(2);
    VectorXd th(3);
    th << 0.9, 0.3, 0.1;
    for (std::size_t i : {1, 2, 50, 300}) {
        check_derivatives([&](const VectorXd& x, Order o) { return observation_loss(s, m, i, x, o); }, th, 1e-6);
    }
    const ModelSpec ar = ModelSpec::ar(2);
    VectorXd ta(3);
    ta << 0.4, -0.2, 1.3;
    for (std::size_t i : {1, 3, 120}) {
        check_derivatives([&](const VectorXd& x, Order o) { return observation_loss(s, ar, i, x, o); }, ta, 1e-6);
    }
}

TEST_CASE("garch derivatives match finite differences") {
    const Series s = simulate(design_garch_b(), 300, 4).series;
    for (const ModelSpec& m : {ModelSpec::garch(1, 1), ModelSpec::garch(2, 1), ModelSpec::garch(1, 2)}) {
        VectorXd th = VectorXd::Constant(m.dim(), 0.15);
        th(0) = 2.0;
        th(m.dim() - 1) = 0.5;
        for (std::size_t i : {1, 2, 30, 250}) {
            check_derivatives([&](const VectorXd& x, Order o) { return observation_loss(s, m, i, x, o); }, th,
                              1e-5);
        }
    }
}

TEST_CASE("garch with zero beta reproduces arch exactly") {
    const Series s = arch_series(200, 2);
    VectorXd ta(2), tg(3);
    ta << 0.9, 0.4;
    tg << 0.9, 0.4, 0.0;
    for (std::size_t i : {1, 2, 77, 200}) {
        const LossEval a = observation_loss(s, ModelSpec::arch(1), i, ta, Order::Hessian);
        const LossEval g = observation_loss(s, ModelSpec::garch(1, 1), i, tg, Order::Hessian);
        CHECK(a.value == g.value);
        CHECK(a.grad(0) == g.grad(0));
        CHECK(a.grad(1) == g.grad(1));
        CHECK(a.hess(1, 1) == g.hess(1, 1));
    }
}

TEST_CASE("garch path recursion agrees with the truncated per-point recursion") {
    const Series s = simulate(design_garch_b(), 400, 8).series;
    VectorXd th(3);
    th << 2.4, 0.4, 0.5;
    const GarchState st = garch_sigma2_path(s.y, 1, 1, th, Order::Hessian);
    for (std::size_t i : {1, 5, 100, 400}) {
        const LossEval a = garch_loss(i, st, s.y[i - 1], Order::Hessian);
        const LossEval b = observation_loss(s, ModelSpec::garch(1, 1), i, th, Order::Hessian);
        CHECK_THAT(a.value, WithinRel(b.value, 1e-10));
        CHECK((a.grad - b.grad).norm() <= 1e-9 * (1 + a.grad.norm()));
        CHECK((a.hess - b.hess).norm() <= 1e-9 * (1 + a.hess.norm()));
    }
    CHECK(st.sigma2[0] == 2.4 + 0.5 * 2.4);
}

TEST_CASE("garch memory depth") {
    VectorXd th(3);
    th << 1.0, 0.2, 0.5;
    CHECK(garch_memory_depth(th, 1, 1) == static_cast<std::size_t>(std::ceil(std::log(1e-13) / std::log(0.5))));
    th(2) = 0.0;
    CHECK(garch_memory_depth(th, 1, 1) == 0);
    th(2) = 1.0;
    CHECK(garch_memory_depth(th, 1, 1) == SIZE_MAX);
}

TEST_CASE("kernel window matches brute force") {
    const Kernel k = Kernel::epanechnikov();
    for (double t : {0.0, 0.013, 0.5, 0.99, 1.0}) {
        for (double b : {0.05, 0.2, 0.7}) {
            const Window w = kernel_window(200, t, b, k);
            for (std::size_t i = 1; i <= 200; ++i) {
                const bool inside = k((i / 200.0 - t) / b) > 0.0;
                if (inside) CHECK((i >= w.first && i <= w.last));
                if (i < w.first || i > w.last) CHECK_FALSE(inside);
            }
        }
    }
}

TEST_CASE("local objective derivatives in (theta, theta')") {
    const Series s = arch_series(400, 3);
    const ModelSpec m = ModelSpec::arch(1);
    const Kernel k = Kernel::epanechnikov();
    VectorXd x(4);
    x << 0.9, 0.45, -0.5, 0.3;
    for (double t : {0.05, 0.5}) {
        check_derivatives(
            [&](const VectorXd& v, Order o) { return local_objective(s, m, k, t, 0.2, v.head(2), v.tail(2), o); }, x,
            1e-6);
    }
}

TEST_CASE("local objective penalizes lines leaving the box") {
    const Series s = arch_series(400, 3);
    const ModelSpec m = ModelSpec::arch(1);
    const Kernel k = Kernel::epanechnikov();
    VectorXd th(2), tp(2);
    th << 0.9, 0.05;
    tp << 0.0, 2.1;  // alpha_1 goes negative on the left half of the window
    const LossEval e = local_objective(s, m, k, 0.5, 0.2, th, tp, Order::Hessian);
    tp(1) = 0.0;
    const LossEval flat = local_objective(s, m, k, 0.5, 0.2, th, tp, Order::Hessian);
    CHECK(e.value > flat.value);
    VectorXd x(4);
    x << 0.9, 0.05, 0.0, 2.1;
    check_derivatives(
        [&](const VectorXd& v, Order o) { return local_objective(s, m, k, 0.5, 0.2, v.head(2), v.tail(2), o); }, x,
        1e-5);
}

TEST_CASE("local objective edge cases") {
    const Series s = arch_series(100, 3);
    const ModelSpec m = ModelSpec::arch(1);
    const Kernel k = Kernel::epanechnikov();
    VectorXd th(2), tp = VectorXd::Zero(2);
    th << 0.9, 0.4;
    CHECK_THROWS_AS(local_objective(s, m, k, 0.505, 0.001, th, tp), std::invalid_argument);
    const double full = local_objective(s, m, k, 0.5, 0.2, th, tp).value;
    const double loo = local_objective(s, m, k, 0.5, 0.2, th, tp, Order::Value, 50).value;
    const double w = k(0.0) / (100 * 0.2);
    CHECK_THAT(full - loo, WithinAbs(w * observation_loss(s, m, 50, th, Order::Value).value, 1e-13));
}
