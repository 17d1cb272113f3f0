#include "tvscb/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace tvscb {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

double epan_deriv(double x) {
    // one-sided limits at the support edges
    if (x < -1.0 || x > 1.0) return 0.0;
    return -1.5 * x;
}

// Integral of (3/4)(1-x^2) x^j over [a, b] clipped to [-1, 1].
double epan_interval_moment(int j, double a, double b) {
    a = std::max(a, -1.0);
    b = std::min(b, 1.0);
    if (a >= b) return 0.0;
    auto antideriv = [j](double x) {
        return 0.75 * (std::pow(x, j + 1) / (j + 1) - std::pow(x, j + 3) / (j + 3));
    };
    return antideriv(b) - antideriv(a);
}

double uniform_interval_moment(int j, double a, double b) {
    a = std::max(a, -1.0);
    b = std::min(b, 1.0);
    if (a >= b) return 0.0;
    return 0.5 * (std::pow(b, j + 1) - std::pow(a, j + 1)) / (j + 1);
}

// 2*sqrt(2) K(sqrt(2) x) - K(x) over [a, b]: the first term substitutes
// y = sqrt(2) x, giving 2 * 2^{-j/2} * int_{sqrt2 a}^{sqrt2 b} K(y) y^j dy.
double jackknife_interval_moment(int j, double a, double b) {
    const double scaled = 2.0 * std::pow(2.0, -0.5 * j) *
                          epan_interval_moment(j, kSqrt2 * a, kSqrt2 * b);
    return scaled - epan_interval_moment(j, a, b);
}

}  // namespace

double epanechnikov_eval(double x) {
    if (x < -1.0 || x > 1.0) return 0.0;
    return 0.75 * (1.0 - x * x);
}

double jackknife_kernel_eval(double x) {
    return 2.0 * kSqrt2 * epanechnikov_eval(kSqrt2 * x) - epanechnikov_eval(x);
}

Kernel Kernel::epanechnikov() {
    Kernel k;
    k.type_ = KernelType::Epanechnikov;
    k.name_ = "epanechnikov";
    k.eval_ = epanechnikov_eval;
    k.deriv_ = epan_deriv;
    k.breakpoints_ = {0.0};
    return k;
}

Kernel Kernel::jackknife(const Kernel& base) {
    Kernel k;
    k.name_ = "jackknife(" + base.name() + ")";
    if (base.type() == KernelType::Epanechnikov) {
        k.type_ = KernelType::Jackknife4thOrder;
        k.eval_ = jackknife_kernel_eval;
        k.deriv_ = [](double x) { return 4.0 * epan_deriv(kSqrt2 * x) - epan_deriv(x); };
    } else {
        k.type_ = KernelType::Custom;
        k.eval_ = [base](double x) { return 2.0 * kSqrt2 * base(kSqrt2 * x) - base(x); };
        k.deriv_ = [base](double x) {
            return 4.0 * base.derivative(kSqrt2 * x) - base.derivative(x);
        };
    }
    k.breakpoints_ = {-1.0 / kSqrt2, 1.0 / kSqrt2};
    for (double p : base.breakpoints()) {
        k.breakpoints_.push_back(p);
        k.breakpoints_.push_back(p / kSqrt2);
    }
    return k;
}

Kernel Kernel::uniform() {
    Kernel k;
    k.type_ = KernelType::Uniform;
    k.name_ = "uniform";
    k.eval_ = [](double x) { return (x < -1.0 || x > 1.0) ? 0.0 : 0.5; };
    k.deriv_ = [](double) { return 0.0; };
    return k;
}

Kernel Kernel::custom(Fn eval, Fn deriv, std::vector<double> breakpoints, std::string name) {
    if (!eval || !deriv) throw std::invalid_argument("custom kernel needs eval and deriv");
    Kernel k;
    k.type_ = KernelType::Custom;
    k.name_ = std::move(name);
    k.eval_ = std::move(eval);
    k.deriv_ = std::move(deriv);
    k.breakpoints_ = std::move(breakpoints);
    return k;
}

double Kernel::operator()(double x) const {
    switch (type_) {
        case KernelType::Epanechnikov:
            return epanechnikov_eval(x);
        case KernelType::Jackknife4thOrder:
            return jackknife_kernel_eval(x);
        case KernelType::Uniform:
            return (x < -1.0 || x > 1.0) ? 0.0 : 0.5;
        case KernelType::Custom:
            break;
    }
    if (x < -1.0 || x > 1.0) return 0.0;
    return eval_(x);
}

double Kernel::derivative(double x) const {
    if (x < -1.0 || x > 1.0) return 0.0;
    return deriv_(x);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const std::vector<double>& breakpoints) {
    if (!(a < b)) return 0.0;
    std::vector<double> cuts{a};
    for (double p : breakpoints) {
        if (p > a && p < b) cuts.push_back(p);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double err = 0.0;
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            f, cuts[i], cuts[i + 1], 15, 1e-14, &err);
    }
    return total;
}

double kernel_moment(const Kernel& k, int l, bool squared) {
    if (l < 0 || l > 8) throw std::invalid_argument("kernel_moment: l must be in [0, 8]");
    if (squared) {
        return integrate([&](double x) { double v = k(x); return v * v * std::pow(x, l); },
                         -1.0, 1.0, k.breakpoints());
    }
    return interval_moment(k, l, -1.0, 1.0);
}

double truncated_moment(const Kernel& k, int j, double b, double t) {
    if (j < 0) throw std::invalid_argument("truncated_moment: j must be nonnegative");
    if (!(b > 0.0)) throw std::invalid_argument("truncated_moment: bandwidth must be positive");
    return interval_moment(k, j, std::max(-1.0, -t / b), std::min(1.0, (1.0 - t) / b));
}

double interval_moment(const Kernel& k, int j, double lo, double hi) {
    if (lo >= hi) return 0.0;
    switch (k.type()) {
        case KernelType::Epanechnikov:
            return epan_interval_moment(j, lo, hi);
        case KernelType::Jackknife4thOrder:
            return jackknife_interval_moment(j, lo, hi);
        case KernelType::Uniform:
            return uniform_interval_moment(j, lo, hi);
        case KernelType::Custom:
            break;
    }
    return integrate([&](double x) { return k(x) * std::pow(x, j); }, lo, hi, k.breakpoints());
}

double boundary_factor(const Kernel& k, int j, double b, double t) {
    const double m2 = truncated_moment(k, 2, b, t);
    if (m2 < 1e-12) {
        throw std::domain_error("boundary_factor: t too extreme for bandwidth (mu_2 ~ 0)");
    }
    const double mj = truncated_moment(k, j, b, t);
    const double mj1 = truncated_moment(k, j + 1, b, t);
    const double mj2 = truncated_moment(k, j + 2, b, t);
    return (mj * mj2 - mj1 * mj1) / m2;
}

double kernel_derivative_energy(const Kernel& k) {
    return integrate([&](double x) { double d = k.derivative(x); return d * d; }, -1.0, 1.0,
                     k.breakpoints());
}

GumbelConstants gumbel_constants(const Kernel& k, int s, double b) {
    if (s < 1) throw std::invalid_argument("gumbel_constants: contrast rank must be >= 1");
    if (!(b > 0.0) || b >= 1.0) {
        throw std::invalid_argument("gumbel_constants: bandwidth must lie in (0, 1)");
    }
    const double m_star = 1.0 / b;
    const double sigma2 = kernel_moment(k, 0, true);
    const double c_k = std::sqrt(kernel_derivative_energy(k) / (sigma2 * std::numbers::pi)) /
                       std::tgamma(0.5 * s);
    const double log_m = std::log(m_star);
    const double root = std::sqrt(2.0 * log_m);
    const double B = root + (std::log(c_k) + (0.5 * s - 0.5) * std::log(log_m) - std::log(2.0)) /
                                root;
    return {B, c_k};
}

}  // namespace tvscb
