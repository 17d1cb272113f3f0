#pragma once

#include <functional>
#include <string>
#include <vector>

namespace tvscb {

enum class KernelType { Epanechnikov, Jackknife4thOrder, Uniform, Custom };

/// Compactly supported smoothing kernel on [-1, 1].
///
/// The built-in kernels are dispatched through a switch so that the hot
/// loops of the local likelihood do not pay for a std::function call.
class Kernel {
public:
    using Fn = std::function<double(double)>;

    static Kernel epanechnikov();
    /// Fourth-order kernel 2*sqrt(2)*K(sqrt(2)x) - K(x) built from `base`.
    static Kernel jackknife(const Kernel& base);
    static Kernel jackknife() { return jackknife(epanechnikov()); }
    static Kernel uniform();
    static Kernel custom(Fn eval, Fn deriv, std::vector<double> breakpoints = {},
                         std::string name = "custom");

    double operator()(double x) const;
    double derivative(double x) const;

    KernelType type() const { return type_; }
    const std::string& name() const { return name_; }
    /// Interior points where the kernel or its derivative is not smooth.
    /// Quadrature splits the integration interval at these points.
    const std::vector<double>& breakpoints() const { return breakpoints_; }

private:
    Kernel() = default;

    KernelType type_ = KernelType::Custom;
    std::string name_;
    Fn eval_;
    Fn deriv_;
    std::vector<double> breakpoints_;
};

double epanechnikov_eval(double x);
double jackknife_kernel_eval(double x);

/// Adaptive Gauss-Kronrod integral of f over [a, b], split at the given
/// breakpoints. Absolute error target 1e-10.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const std::vector<double>& breakpoints = {});

/// mu_{K,l} (squared = false) or sigma^2_{K,l} (squared = true).
double kernel_moment(const Kernel& k, int l, bool squared = false);

/// Integral of K(x) x^j over [lo, hi] (closed form for the built-in kernels).
double interval_moment(const Kernel& k, int j, double lo, double hi);

/// Integral of K(x) x^j over [max(-1, -t/b), min(1, (1-t)/b)].
double truncated_moment(const Kernel& k, int j, double b, double t);

/// N^{(j)}_b(t) = (mu_j mu_{j+2} - mu_{j+1}^2) / mu_2 with truncated moments.
/// Throws std::domain_error when mu_2 degenerates.
double boundary_factor(const Kernel& k, int j, double b, double t);

/// Integral of K'(x)^2 over [-1, 1].
double kernel_derivative_energy(const Kernel& k);

struct GumbelConstants {
    double B;    ///< B_K(m*) with m* = 1/b
    double C_K;
};

/// Extreme value centring constants for a rank-s contrast at bandwidth b.
GumbelConstants gumbel_constants(const Kernel& k, int s, double b);

}  // namespace tvscb
