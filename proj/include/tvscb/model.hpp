#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tvscb {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Lower bound for intercept-like parameters (alpha_0, AR innovation variance).
inline constexpr double kAlphaMin = 1e-6;

enum class Family { TvAR, TvARCH, TvGARCH };

std::string to_string(Family f);

/// Model family, parameter box Theta and slope box [-R, R]^d.
///
/// Parameter layouts:
///   TvAR(p)      theta = (a_1, ..., a_p, beta_0)        beta_0 = innovation variance
///   TvARCH(q)    theta = (alpha_0, alpha_1, ..., alpha_q)
///   TvGARCH(m,l) theta = (alpha_0, alpha_1..alpha_m, beta_1..beta_l)
struct ModelSpec {
    Family family = Family::TvARCH;
    int p = 1;  ///< AR order, ARCH order q, or GARCH order m
    int l = 0;  ///< GARCH order l (beta lags)
    VectorXd lower;
    VectorXd upper;
    double slope_radius = 10.0;

    static ModelSpec ar(int p);
    static ModelSpec arch(int q);
    static ModelSpec garch(int m, int l);

    int dim() const;
    bool is_volatility() const { return family != Family::TvAR; }
    /// Longest lag the observation loss looks back (GARCH: alpha lags only).
    int max_lag() const;
    std::vector<std::string> param_names() const;
    VectorXd clamp(const VectorXd& theta) const;
    bool contains(const VectorXd& theta) const;
};

/// Observations x_1..x_n. For volatility models y = x^2 is what the loss sees.
struct Series {
    std::vector<double> x;
    std::vector<double> y;

    Series() = default;
    explicit Series(std::vector<double> values);

    std::size_t size() const { return x.size(); }
};

enum class Shape { Const, SinPi, Sin2Pi, CosPi };

/// One coefficient function on [0, 1]: either base + amp * shape(t) or a
/// piecewise-linear interpolant of sampled values.
class CurveComponent {
public:
    static CurveComponent closed(double base, double amp, Shape shape);
    static CurveComponent constant(double value) { return closed(value, 0.0, Shape::Const); }
    static CurveComponent sampled(std::vector<double> grid, std::vector<double> values);

    double value(double t) const;
    double second_derivative(double t) const;
    bool is_closed_form() const { return closed_; }

private:
    bool closed_ = true;
    double base_ = 0.0;
    double amp_ = 0.0;
    Shape shape_ = Shape::Const;
    std::vector<double> grid_;
    std::vector<double> values_;
};

struct ParamCurves {
    ModelSpec model;
    std::vector<CurveComponent> components;

    ParamCurves() = default;
    ParamCurves(ModelSpec m, std::vector<CurveComponent> c);

    VectorXd at(double t) const;
    /// Throws std::invalid_argument if a curve leaves the admissible region.
    void validate() const;
};

}  // namespace tvscb
