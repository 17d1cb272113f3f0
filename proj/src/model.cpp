#include "tvscb/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tvscb {

std::string to_string(Family f) {
    switch (f) {
        case Family::TvAR: return "ar";
        case Family::TvARCH: return "arch";
        case Family::TvGARCH: return "garch";
    }
    return "unknown";
}

ModelSpec ModelSpec::ar(int p) {
    if (p < 1) throw std::invalid_argument("AR order must be >= 1");
    ModelSpec m;
    m.family = Family::TvAR;
    m.p = p;
    m.l = 0;
    m.lower = VectorXd::Constant(p + 1, -1.5);
    m.upper = VectorXd::Constant(p + 1, 1.5);
    m.lower(p) = kAlphaMin;
    m.upper(p) = 1e6;
    return m;
}

ModelSpec ModelSpec::arch(int q) {
    if (q < 1) throw std::invalid_argument("ARCH order must be >= 1");
    ModelSpec m;
    m.family = Family::TvARCH;
    m.p = q;
    m.l = 0;
    m.lower = VectorXd::Zero(q + 1);
    m.upper = VectorXd::Constant(q + 1, 1.5);
    m.lower(0) = kAlphaMin;
    m.upper(0) = 1e6;
    return m;
}

ModelSpec ModelSpec::garch(int mm, int ll) {
    if (mm < 1 || ll < 1) throw std::invalid_argument("GARCH orders must be >= 1");
    ModelSpec m;
    m.family = Family::TvGARCH;
    m.p = mm;
    m.l = ll;
    const int d = 1 + mm + ll;
    m.lower = VectorXd::Zero(d);
    m.upper = VectorXd::Constant(d, 1.0);
    m.lower(0) = kAlphaMin;
    m.upper(0) = 1e6;
    for (int j = 0; j < ll; ++j) m.upper(1 + mm + j) = 0.995;
    return m;
}

int ModelSpec::dim() const {
    switch (family) {
        case Family::TvAR: return p + 1;
        case Family::TvARCH: return p + 1;
        case Family::TvGARCH: return 1 + p + l;
    }
    return 0;
}

int ModelSpec::max_lag() const { return p; }

std::vector<std::string> ModelSpec::param_names() const {
    std::vector<std::string> names;
    switch (family) {
        case Family::TvAR:
            for (int j = 1; j <= p; ++j) names.push_back("a" + std::to_string(j));
            names.push_back("beta0");
            break;
        case Family::TvARCH:
            for (int j = 0; j <= p; ++j) names.push_back("alpha" + std::to_string(j));
            break;
        case Family::TvGARCH:
            for (int j = 0; j <= p; ++j) names.push_back("alpha" + std::to_string(j));
            for (int j = 1; j <= l; ++j) names.push_back("beta" + std::to_string(j));
            break;
    }
    return names;
}

VectorXd ModelSpec::clamp(const VectorXd& theta) const {
    return theta.cwiseMax(lower).cwiseMin(upper);
}

bool ModelSpec::contains(const VectorXd& theta) const {
    return theta.size() == dim() && (theta.array() >= lower.array()).all() &&
           (theta.array() <= upper.array()).all();
}

Series::Series(std::vector<double> values) : x(std::move(values)) {
    y.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] * x[i];
}

CurveComponent CurveComponent::closed(double base, double amp, Shape shape) {
    CurveComponent c;
    c.closed_ = true;
    c.base_ = base;
    c.amp_ = amp;
    c.shape_ = shape;
    return c;
}

CurveComponent CurveComponent::sampled(std::vector<double> grid, std::vector<double> values) {
    if (grid.size() != values.size() || grid.size() < 2) {
        throw std::invalid_argument("sampled curve needs >= 2 matching grid/value points");
    }
    if (!std::is_sorted(grid.begin(), grid.end()) ||
        std::adjacent_find(grid.begin(), grid.end()) != grid.end()) {
        throw std::invalid_argument("sampled curve grid must be strictly increasing");
    }
    CurveComponent c;
    c.closed_ = false;
    c.grid_ = std::move(grid);
    c.values_ = std::move(values);
    return c;
}

double CurveComponent::value(double t) const {
    using std::numbers::pi;
    if (closed_) {
        switch (shape_) {
            case Shape::Const: return base_;
            case Shape::SinPi: return base_ + amp_ * std::sin(pi * t);
            case Shape::Sin2Pi: return base_ + amp_ * std::sin(2.0 * pi * t);
            case Shape::CosPi: return base_ + amp_ * std::cos(pi * t);
        }
    }
    if (t <= grid_.front()) return values_.front();
    if (t >= grid_.back()) return values_.back();
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - grid_.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - grid_[lo]) / (grid_[hi] - grid_[lo]);
    return (1.0 - w) * values_[lo] + w * values_[hi];
}

double CurveComponent::second_derivative(double t) const {
    using std::numbers::pi;
    if (closed_) {
        switch (shape_) {
            case Shape::Const: return 0.0;
            case Shape::SinPi: return -pi * pi * amp_ * std::sin(pi * t);
            case Shape::Sin2Pi: return -4.0 * pi * pi * amp_ * std::sin(2.0 * pi * t);
            case Shape::CosPi: return -pi * pi * amp_ * std::cos(pi * t);
        }
    }
    // five-point stencil on the interpolant, step = two grid spacings
    const double h = 2.0 * (grid_.back() - grid_.front()) / static_cast<double>(grid_.size() - 1);
    const double c = std::clamp(t, grid_.front() + 2.0 * h, grid_.back() - 2.0 * h);
    return (-value(c + 2 * h) + 16 * value(c + h) - 30 * value(c) + 16 * value(c - h) -
            value(c - 2 * h)) /
           (12.0 * h * h);
}

ParamCurves::ParamCurves(ModelSpec m, std::vector<CurveComponent> c)
    : model(std::move(m)), components(std::move(c)) {
    if (static_cast<int>(components.size()) != model.dim()) {
        throw std::invalid_argument("ParamCurves: component count does not match model dimension");
    }
}

VectorXd ParamCurves::at(double t) const {
    VectorXd v(static_cast<Eigen::Index>(components.size()));
    for (std::size_t k = 0; k < components.size(); ++k) {
        v(static_cast<Eigen::Index>(k)) = components[k].value(t);
    }
    return v;
}

void ParamCurves::validate() const {
    for (int g = 0; g <= 200; ++g) {
        const double t = g / 200.0;
        const VectorXd v = at(t);
        if (!v.allFinite()) throw std::invalid_argument("ParamCurves: non-finite curve value");
        switch (model.family) {
            case Family::TvAR: {
                if (v(model.p) < kAlphaMin) {
                    throw std::invalid_argument("ParamCurves: AR innovation variance below minimum");
                }
                if (v.head(model.p).cwiseAbs().sum() >= 1.0) {
                    throw std::invalid_argument("ParamCurves: AR coefficients not contracting");
                }
                break;
            }
            case Family::TvARCH:
            case Family::TvGARCH:
                if (v(0) < kAlphaMin) {
                    throw std::invalid_argument("ParamCurves: alpha_0 below minimum");
                }
                if ((v.tail(v.size() - 1).array() < 0.0).any()) {
                    throw std::invalid_argument("ParamCurves: negative ARCH/GARCH coefficient");
                }
                break;
        }
    }
}

}  // namespace tvscb
