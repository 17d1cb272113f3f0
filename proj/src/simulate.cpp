#include "tvscb/simulate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tvscb/parallel.hpp"

namespace tvscb {

namespace {

double draw(std::mt19937_64& gen, const InnovationFn& innov, std::normal_distribution<double>& nd) {
    return innov ? innov(gen) : nd(gen);
}

void require_family(const ParamCurves& c, Family f, const char* what) {
    if (c.model.family != f) {
        throw std::invalid_argument(std::string(what) + ": curves have the wrong model family");
    }
    c.validate();
}

[[noreturn]] void blow_up(std::size_t i) {
    throw std::runtime_error("simulation produced a non-finite value at index " +
                             std::to_string(i + 1));
}

// Shared tvARCH/tvGARCH recursion. The burn-in runs at the frozen t = 0
// parameters; its last values seed the lags of x_1.
SimulatedPath simulate_volatility(const ParamCurves& curves, std::size_t n, std::uint64_t seed,
                                  const InnovationFn& innov) {
    if (n == 0) throw std::invalid_argument("simulate: n must be >= 1");
    const ModelSpec& m = curves.model;
    const int q = m.p;
    const int l = m.family == Family::TvGARCH ? m.l : 0;
    const std::size_t burn = 200 * static_cast<std::size_t>(std::max(q, std::max(l, 1)));

    auto gen = make_engine(seed, "simulate");
    std::normal_distribution<double> nd(0.0, 1.0);

    const std::size_t total = burn + n;
    std::vector<double> y(total, 0.0), s2(total, 0.0), x(total, 0.0);
    const VectorXd theta0 = curves.at(0.0);
    VectorXd theta = theta0;
    for (std::size_t k = 0; k < total; ++k) {
        if (k >= burn) theta = curves.at(static_cast<double>(k - burn + 1) / static_cast<double>(n));
        double s = theta(0);
        for (int j = 1; j <= q; ++j) {
            if (k >= static_cast<std::size_t>(j)) s += theta(j) * y[k - j];
        }
        for (int j = 1; j <= l; ++j) {
            // pre-sample conditional variance set to alpha_0
            s += theta(q + j) * (k >= static_cast<std::size_t>(j) ? s2[k - j] : theta0(0));
        }
        const double z = draw(gen, innov, nd);
        s2[k] = s;
        x[k] = std::sqrt(s) * z;
        y[k] = x[k] * x[k];
        if (!std::isfinite(s) || !std::isfinite(x[k])) blow_up(k < burn ? 0 : k - burn);
    }
    SimulatedPath out;
    out.series = Series(std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(burn), x.end()));
    out.sigma2.assign(s2.begin() + static_cast<std::ptrdiff_t>(burn), s2.end());
    return out;
}

}  // namespace

SimulatedPath simulate_tvarch(const ParamCurves& curves, std::size_t n, std::uint64_t seed,
                              const InnovationFn& innov) {
    require_family(curves, Family::TvARCH, "simulate_tvarch");
    return simulate_volatility(curves, n, seed, innov);
}

SimulatedPath simulate_tvgarch(const ParamCurves& curves, std::size_t n, std::uint64_t seed,
                               const InnovationFn& innov) {
    require_family(curves, Family::TvGARCH, "simulate_tvgarch");
    return simulate_volatility(curves, n, seed, innov);
}

SimulatedPath simulate_tvar(const ParamCurves& curves, std::size_t n, std::uint64_t seed,
                            const InnovationFn& innov) {
    require_family(curves, Family::TvAR, "simulate_tvar");
    if (n == 0) throw std::invalid_argument("simulate: n must be >= 1");
    const int p = curves.model.p;
    const std::size_t burn = 200 * static_cast<std::size_t>(p);
    auto gen = make_engine(seed, "simulate");
    std::normal_distribution<double> nd(0.0, 1.0);

    const std::size_t total = burn + n;
    std::vector<double> x(total, 0.0), s2(total, 0.0);
    VectorXd theta = curves.at(0.0);
    for (std::size_t k = 0; k < total; ++k) {
        if (k >= burn) theta = curves.at(static_cast<double>(k - burn + 1) / static_cast<double>(n));
        double mu = 0.0;
        for (int j = 1; j <= p; ++j) {
            if (k >= static_cast<std::size_t>(j)) mu += theta(j - 1) * x[k - j];
        }
        s2[k] = theta(p);
        x[k] = mu + std::sqrt(theta(p)) * draw(gen, innov, nd);
        if (!std::isfinite(x[k])) blow_up(k < burn ? 0 : k - burn);
    }
    SimulatedPath out;
    out.series = Series(std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(burn), x.end()));
    out.sigma2.assign(s2.begin() + static_cast<std::ptrdiff_t>(burn), s2.end());
    return out;
}

SimulatedPath simulate(const ParamCurves& curves, std::size_t n, std::uint64_t seed,
                       const InnovationFn& innov) {
    switch (curves.model.family) {
        case Family::TvAR: return simulate_tvar(curves, n, seed, innov);
        case Family::TvARCH: return simulate_tvarch(curves, n, seed, innov);
        case Family::TvGARCH: return simulate_tvgarch(curves, n, seed, innov);
    }
    throw std::invalid_argument("simulate: unknown family");
}

MomentCheck garch4_moment_check(const ParamCurves& curves) {
    const ModelSpec& m = curves.model;
    if (m.family != Family::TvGARCH || m.p != 1 || m.l != 1) {
        throw std::invalid_argument("garch4_moment_check: only GARCH(1,1) is supported");
    }
    MomentCheck res{true, 0.0, -1.0};
    for (int g = 0; g <= 1000; ++g) {
        const double t = g / 1000.0;
        const VectorXd th = curves.at(t);
        const double a = th(1), b = th(2);
        const double v = b * b + 2.0 * a * b + 3.0 * a * a;
        if (v > res.value) {
            res.value = v;
            res.worst_t = t;
        }
    }
    res.ok = res.value < 1.0;
    return res;
}

ParamCurves design_arch_a() {
    return ParamCurves(ModelSpec::arch(1), {CurveComponent::closed(0.8, 0.3, Shape::CosPi),
                                            CurveComponent::closed(0.45, 0.1, Shape::CosPi)});
}

ParamCurves design_garch_b() {
    return ParamCurves(ModelSpec::garch(1, 1), {CurveComponent::closed(2.4, 0.02, Shape::CosPi),
                                                CurveComponent::closed(0.4, 0.1, Shape::CosPi),
                                                CurveComponent::closed(0.5, -0.1, Shape::CosPi)});
}

ParamCurves design_garch_boot() {
    return ParamCurves(ModelSpec::garch(1, 1), {CurveComponent::closed(1.0, 0.2, Shape::Sin2Pi),
                                                CurveComponent::closed(0.45, 0.1, Shape::SinPi),
                                                CurveComponent::closed(0.1, 0.1, Shape::SinPi)});
}

ParamCurves design_by_name(const std::string& name) {
    if (name == "arch-a") return design_arch_a();
    if (name == "garch-b") return design_garch_b();
    if (name == "garch-boot") return design_garch_boot();
    if (name == "arch-const") {
        return ParamCurves(ModelSpec::arch(1),
                           {CurveComponent::constant(0.8), CurveComponent::constant(0.45)});
    }
    if (name == "arch-tv") {
        return ParamCurves(ModelSpec::arch(1), {CurveComponent::closed(1.5, 1.2, Shape::Sin2Pi),
                                                CurveComponent::constant(0.3)});
    }
    throw std::invalid_argument("unknown design '" + name +
                                "' (expected arch-a, garch-b, garch-boot, arch-const, arch-tv)");
}

}  // namespace tvscb
