#include "tvscb/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tvscb/loss.hpp"

namespace tvscb {

std::vector<double> forecast_sigma2(const ModelSpec& model, const VectorXd& params,
                                    const std::vector<double>& y_hist,
                                    const std::vector<double>& sigma2_hist, int h) {
    if (model.family == Family::TvAR) throw std::invalid_argument("forecast_sigma2: AR models are not supported");
    if (h < 1) throw std::invalid_argument("forecast_sigma2: horizon must be >= 1");
    const int m = model.p;
    const int l = model.family == Family::TvGARCH ? model.l : 0;
    if (l > 0 && sigma2_hist.size() != y_hist.size()) {
        throw std::invalid_argument("forecast_sigma2: GARCH needs a sigma^2 history aligned with y");
    }
    const auto T = static_cast<std::ptrdiff_t>(y_hist.size());
    std::vector<double> fc(static_cast<std::size_t>(h));
    // position p < T is history, p >= T is forecast index p - T
    auto ey = [&](std::ptrdiff_t p) {
        if (p < 0) return 0.0;
        return p < T ? y_hist[static_cast<std::size_t>(p)] : fc[static_cast<std::size_t>(p - T)];
    };
    auto es = [&](std::ptrdiff_t p) {
        if (p < 0) return params(0);
        return p < T ? sigma2_hist[static_cast<std::size_t>(p)] : fc[static_cast<std::size_t>(p - T)];
    };
    for (int j = 0; j < h; ++j) {
        const std::ptrdiff_t p = T + j;
        double v = params(0);
        for (int a = 1; a <= m; ++a) v += params(a) * ey(p - a);
        for (int a = 1; a <= l; ++a) v += params(m + a) * es(p - a);
        fc[static_cast<std::size_t>(j)] = v;
    }
    return fc;
}

namespace {

struct WindowForecast {
    double sigma_bar;
    VectorXd params;
};

// Constant QMLE on y[lo..hi) and the h-window average forecast from hi.
WindowForecast window_forecast(const Series& s, const ModelSpec& model, std::size_t lo, std::size_t hi, int h,
                               const FitOptions& fo, const std::optional<VectorXd>& warm) {
    const Series sub(std::vector<double>(s.x.begin() + static_cast<std::ptrdiff_t>(lo),
                                         s.x.begin() + static_cast<std::ptrdiff_t>(hi)));
    const VectorXd th = global_qmle(sub, model, fo, warm).x;
    std::vector<double> s2;
    if (model.family == Family::TvGARCH) s2 = garch_sigma2_path(sub.y, model.p, model.l, th, Order::Value).sigma2;
    const std::vector<double> fc = forecast_sigma2(model, th, sub.y, s2, h);
    double sb = 0.0;
    for (double v : fc) sb += v;
    return {sb / h, th};
}

double realized_bar(const Series& s, std::size_t t, int h) {
    double xb = 0.0;
    for (int j = 1; j <= h; ++j) xb += s.y[t + static_cast<std::size_t>(j) - 1];
    return xb / h;
}

}  // namespace

AmseResult amse_h(const Series& s, const ModelSpec& model, std::size_t start, int h, ForecastMethod method,
                  const AmseOptions& opt) {
    if (model.family == Family::TvAR) throw std::invalid_argument("amse_h: AR models are not supported");
    const std::size_t n = s.size();
    if (h < 1 || opt.stride < 1) throw std::invalid_argument("amse_h: horizon and stride must be >= 1");
    if (start < 1 || start + static_cast<std::size_t>(h) >= n) {
        throw std::invalid_argument("amse_h: need 1 <= start and start + h < n");
    }
    std::vector<std::size_t> origins;
    for (std::size_t t = start + 1; t + static_cast<std::size_t>(h) <= n; t += static_cast<std::size_t>(opt.stride)) {
        origins.push_back(t);
    }
    AmseResult res;
    res.points = static_cast<int>(origins.size());
    if (method == ForecastMethod::TimeConstant) {
        std::optional<VectorXd> warm;
        double acc = 0.0;
        for (std::size_t t : origins) {
            const WindowForecast wf = window_forecast(s, model, 0, t, h, opt.fit, warm);
            warm = wf.params;
            const double e = wf.sigma_bar - realized_bar(s, t, h);
            acc += e * e;
        }
        res.amse = acc / static_cast<double>(origins.size());
        return res;
    }
    if (opt.m_grid.empty()) throw std::invalid_argument("amse_h: empty m grid");
    res.amse = std::numeric_limits<double>::infinity();
    for (int m : opt.m_grid) {
        if (m < 2 || static_cast<std::size_t>(m) > start) {
            throw std::invalid_argument("amse_h: window m must satisfy 2 <= m <= start");
        }
        std::optional<VectorXd> warm;
        double acc = 0.0;
        for (std::size_t t : origins) {
            const WindowForecast wf = window_forecast(s, model, t - static_cast<std::size_t>(m), t, h, opt.fit, warm);
            warm = wf.params;
            const double e = wf.sigma_bar - realized_bar(s, t, h);
            acc += e * e;
        }
        const double v = acc / static_cast<double>(origins.size());
        res.per_m.emplace_back(m, v);
        if (v < res.amse) {
            res.amse = v;
            res.best_m = m;
        }
    }
    return res;
}

double amse1(const Series& s, const std::vector<double>& fitted_sigma2) {
    if (fitted_sigma2.size() != s.size()) throw std::invalid_argument("amse1: length mismatch");
    if (s.size() == 0) throw std::invalid_argument("amse1: empty series");
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double e = s.y[i] - fitted_sigma2[i];
        acc += e * e;
    }
    return acc / static_cast<double>(s.size());
}

std::vector<double> fitted_sigma2_constant(const Series& s, const ModelSpec& model, const VectorXd& theta) {
    if (model.family == Family::TvGARCH) return garch_sigma2_path(s.y, model.p, model.l, theta, Order::Value).sigma2;
    std::vector<double> out(s.size());
    for (std::size_t i = 1; i <= s.size(); ++i) out[i - 1] = conditional_variance(s, model, i, theta);
    return out;
}

namespace {

VectorXd interpolate(const std::vector<double>& grid, const std::vector<VectorXd>& theta, double t) {
    if (t <= grid.front()) return theta.front();
    if (t >= grid.back()) return theta.back();
    const auto it = std::upper_bound(grid.begin(), grid.end(), t);
    const auto hi = static_cast<std::size_t>(it - grid.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - grid[lo]) / (grid[hi] - grid[lo]);
    return (1.0 - w) * theta[lo] + w * theta[hi];
}

}  // namespace

std::vector<double> fitted_sigma2_curve(const Series& s, const ModelSpec& model, const std::vector<double>& grid,
                                        const std::vector<VectorXd>& theta) {
    if (grid.empty() || grid.size() != theta.size()) throw std::invalid_argument("fitted_sigma2_curve: bad grid");
    const double nd = static_cast<double>(s.size());
    std::vector<double> out(s.size());
    for (std::size_t i = 1; i <= s.size(); ++i) {
        const VectorXd th = model.clamp(interpolate(grid, theta, static_cast<double>(i) / nd));
        out[i - 1] = conditional_variance(s, model, i, th);
    }
    return out;
}

std::optional<SemiTvResult> semi_tv_search(const Series& s, const ModelSpec& model, const std::vector<double>& grid,
                                           const std::vector<VectorXd>& theta, const std::vector<Band>& bands) {
    if (static_cast<int>(bands.size()) != model.dim()) {
        throw std::invalid_argument("semi_tv_search: need one componentwise band per parameter");
    }
    std::vector<int> cand;
    std::vector<double> lo, hi;
    for (int j = 0; j < model.dim(); ++j) {
        const Band& b = bands[static_cast<std::size_t>(j)];
        if (b.rank() != 1) throw std::invalid_argument("semi_tv_search: bands must be componentwise");
        if (band_rejects_constancy(b)) continue;
        double mx = -std::numeric_limits<double>::infinity(), mn = std::numeric_limits<double>::infinity();
        for (std::size_t g = 0; g < b.grid.size(); ++g) {
            if (!b.active[g]) continue;
            mx = std::max(mx, b.lower(g));
            mn = std::min(mn, b.upper(g));
        }
        cand.push_back(j);
        lo.push_back(std::max(mx, model.lower(j)));
        hi.push_back(std::min(mn, model.upper(j)));
    }
    if (cand.empty()) return std::nullopt;

    constexpr int kPts = 21;
    const std::size_t c = cand.size();
    std::size_t combos = 1;
    for (std::size_t a = 0; a < c; ++a) combos *= kPts;
    SemiTvResult best;
    best.constant_components = cand;
    best.amse1 = std::numeric_limits<double>::infinity();
    std::vector<VectorXd> th = theta;
    for (std::size_t code = 0; code < combos; ++code) {
        std::vector<double> vals(c);
        std::size_t rem = code;
        for (std::size_t a = 0; a < c; ++a) {
            const int k = static_cast<int>(rem % kPts);
            rem /= kPts;
            vals[a] = hi[a] > lo[a] ? lo[a] + (hi[a] - lo[a]) * k / (kPts - 1) : lo[a];
        }
        for (std::size_t g = 0; g < th.size(); ++g) {
            for (std::size_t a = 0; a < c; ++a) th[g](cand[a]) = vals[a];
        }
        const double v = amse1(s, fitted_sigma2_curve(s, model, grid, th));
        if (v < best.amse1) {
            best.amse1 = v;
            best.constants = vals;
        }
    }
    return best;
}

}  // namespace tvscb
