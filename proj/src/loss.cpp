#include "tvscb/loss.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tvscb {

LossEval volatility_loss(double y, double s2, const VectorXd& ds2, const MatrixXd* d2s2, Order order) {
    LossEval out;
    out.value = 0.5 * (y / s2 + std::log(s2));
    if (order == Order::Value) return out;
    const double c = (0.5 / s2) * (1.0 - y / s2);
    out.grad = c * ds2;
    if (order == Order::Hessian) {
        const double c1 = -1.0 / (s2 * s2) + 2.0 * y / (s2 * s2 * s2);
        const double c2 = 1.0 / s2 - y / (s2 * s2);
        MatrixXd m = c1 * (ds2 * ds2.transpose());
        if (d2s2 != nullptr) m += c2 * (*d2s2);
        out.hess = 0.5 * m;
    }
    return out;
}

LossEval arch_loss(double y, const VectorXd& lags, const VectorXd& theta, Order order) {
    const Eigen::Index q = lags.size();
    if (theta.size() != q + 1) throw std::invalid_argument("arch_loss: theta must have q+1 entries");
    double s2 = theta(0);
    for (Eigen::Index j = 0; j < q; ++j) s2 += theta(j + 1) * lags(j);
    if (!(s2 >= kAlphaMin)) {
        throw std::domain_error("arch_loss: sigma^2 below alpha_min, parameter out of domain");
    }
    VectorXd g(q + 1);
    g(0) = 1.0;
    g.tail(q) = lags;
    return volatility_loss(y, s2, g, nullptr, order);
}

LossEval tvar_loss(double x, const VectorXd& lags, const VectorXd& theta, Order order) {
    const Eigen::Index p = lags.size();
    if (theta.size() != p + 1) throw std::invalid_argument("tvar_loss: theta must have p+1 entries");
    const double b0 = theta(p);
    if (!(b0 >= kAlphaMin)) {
        throw std::domain_error("tvar_loss: innovation variance below alpha_min");
    }
    const double r = x - theta.head(p).dot(lags);
    LossEval out;
    out.value = 0.5 * (r * r / b0 + std::log(b0));
    if (order == Order::Value) return out;
    out.grad.resize(p + 1);
    out.grad.head(p) = (-r / b0) * lags;
    out.grad(p) = 0.5 * (1.0 / b0 - r * r / (b0 * b0));
    if (order == Order::Hessian) {
        out.hess.resize(p + 1, p + 1);
        out.hess.topLeftCorner(p, p) = lags * lags.transpose() / b0;
        out.hess.col(p).head(p) = (r / (b0 * b0)) * lags;
        out.hess.row(p).head(p) = out.hess.col(p).head(p).transpose();
        out.hess(p, p) = -0.5 / (b0 * b0) + r * r / (b0 * b0 * b0);
    }
    return out;
}

std::size_t garch_memory_depth(const VectorXd& theta, int m, int l) {
    double sb = 0.0;
    for (int j = 1; j <= l; ++j) sb += theta(m + j);
    if (sb <= 0.0) return 0;
    if (sb >= 1.0) return std::numeric_limits<std::size_t>::max();
    return static_cast<std::size_t>(std::ceil(std::log(1e-13) / std::log(sb)));
}

namespace {

// Runs the GARCH recursion over k = start..i (1-based) at a fixed theta and
// returns sigma^2_i with its first and (optionally) second derivatives.
// sigma^2 before `start` is alpha_0 with derivative e_0.
double garch_point(const std::vector<double>& y, std::size_t i, std::size_t start, int m, int l,
                   const VectorXd& theta, Order order, VectorXd& g_out, MatrixXd& h_out) {
    const int d = 1 + m + l;
    const bool want_g = order != Order::Value;
    const bool want_h = order == Order::Hessian;
    const double a0 = theta(0);
    const auto L = static_cast<std::size_t>(l);

    std::vector<double> s(L, a0);
    std::vector<double> g(want_g ? L * d : 0, 0.0);
    std::vector<double> h(want_h ? L * d * d : 0, 0.0);
    if (want_g) {
        for (std::size_t r = 0; r < L; ++r) g[r * d] = 1.0;
    }
    std::vector<double> gk(want_g ? d : 0), hk(want_h ? d * d : 0);

    double sk = a0;
    for (std::size_t k = start; k <= i; ++k) {
        sk = a0;
        for (int j = 1; j <= m; ++j) {
            const double yl = k > static_cast<std::size_t>(j) ? y[k - 1 - j] : 0.0;
            sk += theta(j) * yl;
        }
        for (int j = 1; j <= l; ++j) sk += theta(m + j) * s[(k + L - j) % L];

        if (want_g) {
            std::fill(gk.begin(), gk.end(), 0.0);
            gk[0] = 1.0;
            for (int j = 1; j <= m; ++j) gk[j] = k > static_cast<std::size_t>(j) ? y[k - 1 - j] : 0.0;
            for (int j = 1; j <= l; ++j) gk[m + j] = s[(k + L - j) % L];
            for (int j = 1; j <= l; ++j) {
                const double bj = theta(m + j);
                const double* gp = &g[((k + L - j) % L) * d];
                for (int a = 0; a < d; ++a) gk[a] += bj * gp[a];
            }
        }
        if (want_h) {
            std::fill(hk.begin(), hk.end(), 0.0);
            for (int j = 1; j <= l; ++j) {
                const int bj_idx = m + j;
                const double bj = theta(bj_idx);
                const std::size_t slot = (k + L - j) % L;
                const double* gp = &g[slot * d];
                const double* hp = &h[slot * d * d];
                for (int a = 0; a < d; ++a) {
                    hk[bj_idx * d + a] += gp[a];
                    hk[a * d + bj_idx] += gp[a];
                }
                for (int a = 0; a < d * d; ++a) hk[a] += bj * hp[a];
            }
        }
        const std::size_t slot = k % L;
        s[slot] = sk;
        if (want_g) std::copy(gk.begin(), gk.end(), g.begin() + static_cast<std::ptrdiff_t>(slot * d));
        if (want_h) {
            std::copy(hk.begin(), hk.end(), h.begin() + static_cast<std::ptrdiff_t>(slot * d * d));
        }
    }
    if (want_g) g_out = Eigen::Map<const VectorXd>(gk.data(), d);
    if (want_h) h_out = Eigen::Map<const Eigen::Matrix<double, -1, -1, Eigen::RowMajor>>(hk.data(), d, d);
    return sk;
}

}  // namespace

GarchState garch_sigma2_path(const std::vector<double>& y, int m, int l, const VectorXd& theta,
                             Order order) {
    const int d = 1 + m + l;
    if (theta.size() != d) throw std::invalid_argument("garch_sigma2_path: theta has wrong size");
    const std::size_t n = y.size();
    GarchState st;
    st.sigma2.resize(n);
    const bool want_g = order != Order::Value;
    const bool want_h = order == Order::Hessian;
    if (want_g) st.dsigma2.resize(d, static_cast<Eigen::Index>(n));
    if (want_h) st.d2sigma2.resize(n);

    auto S = [&](std::size_t k) { return k >= 1 ? st.sigma2[k - 1] : theta(0); };
    VectorXd e0 = VectorXd::Zero(d);
    e0(0) = 1.0;
    const MatrixXd zero = MatrixXd::Zero(d, d);
    for (std::size_t k = 1; k <= n; ++k) {
        double sk = theta(0);
        for (int j = 1; j <= m; ++j) sk += theta(j) * (k > static_cast<std::size_t>(j) ? y[k - 1 - j] : 0.0);
        for (int j = 1; j <= l; ++j) sk += theta(m + j) * (k > static_cast<std::size_t>(j) ? S(k - j) : theta(0));
        st.sigma2[k - 1] = sk;
        if (want_g) {
            VectorXd gk = e0;
            for (int j = 1; j <= m; ++j) gk(j) = k > static_cast<std::size_t>(j) ? y[k - 1 - j] : 0.0;
            for (int j = 1; j <= l; ++j) {
                const bool in = k > static_cast<std::size_t>(j);
                gk(m + j) = in ? S(k - j) : theta(0);
                gk += theta(m + j) * (in ? VectorXd(st.dsigma2.col(static_cast<Eigen::Index>(k - j - 1))) : e0);
            }
            if (want_h) {
                MatrixXd hk = zero;
                for (int j = 1; j <= l; ++j) {
                    const bool in = k > static_cast<std::size_t>(j);
                    const VectorXd gp = in ? VectorXd(st.dsigma2.col(static_cast<Eigen::Index>(k - j - 1))) : e0;
                    hk.row(m + j) += gp.transpose();
                    hk.col(m + j) += gp;
                    if (in) hk += theta(m + j) * st.d2sigma2[k - j - 1];
                }
                st.d2sigma2[k - 1] = hk;
            }
            st.dsigma2.col(static_cast<Eigen::Index>(k - 1)) = gk;
        }
    }
    return st;
}

LossEval garch_loss(std::size_t i, const GarchState& state, double y_i, Order order) {
    if (i < 1 || i > state.sigma2.size()) throw std::out_of_range("garch_loss: index out of range");
    const double s2 = state.sigma2[i - 1];
    if (!(s2 >= kAlphaMin)) throw std::domain_error("garch_loss: sigma^2 below alpha_min");
    if (order == Order::Value) return volatility_loss(y_i, s2, VectorXd(), nullptr, order);
    if (state.dsigma2.cols() < static_cast<Eigen::Index>(i)) {
        throw std::invalid_argument("garch_loss: state was computed without derivatives");
    }
    const VectorXd g = state.dsigma2.col(static_cast<Eigen::Index>(i - 1));
    if (order == Order::Hessian) {
        if (state.d2sigma2.size() < i) {
            throw std::invalid_argument("garch_loss: state was computed without second derivatives");
        }
        return volatility_loss(y_i, s2, g, &state.d2sigma2[i - 1], order);
    }
    return volatility_loss(y_i, s2, g, nullptr, order);
}

LossEval observation_loss(const Series& s, const ModelSpec& model, std::size_t i,
                          const VectorXd& theta, Order order) {
    const std::size_t n = s.size();
    if (i < 1 || i > n) throw std::out_of_range("observation_loss: index out of range");
    switch (model.family) {
        case Family::TvAR: {
            VectorXd lags(model.p);
            for (int j = 1; j <= model.p; ++j) {
                lags(j - 1) = i > static_cast<std::size_t>(j) ? s.x[i - 1 - j] : 0.0;
            }
            return tvar_loss(s.x[i - 1], lags, theta, order);
        }
        case Family::TvARCH: {
            VectorXd lags(model.p);
            for (int j = 1; j <= model.p; ++j) {
                lags(j - 1) = i > static_cast<std::size_t>(j) ? s.y[i - 1 - j] : 0.0;
            }
            return arch_loss(s.y[i - 1], lags, theta, order);
        }
        case Family::TvGARCH: {
            const std::size_t depth = garch_memory_depth(theta, model.p, model.l);
            const std::size_t start = depth < i ? i - depth : 1;
            VectorXd g;
            MatrixXd h;
            const double s2 = garch_point(s.y, i, start, model.p, model.l, theta, order, g, h);
            if (!(s2 >= kAlphaMin)) throw std::domain_error("garch: sigma^2 below alpha_min");
            return volatility_loss(s.y[i - 1], s2, g, order == Order::Hessian ? &h : nullptr, order);
        }
    }
    throw std::invalid_argument("observation_loss: unknown family");
}

double conditional_variance(const Series& s, const ModelSpec& model, std::size_t i, const VectorXd& theta) {
    if (i < 1 || i > s.size()) throw std::out_of_range("conditional_variance: index out of range");
    switch (model.family) {
        case Family::TvAR: return theta(model.p);
        case Family::TvARCH: {
            double s2 = theta(0);
            for (int j = 1; j <= model.p; ++j) s2 += theta(j) * (i > static_cast<std::size_t>(j) ? s.y[i - 1 - j] : 0.0);
            return s2;
        }
        case Family::TvGARCH: {
            const std::size_t depth = garch_memory_depth(theta, model.p, model.l);
            const std::size_t start = depth < i ? i - depth : 1;
            VectorXd g;
            MatrixXd h;
            return garch_point(s.y, i, start, model.p, model.l, theta, Order::Value, g, h);
        }
    }
    throw std::invalid_argument("conditional_variance: unknown family");
}

Window kernel_window(std::size_t n, double t, double b, const Kernel& k) {
    (void)k;  // all kernels here are supported on [-1, 1]
    const double nd = static_cast<double>(n);
    const double lo = std::ceil((t - b) * nd);
    const double hi = std::floor((t + b) * nd);
    Window w;
    w.first = static_cast<std::size_t>(std::max(1.0, lo));
    w.last = static_cast<std::size_t>(std::max(0.0, std::min(nd, hi)));
    return w;
}

LossEval local_objective(const Series& s, const ModelSpec& model, const Kernel& k, double t,
                         double b, const VectorXd& theta, const VectorXd& theta_prime, Order order,
                         std::optional<std::size_t> leave_out) {
    const int d = model.dim();
    if (theta.size() != d || theta_prime.size() != d) {
        throw std::invalid_argument("local_objective: parameter size does not match the model");
    }
    if (!(b > 0.0)) throw std::invalid_argument("local_objective: bandwidth must be positive");
    const std::size_t n = s.size();
    const double nd = static_cast<double>(n);
    const Window win = kernel_window(n, t, b, k);

    LossEval out;
    if (order != Order::Value) out.grad = VectorXd::Zero(2 * d);
    if (order == Order::Hessian) out.hess = MatrixXd::Zero(2 * d, 2 * d);
    bool any = false;
    for (std::size_t i = win.first; i <= win.last; ++i) {
        if (leave_out && *leave_out == i) continue;
        const double u = static_cast<double>(i) / nd - t;
        const double w = k(u / b) / (nd * b);
        if (w == 0.0) continue;
        any = true;
        const VectorXd ti = theta + u * theta_prime;
        const VectorXd tc = model.clamp(ti);
        const VectorXd gap = ti - tc;
        const LossEval e = observation_loss(s, model, i, tc, order);
        out.value += w * (e.value + kBoxPenalty * gap.squaredNorm());
        if (order == Order::Value) continue;

        VectorXd g = e.grad;
        for (int a = 0; a < d; ++a) {
            if (gap(a) != 0.0) g(a) = 0.0;
        }
        g += 2.0 * kBoxPenalty * gap;
        out.grad.head(d) += w * g;
        out.grad.tail(d) += (w * u) * g;
        if (order == Order::Hessian) {
            MatrixXd h = e.hess;
            for (int a = 0; a < d; ++a) {
                if (gap(a) != 0.0) {
                    h.row(a).setZero();
                    h.col(a).setZero();
                    h(a, a) = 2.0 * kBoxPenalty;
                }
            }
            out.hess.topLeftCorner(d, d) += w * h;
            out.hess.topRightCorner(d, d) += (w * u) * h;
            out.hess.bottomRightCorner(d, d) += (w * u * u) * h;
        }
    }
    if (!any) throw std::invalid_argument("local_objective: empty kernel window");
    if (order == Order::Hessian) {
        out.hess.bottomLeftCorner(d, d) = out.hess.topRightCorner(d, d).transpose();
    }
    return out;
}

}  // namespace tvscb
