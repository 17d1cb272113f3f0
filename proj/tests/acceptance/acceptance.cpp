// Acceptance runner. Usage: tvscb_acceptance [criterion ...]
// Prints one "criterion N: PASS|FAIL ..." line per requested criterion and
// exits non-zero if any of them failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "tvscb/bands.hpp"
#include "tvscb/cli.hpp"
#include "tvscb/fit.hpp"
#include "tvscb/forecast.hpp"
#include "tvscb/kernel.hpp"
#include "tvscb/loss.hpp"
#include "tvscb/mc.hpp"
#include "tvscb/simulate.hpp"

using namespace tvscb;

namespace {

// Tolerances and targets.
constexpr double kKernelTol = 1e-8;
constexpr double kGumbelTol = 1e-3;
constexpr double kDerivTolVolatility = 1e-5;  // GARCH
constexpr double kDerivTolSimple = 1e-6;      // ARCH, AR
constexpr double kOracleTol = 1e-4;
constexpr double kReductionTol = 1e-12;
constexpr double kArchCoverageTol = 0.07;
constexpr double kGarchCoverageTol = 0.10;
constexpr double kGumbelGap = 0.30;
constexpr double kBootstrapJointMin = 0.75;
constexpr double kRejectMin = 0.50;
constexpr double kRejectMaxNull = 0.10;
constexpr double kPilotRelTol = 1e-3;

// Forecast pilot (arch-tv, n = 2000, seed 20240611, start 500, stride 10).
struct ForecastPilot {
    int h;
    double tc;
    double tv;
};
constexpr ForecastPilot kForecastPilot[] = {{25, 1.82475195, 0.62786203}, {50, 1.68977712, 0.448637522}};

int threads_from_env() {
    if (const char* e = std::getenv("TVSCB_THREADS")) {
        const int t = std::atoi(e);
        if (t > 0) return t;
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

struct Verdict {
    bool pass;
    std::string detail;
};

std::string fmt(double v, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

std::string tuple(const std::vector<double>& v, int prec = 3) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i], prec);
    return s + ")";
}

// ---------------------------------------------------------------- 1

Verdict kernel_constants() {
    const Kernel k = Kernel::epanechnikov();
    const Kernel kt = Kernel::jackknife();
    const auto ep = [](double x) { return 0.75 * (1 - x * x); };
    const auto jk = [&](double x) {
        const double r = std::sqrt(2.0) * x;
        return 2 * std::sqrt(2.0) * (std::abs(r) <= 1 ? ep(r) : 0.0) - ep(x);
    };
    const std::vector<double> brk = {-1 / std::sqrt(2.0), 1 / std::sqrt(2.0)};
    struct Row {
        const char* name;
        double quad;
        double lib;
        double exact;
    };
    const std::vector<Row> rows = {
        {"mu0", integrate(ep, -1, 1), kernel_moment(k, 0), 1.0},
        {"mu2", integrate([&](double x) { return ep(x) * x * x; }, -1, 1), kernel_moment(k, 2), 0.2},
        {"sigma2_0", integrate([&](double x) { return ep(x) * ep(x); }, -1, 1), kernel_moment(k, 0, true), 0.6},
        {"int Kt", integrate(jk, -1, 1, brk), kernel_moment(kt, 0), 1.0},
        {"int Kt x^2", integrate([&](double x) { return jk(x) * x * x; }, -1, 1, brk), kernel_moment(kt, 2), 0.0},
    };
    double worst = 0.0;
    for (const Row& r : rows) worst = std::max({worst, std::abs(r.quad - r.exact), std::abs(r.lib - r.exact)});

    // B_K and C_K by hand for s = 1, b = 0.1: int K'^2 = 1.5, sigma^2 = 0.6,
    // Gamma(1/2) = sqrt(pi), m* = 10.
    const double ck = std::sqrt(1.5 / (0.6 * std::numbers::pi)) / std::sqrt(std::numbers::pi);
    const double root = std::sqrt(2 * std::log(10.0));
    const double bk = root + (std::log(ck) - std::log(2.0)) / root;
    const GumbelConstants g = gumbel_constants(k, 1, 0.1);
    const bool ok = worst <= kKernelTol && std::abs(g.B - bk) <= kGumbelTol && std::abs(g.C_K - ck) <= kGumbelTol &&
                    std::abs(g.B - 1.503) <= kGumbelTol && std::abs(g.C_K - 0.5033) <= kGumbelTol;
    return {ok, "max moment error " + fmt(worst, 2) + ", B_K " + fmt(g.B, 6) + " (hand " + fmt(bk, 6) + "), C_K " +
                    fmt(g.C_K, 6) + " (hand " + fmt(ck, 6) + ")"};
}

// ---------------------------------------------------------------- 2

// `piece` labels the smooth piece a point lies on (the GARCH truncation
// depth); the difference step is halved until the stencil stays on one piece.
double derivative_error(const std::function<LossEval(const VectorXd&, Order)>& f, const VectorXd& x,
                        const std::function<std::size_t(const VectorXd&)>& piece = {}) {
    const LossEval e = f(x, Order::Hessian);
    const auto d = x.size();
    VectorXd fg(d);
    MatrixXd fh(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        double h = 1e-5 * std::max(1.0, std::abs(x(j)));
        for (int k = 0; piece && k < 20; ++k, h *= 0.5) {
            VectorXd xp = x, xm = x;
            xp(j) += h;
            xm(j) -= h;
            if (piece(xp) == piece(x) && piece(xm) == piece(x)) break;
        }
        VectorXd xp = x, xm = x;
        xp(j) += h;
        xm(j) -= h;
        fg(j) = (f(xp, Order::Value).value - f(xm, Order::Value).value) / (2 * h);
        fh.col(j) = (f(xp, Order::Gradient).grad - f(xm, Order::Gradient).grad) / (2 * h);
    }
    const double gs = std::max(1e-3, e.grad.cwiseAbs().maxCoeff());
    const double hs = std::max(1e-3, e.hess.cwiseAbs().maxCoeff());
    return std::max((e.grad - fg).cwiseAbs().maxCoeff() / gs, (e.hess - fh).cwiseAbs().maxCoeff() / hs);
}

Verdict gradient_suite() {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto unif = [&](double a, double b) { return a + (b - a) * U(rng); };
    auto pick = [&](int lo, int hi) { return lo + static_cast<int>(U(rng) * (hi - lo + 1)) % (hi - lo + 1); };
    std::map<std::string, double> worst = {{"ar", 0.0}, {"arch", 0.0}, {"garch", 0.0}};
    const std::size_t n = 250;
    for (int r = 0; r < 100; ++r) {
        const auto seed = static_cast<std::uint64_t>(r) + 1;
        {
            const int p = pick(1, 3);
            const ModelSpec m = ModelSpec::ar(p);
            std::vector<CurveComponent> cc;
            for (int j = 0; j < p; ++j) cc.push_back(CurveComponent::constant(unif(-0.6, 0.6) / p));
            cc.push_back(CurveComponent::constant(unif(0.5, 2.0)));
            const Series s = simulate(ParamCurves(m, cc), n, seed).series;
            VectorXd th(p + 1);
            for (int j = 0; j < p; ++j) th(j) = unif(-0.8, 0.8);
            th(p) = unif(0.3, 3.0);
            const auto i = static_cast<std::size_t>(pick(1, static_cast<int>(n)));
            worst["ar"] = std::max(
                worst["ar"], derivative_error([&](const VectorXd& x, Order o) { return observation_loss(s, m, i, x, o); }, th));
        }
        {
            const int q = pick(1, 3);
            const ModelSpec m = ModelSpec::arch(q);
            std::vector<CurveComponent> cc = {CurveComponent::constant(unif(0.5, 2.0))};
            for (int j = 0; j < q; ++j) cc.push_back(CurveComponent::constant(unif(0.05, 0.6) / q));
            const Series s = simulate(ParamCurves(m, cc), n, seed).series;
            VectorXd th(q + 1);
            th(0) = unif(0.2, 3.0);
            for (int j = 1; j <= q; ++j) th(j) = unif(0.0, 0.8);
            const auto i = static_cast<std::size_t>(pick(1, static_cast<int>(n)));
            worst["arch"] = std::max(worst["arch"], derivative_error([&](const VectorXd& x, Order o) {
                                         return observation_loss(s, m, i, x, o);
                                     }, th));
        }
        {
            const int mm = pick(1, 2), ll = pick(1, 2);
            const ModelSpec m = ModelSpec::garch(mm, ll);
            std::vector<CurveComponent> cc = {CurveComponent::constant(unif(0.5, 2.0))};
            for (int j = 0; j < mm; ++j) cc.push_back(CurveComponent::constant(unif(0.02, 0.3) / mm));
            for (int j = 0; j < ll; ++j) cc.push_back(CurveComponent::constant(unif(0.05, 0.6) / ll));
            const Series s = simulate(ParamCurves(m, cc), n, seed).series;
            VectorXd th(1 + mm + ll);
            th(0) = unif(0.2, 3.0);
            for (int j = 1; j <= mm; ++j) th(j) = unif(0.0, 0.5) / mm;
            for (int j = 0; j < ll; ++j) th(1 + mm + j) = unif(0.0, 0.9) / ll;
            const auto i = static_cast<std::size_t>(pick(1, static_cast<int>(n)));
            worst["garch"] = std::max(
                worst["garch"],
                derivative_error([&](const VectorXd& x, Order o) { return observation_loss(s, m, i, x, o); }, th,
                                 [&](const VectorXd& x) { return garch_memory_depth(x, mm, ll); }));
        }
    }
    const bool ok = worst["ar"] <= kDerivTolSimple && worst["arch"] <= kDerivTolSimple &&
                    worst["garch"] <= kDerivTolVolatility;
    return {ok, "worst relative error ar " + fmt(worst["ar"], 2) + ", arch " + fmt(worst["arch"], 2) + ", garch " +
                    fmt(worst["garch"], 2)};
}

// ---------------------------------------------------------------- 3

// Mean Gaussian quasi log-likelihood, written from the model equations with
// x_0 = 0 and sigma^2_0 = alpha_0.
double qnll(const std::vector<double>& x, const std::vector<double>& th, bool garch) {
    const double a0 = th[0], a1 = th[1], b1 = garch ? th[2] : 0.0;
    if (a0 <= 0 || a1 < 0 || a1 > 1.5 || b1 < 0 || b1 >= 0.995) return INFINITY;
    double prev_y = 0.0, prev_s2 = a0, v = 0.0;
    for (double xi : x) {
        const double s2 = a0 + a1 * prev_y + b1 * prev_s2;
        v += 0.5 * (xi * xi / s2 + std::log(s2));
        prev_y = xi * xi;
        prev_s2 = s2;
    }
    return v / static_cast<double>(x.size());
}

// Plain Nelder-Mead with restarts, then Newton polishing on finite
// differences.
std::vector<double> oracle_qmle(const std::vector<double>& x, std::vector<double> p, bool garch) {
    const auto f = [&](const std::vector<double>& v) { return qnll(x, v, garch); };
    const std::size_t d = p.size();
    double best = f(p);
    for (int restart = 0; restart < 30; ++restart) {
        std::vector<std::vector<double>> s(d + 1, p);
        std::vector<double> fv(d + 1);
        for (std::size_t j = 0; j < d; ++j) s[j + 1][j] += 0.05 * std::max(0.1, std::abs(p[j]));
        for (std::size_t j = 0; j <= d; ++j) fv[j] = f(s[j]);
        for (int it = 0; it < 5000; ++it) {
            std::vector<std::size_t> o(d + 1);
            for (std::size_t j = 0; j <= d; ++j) o[j] = j;
            std::sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
            const std::size_t lo = o[0], hi = o[d], nh = o[d - 1];
            if (fv[hi] - fv[lo] < 1e-15) break;
            std::vector<double> c(d, 0.0);
            for (std::size_t j = 0; j <= d; ++j) {
                if (j == hi) continue;
                for (std::size_t k = 0; k < d; ++k) c[k] += s[j][k] / d;
            }
            auto along = [&](double t) {
                std::vector<double> r(d);
                for (std::size_t k = 0; k < d; ++k) r[k] = c[k] + t * (s[hi][k] - c[k]);
                return r;
            };
            const auto xr = along(-1.0);
            const double fr = f(xr);
            if (fr < fv[lo]) {
                const auto xe = along(-2.0);
                const double fe = f(xe);
                if (fe < fr) {
                    s[hi] = xe;
                    fv[hi] = fe;
                } else {
                    s[hi] = xr;
                    fv[hi] = fr;
                }
            } else if (fr < fv[nh]) {
                s[hi] = xr;
                fv[hi] = fr;
            } else {
                const auto xc = along(fr < fv[hi] ? -0.5 : 0.5);
                const double fc = f(xc);
                if (fc < std::min(fr, fv[hi])) {
                    s[hi] = xc;
                    fv[hi] = fc;
                } else {
                    for (std::size_t j = 0; j <= d; ++j) {
                        if (j == lo) continue;
                        for (std::size_t k = 0; k < d; ++k) s[j][k] = s[lo][k] + 0.5 * (s[j][k] - s[lo][k]);
                        fv[j] = f(s[j]);
                    }
                }
            }
        }
        const std::size_t arg = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
        const bool improved = fv[arg] < best - 1e-15;
        if (fv[arg] <= best) {
            best = fv[arg];
            p = s[arg];
        }
        if (!improved && restart > 2) break;
    }
    for (int it = 0; it < 5; ++it) {
        const double h = 1e-5;
        Eigen::VectorXd g(static_cast<Eigen::Index>(d));
        Eigen::MatrixXd H(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        auto fat = [&](std::size_t a, double da, std::size_t b, double db) {
            auto q = p;
            q[a] += da;
            q[b] += db;
            return f(q);
        };
        for (std::size_t a = 0; a < d; ++a) {
            g(static_cast<Eigen::Index>(a)) = (fat(a, h, a, 0) - fat(a, -h, a, 0)) / (2 * h);
            for (std::size_t b = 0; b < d; ++b) {
                H(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                    (fat(a, h, b, h) - fat(a, h, b, -h) - fat(a, -h, b, h) + fat(a, -h, b, -h)) / (4 * h * h);
            }
        }
        const Eigen::VectorXd step = H.ldlt().solve(g);
        auto q = p;
        for (std::size_t a = 0; a < d; ++a) q[a] -= step(static_cast<Eigen::Index>(a));
        if (!(f(q) <= f(p))) break;
        p = q;
    }
    return p;
}

Verdict oracle_equivalence() {
    struct Case {
        const char* name;
        ParamCurves design;
        bool garch;
    };
    const std::vector<Case> cases = {
        {"arch(1)", design_by_name("arch-const"), false},
        {"garch(1,1)",
         ParamCurves(ModelSpec::garch(1, 1), {CurveComponent::constant(1.0), CurveComponent::constant(0.3),
                                              CurveComponent::constant(0.4)}),
         true},
    };
    bool ok = true;
    std::string detail;
    for (const Case& c : cases) {
        const Series s = simulate(c.design, 1000, 31).series;
        double var = 0.0;
        for (double v : s.x) var += v * v / static_cast<double>(s.size());
        std::vector<double> start = {0.5 * var, 0.2};
        if (c.garch) start.push_back(0.2);
        const std::vector<double> oracle = oracle_qmle(s.x, start, c.garch);
        double worst = 0.0;
        for (double b : {1.0, 2.0}) {
            FitOptions fo;
            fo.freeze_slope = true;
            const LocalFit lf = fit_local(s, 0.5, b, c.design.model, Kernel::uniform(), std::nullopt, fo);
            if (!lf.converged) ok = false;
            for (std::size_t j = 0; j < oracle.size(); ++j) {
                worst = std::max(worst, std::abs(lf.theta(static_cast<Eigen::Index>(j)) - oracle[j]));
            }
        }
        ok = ok && worst <= kOracleTol;
        detail += std::string(detail.empty() ? "" : ", ") + c.name + " max |diff| " + fmt(worst, 2);
    }
    return {ok, detail};
}

// ---------------------------------------------------------------- 4, 5

Verdict coverage_vs_paper(const std::string& design, std::size_t n, double b, double alpha, int reps,
                          const std::vector<double>& paper, double tol, int threads) {
    McOptions o;
    o.threads = threads;
    o.boot_reps = 500;
    const auto r = coverage_experiment(design_by_name(design), design, n, {b}, {alpha}, reps,
                                       {BandMethod::BootstrapDebias}, kDefaultSeed, o)
                       .front();
    bool ok = r.coverage.size() == paper.size();
    double worst = 0.0;
    for (std::size_t j = 0; ok && j < paper.size(); ++j) worst = std::max(worst, std::abs(r.coverage[j] - paper[j]));
    ok = ok && worst <= tol;
    return {ok, design + " n=" + std::to_string(n) + " b=" + fmt(b) + " coverage " + tuple(r.coverage) +
                    " vs paper " + tuple(paper) + ", max |diff| " + fmt(worst, 3) + " (tol " + fmt(tol) +
                    "), effective " + std::to_string(r.effective) + "/" + std::to_string(reps)};
}

// ---------------------------------------------------------------- 6

Verdict gumbel_failure(int threads) {
    McOptions o;
    o.threads = threads;
    o.boot_reps = 500;
    const PairedReport p =
        compare_gumbel_bootstrap(design_garch_boot(), "garch-boot", 1000, 0.3, 0.1, 100, kDefaultSeed, o);
    const double bj = p.bootstrap.coverage.back(), gj = p.gumbel.coverage.back();
    const bool ok = gj <= bj - kGumbelGap && bj >= kBootstrapJointMin;
    return {ok, "bootstrap " + tuple(p.bootstrap.coverage) + ", gumbel " + tuple(p.gumbel.coverage) +
                    "; need gumbel joint <= bootstrap joint - " + fmt(kGumbelGap) + " and bootstrap joint >= " +
                    fmt(kBootstrapJointMin)};
}

// ---------------------------------------------------------------- 7

Verdict interior_reduction() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::normal_distribution<double> N(0.0, 1.0);
    const Kernel k = Kernel::epanechnikov();
    double worst = 0.0;
    for (int r = 0; r < 1000; ++r) {
        const std::size_t n = 100 + static_cast<std::size_t>(U(rng) * 1900);
        const double b = 0.05 + 0.45 * U(rng);
        const double t = b + (1 - 2 * b) * U(rng);
        std::vector<double> v(n);
        for (double& e : v) e = N(rng);
        const MatrixXd A = debias_weights(n, b, k, {t});
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i) w += A(0, static_cast<Eigen::Index>(i)) * v[i];
        // Q^(0)_h(t) = (nh)^-1 sum_i K((i/n - t)/h) V_i
        auto q0 = [&](double h) {
            double acc = 0.0;
            for (std::size_t i = 1; i <= n; ++i) {
                const double x = (static_cast<double>(i) / static_cast<double>(n) - t) / h;
                if (std::abs(x) < 1) acc += 0.75 * (1 - x * x) * v[i - 1];
            }
            return acc / (static_cast<double>(n) * h);
        };
        worst = std::max(worst, std::abs(w - (2 * q0(b / std::sqrt(2.0)) - q0(b))));
    }
    return {worst <= kReductionTol, "max |W - (2 Q_{b/sqrt2} - Q_b)| " + fmt(worst, 2) + " over 1000 draws"};
}

// ---------------------------------------------------------------- 8

std::string cli_output(std::vector<std::string> args) {
    args.insert(args.begin(), "tvscb");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return std::to_string(code) + "\n" + out.str();
}

Verdict determinism() {
    std::vector<std::string> failed;
    auto expect = [&](bool same, const std::string& what) {
        if (!same) failed.push_back(what);
    };

    const SimulatedPath a = simulate(design_garch_boot(), 1500, 99), b = simulate(design_garch_boot(), 1500, 99);
    expect(a.series.x == b.series.x && a.sigma2 == b.sigma2, "simulate");

    const auto grid = default_grid(0.3);
    const Kernel k = Kernel::epanechnikov();
    const auto q1 = bootstrap_sup_quantile(1000, 0.3, k, 3, 500, 0.1, 5, grid, 1);
    const auto q8 = bootstrap_sup_quantile(1000, 0.3, k, 3, 500, 0.1, 5, grid, 8);
    const auto q8b = bootstrap_sup_quantile(1000, 0.3, k, 3, 500, 0.1, 5, grid, 8);
    expect(q1.draws == q8.draws && q8.draws == q8b.draws, "bootstrap");

    FitOptions fo;
    fo.chunks = 8;
    fo.threads = 1;
    const CurveFit f1 = fit_curve(a.series, 0.3, grid, design_garch_boot().model, k, fo);
    fo.threads = 8;
    const CurveFit f8 = fit_curve(a.series, 0.3, grid, design_garch_boot().model, k, fo);
    bool same_fit = f1.discarded == f8.discarded;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        same_fit = same_fit && f1.fits[g].theta == f8.fits[g].theta && f1.fits[g].theta_prime == f8.fits[g].theta_prime;
    }
    expect(same_fit, "fit_curve");

    McOptions o;
    o.boot_reps = 200;
    o.grid_points = 51;
    o.threads = 1;
    const auto c1 = coverage_experiment(design_arch_a(), "arch-a", 400, {0.4}, {0.05, 0.1}, 8,
                                        {BandMethod::BootstrapDebias, BandMethod::Gumbel}, 3, o);
    o.threads = 8;
    const auto c8 = coverage_experiment(design_arch_a(), "arch-a", 400, {0.4}, {0.05, 0.1}, 8,
                                        {BandMethod::BootstrapDebias, BandMethod::Gumbel}, 3, o);
    bool same_cov = c1.size() == c8.size();
    for (std::size_t r = 0; same_cov && r < c1.size(); ++r) {
        same_cov = c1[r].coverage == c8[r].coverage && c1[r].effective == c8[r].effective;
    }
    expect(same_cov, "coverage");

    const std::string path = (std::filesystem::temp_directory_path() / "tvscb_accept_det.csv").string();
    const std::string s1 = cli_output({"simulate", "--design", "garch-boot", "--n", "600", "--seed", "8", "-o", path});
    const std::string s2 = cli_output({"simulate", "--design", "garch-boot", "--n", "600", "--seed", "8"});
    const std::string s3 = cli_output({"simulate", "--design", "garch-boot", "--n", "600", "--seed", "8", "--threads", "8"});
    expect(s1.rfind("0\n", 0) == 0 && s2 == s3, "cli simulate");
    for (const std::string& sub : {std::string("fit"), std::string("band")}) {
        std::vector<std::string> args = {sub, "--input", path, "--bandwidth", "0.35", "--seed", "4"};
        if (sub == "band") {
            args.insert(args.end(), {"--boot-reps", "300", "--contrast", "joint"});
        }
        auto with = [&](const char* t) {
            auto v = args;
            v.insert(v.end(), {"--threads", t});
            return cli_output(v);
        };
        const std::string one = with("1");
        expect(one.rfind("0\n", 0) == 0 && one == with("8") && one == with("8"), "cli " + sub);
    }
    const std::vector<std::string> cov = {"coverage", "--design", "arch-a", "--n", "300", "--bandwidths", "0.4",
                                          "--alphas", "0.1", "--reps", "6", "--boot-reps", "200", "--method",
                                          "both", "--seed", "2"};
    auto cov_with = [&](const char* t) {
        auto v = cov;
        v.insert(v.end(), {"--threads", t});
        return cli_output(v);
    };
    const std::string cv1 = cov_with("1");
    expect(cv1.rfind("0\n", 0) == 0 && cv1 == cov_with("8"), "cli coverage");
    std::filesystem::remove(path);

    std::string detail = failed.empty() ? "simulate, bootstrap, fit_curve, coverage and CLI outputs identical for 1 and 8 threads"
                                        : "differences in:";
    for (const auto& f : failed) detail += " " + f;
    return {failed.empty(), detail};
}

// ---------------------------------------------------------------- 9

Verdict forecasting_direction(int threads) {
    const ParamCurves c = design_by_name("arch-tv");
    const Series s = simulate(c, 2000, kDefaultSeed).series;
    AmseOptions o;
    o.m_grid = {100, 200, 300, 400, 500};
    o.stride = 10;
    o.fit.threads = threads;
    bool ok = true;
    std::string detail;
    for (const ForecastPilot& p : kForecastPilot) {
        const AmseResult tc = amse_h(s, c.model, 500, p.h, ForecastMethod::TimeConstant, o);
        const AmseResult tv = amse_h(s, c.model, 500, p.h, ForecastMethod::TimeVarying, o);
        const bool pilot_ok = std::abs(tc.amse - p.tc) <= kPilotRelTol * p.tc &&
                              tv.amse <= p.tv * (1 + kPilotRelTol);
        ok = ok && tv.amse < tc.amse && pilot_ok;
        detail += std::string(detail.empty() ? "" : "; ") + "h=" + std::to_string(p.h) + " TC " + fmt(tc.amse, 9) +
                  " TV " + fmt(tv.amse, 9) + " (m=" + std::to_string(tv.best_m) + "), pilot TC " + fmt(p.tc, 6) +
                  " TV " + fmt(p.tv, 6);
    }
    return {ok, detail};
}

// ---------------------------------------------------------------- 10

Verdict constancy_detection(int threads) {
    McOptions o;
    o.threads = threads;
    o.boot_reps = 500;
    const ConstancyReport tv = constancy_experiment(design_arch_a(), 2000, 0.35, 0.05, 50, 0, kDefaultSeed, o);
    const ConstancyReport nul =
        constancy_experiment(design_by_name("arch-const"), 2000, 0.35, 0.05, 50, 0, kDefaultSeed, o);
    const bool ok = tv.effective > 0 && nul.effective > 0 && tv.rate >= kRejectMin && nul.rate <= kRejectMaxNull;
    return {ok, "arch-a alpha0 rejects in " + std::to_string(tv.rejected) + "/" + std::to_string(tv.effective) +
                    " (need >= " + fmt(kRejectMin) + "), constant design rejects in " + std::to_string(nul.rejected) +
                    "/" + std::to_string(nul.effective) + " (need <= " + fmt(kRejectMaxNull) + ")"};
}

}  // namespace

int main(int argc, char** argv) {
    const int threads = threads_from_env();
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
    if (wanted.empty()) wanted = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

    const std::map<int, std::function<Verdict()>> criteria = {
        {1, kernel_constants},
        {2, gradient_suite},
        {3, oracle_equivalence},
        {4, [&] { return coverage_vs_paper("arch-a", 500, 0.5, 0.05, 200, {0.937, 0.914, 0.895}, kArchCoverageTol, threads); }},
        {5, [&] { return coverage_vs_paper("garch-b", 500, 0.6, 0.1, 100, {0.946, 0.815, 0.922, 0.837}, kGarchCoverageTol, threads); }},
        {6, [&] { return gumbel_failure(threads); }},
        {7, interior_reduction},
        {8, determinism},
        {9, [&] { return forecasting_direction(threads); }},
        {10, [&] { return constancy_detection(threads); }},
    };

    int failures = 0;
    for (int c : wanted) {
        const auto it = criteria.find(c);
        if (it == criteria.end()) {
            std::printf("criterion %d: FAIL unknown criterion\n", c);
            ++failures;
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = it->second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %d: %s %s [%.1fs]\n", c, v.pass ? "PASS" : "FAIL", v.detail.c_str(), secs);
        std::fflush(stdout);
        if (!v.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
