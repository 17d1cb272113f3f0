#include "tvscb/covar.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "tvscb/loss.hpp"
#include "tvscb/parallel.hpp"

namespace tvscb {

MatrixXd matrix_sqrt_psd(const MatrixXd& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("matrix_sqrt_psd: matrix must be square");
    const MatrixXd sym = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym);
    VectorXd lam = es.eigenvalues();
    const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
    if (lam.minCoeff() < -1e-10 * scale) {
        throw std::domain_error("matrix_sqrt_psd: matrix has a negative eigenvalue");
    }
    lam = lam.cwiseMax(0.0).cwiseSqrt();
    const MatrixXd& Q = es.eigenvectors();
    const MatrixXd r = Q * lam.asDiagonal() * Q.transpose();
    return 0.5 * (r + r.transpose());
}

VIPair estimate_VI(const Series& s, const ModelSpec& model, const LocalFit& fit, double b,
                   const Kernel& k, bool zero_slope) {
    const int d = model.dim();
    const std::size_t n = s.size();
    const double nd = static_cast<double>(n);
    const double t = fit.t;
    const Window win = kernel_window(n, t, b, k);
    VIPair out{MatrixXd::Zero(d, d), MatrixXd::Zero(d, d)};
    for (std::size_t i = win.first; i <= win.last; ++i) {
        const double u = static_cast<double>(i) / nd - t;
        const double w = k(u / b);
        if (w == 0.0) continue;
        VectorXd th = fit.theta;
        if (!zero_slope) th += u * fit.theta_prime;
        th = model.clamp(th);
        const LossEval e = observation_loss(s, model, i, th, Order::Hessian);
        if (!e.hess.allFinite() || !e.grad.allFinite()) {
            throw std::runtime_error("estimate_VI: non-finite derivative at index " + std::to_string(i));
        }
        out.V += w * e.hess;
        out.I += w * (e.grad * e.grad.transpose());
    }
    const double norm = nd * b * truncated_moment(k, 0, b, t);
    out.V /= norm;
    out.I /= norm;
    out.V = (0.5 * (out.V + out.V.transpose())).eval();
    out.I = (0.5 * (out.I + out.I.transpose())).eval();
    return out;
}

MatrixXd estimate_V(const Series& s, const ModelSpec& model, const LocalFit& fit, double b,
                    const Kernel& k) {
    return estimate_VI(s, model, fit, b, k).V;
}

MatrixXd estimate_I(const Series& s, const ModelSpec& model, const LocalFit& fit, double b,
                    const Kernel& k) {
    return estimate_VI(s, model, fit, b, k).I;
}

namespace {

MatrixXd checked_inverse(const MatrixXd& m, const char* what) {
    const MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym);
    if (!(es.eigenvalues().minCoeff() > 1e-10)) {
        throw SingularMatrixError(std::string(what) +
                                  " is singular (min eigenvalue <= 1e-10); try a larger bandwidth");
    }
    const MatrixXd& Q = es.eigenvectors();
    return Q * es.eigenvalues().cwiseInverse().asDiagonal() * Q.transpose();
}

}  // namespace

MatrixXd sigma_C(const MatrixXd& V, const MatrixXd& I, const MatrixXd& C) {
    if (V.rows() != C.rows() || I.rows() != C.rows()) {
        throw std::invalid_argument("sigma_C: contrast rows must match the parameter dimension");
    }
    const MatrixXd vi = checked_inverse(V, "V");
    const MatrixXd a = C.transpose() * vi * I * vi * C;
    return matrix_sqrt_psd(0.5 * (a + a.transpose()));
}

MatrixXd sigma_C_info(const MatrixXd& I, const MatrixXd& C) {
    if (I.rows() != C.rows()) {
        throw std::invalid_argument("sigma_C_info: contrast rows must match the parameter dimension");
    }
    const MatrixXd a = C.transpose() * checked_inverse(I, "I") * C;
    return matrix_sqrt_psd(0.5 * (a + a.transpose()));
}

SigmaField estimate_sigma_field(const Series& s, const CurveFit& fit, const Kernel& k,
                                const MatrixXd& C, SigmaForm form, int threads) {
    SigmaField f;
    f.grid = fit.grid;
    f.C = C;
    const std::size_t G = fit.grid.size();
    f.V.resize(G);
    f.I.resize(G);
    parallel_for(G, threads, [&](std::size_t g) {
        const VIPair vi = estimate_VI(s, fit.model, fit.fits[g], fit.bandwidth, k);
        f.V[g] = vi.V;
        f.I[g] = vi.I;
    });
    return with_contrast(f, C, form);
}

SigmaField with_contrast(const SigmaField& src, const MatrixXd& C, SigmaForm form) {
    SigmaField f = src;
    f.C = C;
    f.SigmaC.resize(f.grid.size());
    for (std::size_t g = 0; g < f.grid.size(); ++g) {
        f.SigmaC[g] = form == SigmaForm::Sandwich ? sigma_C(f.V[g], f.I[g], C) : sigma_C_info(f.I[g], C);
    }
    return f;
}

MatrixXd unit_contrast(int d, int j) {
    if (j < 0 || j >= d) throw std::invalid_argument("unit_contrast: index out of range");
    MatrixXd c = MatrixXd::Zero(d, 1);
    c(j, 0) = 1.0;
    return c;
}

MatrixXd joint_contrast(int d) { return MatrixXd::Identity(d, d); }

}  // namespace tvscb
