#pragma once

#include <stdexcept>
#include <vector>

#include "tvscb/fit.hpp"
#include "tvscb/kernel.hpp"
#include "tvscb/model.hpp"

namespace tvscb {

class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Q D^{1/2} Q^T with eigenvalues above -1e-10 clipped at zero. Throws
/// std::domain_error on a clearly indefinite input.
MatrixXd matrix_sqrt_psd(const MatrixXd& a);

/// Boundary-normalized kernel averages of the Hessian (V) and of the score
/// outer product (I) at theta(t) + (i/n - t) theta'(t):
///   (nb mu_{K,0,b}(t))^-1 sum K((i/n - t)/b) [...]
struct VIPair {
    MatrixXd V;
    MatrixXd I;
};
VIPair estimate_VI(const Series& s, const ModelSpec& model, const LocalFit& fit, double b,
                   const Kernel& k, bool zero_slope = false);
MatrixXd estimate_V(const Series& s, const ModelSpec& model, const LocalFit& fit, double b,
                    const Kernel& k);
MatrixXd estimate_I(const Series& s, const ModelSpec& model, const LocalFit& fit, double b,
                    const Kernel& k);

/// (C^T V^-1 I V^-1 C)^{1/2}. Throws SingularMatrixError when the smallest
/// eigenvalue of V is below 1e-10.
MatrixXd sigma_C(const MatrixXd& V, const MatrixXd& I, const MatrixXd& C);

/// (C^T I^-1 C)^{1/2}, valid when V = I (Gaussian QMLE is the true likelihood).
MatrixXd sigma_C_info(const MatrixXd& I, const MatrixXd& C);

enum class SigmaForm { Sandwich, InverseI };

struct SigmaField {
    std::vector<double> grid;
    std::vector<MatrixXd> V;
    std::vector<MatrixXd> I;
    std::vector<MatrixXd> SigmaC;
    MatrixXd C;
};

/// Per-grid-point V, I and Sigma_C from the fit at bandwidth fit.bandwidth.
SigmaField estimate_sigma_field(const Series& s, const CurveFit& fit, const Kernel& k,
                                const MatrixXd& C, SigmaForm form = SigmaForm::Sandwich,
                                int threads = 1);

/// Sigma_C for another contrast from an existing field (reuses V and I).
SigmaField with_contrast(const SigmaField& f, const MatrixXd& C, SigmaForm form = SigmaForm::Sandwich);

/// Unit vector e_j (d x 1) or the identity (d x d).
MatrixXd unit_contrast(int d, int j);
MatrixXd joint_contrast(int d);

}  // namespace tvscb
