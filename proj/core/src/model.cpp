#include "tccross/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tc {

void ModelParams::validate() const {
    if (n_emitters < 1)
        throw std::invalid_argument("n_emitters must be >= 1, got " +
                                    std::to_string(n_emitters));
    if (!(coupling > 0.0))
        throw std::invalid_argument("coupling must be > 0");
    if (!std::isfinite(omega_c) || !std::isfinite(detuning) ||
        !std::isfinite(coupling))
        throw std::invalid_argument("model parameters must be finite");
}

ManifoldBasis manifold_basis(const ModelParams& params, int nu) {
    params.validate();
    if (nu < 0)
        throw std::invalid_argument("manifold label nu must be >= 0, got " +
                                    std::to_string(nu));
    const int two_j = params.two_j();
    const int dim = std::min(nu, two_j) + 1;
    ManifoldBasis basis;
    basis.nu = nu;
    basis.states.reserve(dim);
    for (int k = 0; k < dim; ++k)
        basis.states.push_back({-two_j + 2 * k, nu - k});
    return basis;
}

TridiagonalBlock hamiltonian_block(const ModelParams& params, int nu) {
    const ManifoldBasis basis = manifold_basis(params, nu);
    const int dim = basis.dim();
    const double omega_a = params.omega_a();
    const double g_coll = params.coupling / std::sqrt(params.n_emitters);

    TridiagonalBlock block;
    block.nu = nu;
    block.diag.resize(dim);
    block.offdiag.resize(dim - 1);
    for (int k = 0; k < dim; ++k) {
        const BasisState& s = basis.states[k];
        block.diag[k] = params.omega_c * s.n_photons + omega_a * (0.5 * s.two_m);
        if (k + 1 < dim) {
            // <k+1| a J_+ |k>: one photon absorbed, collective spin raised.
            block.offdiag[k] = g_coll * std::sqrt(static_cast<double>(s.n_photons)) *
                               std::sqrt(raising_strength(params.two_j(), s.two_m));
        }
    }
    return block;
}

namespace {

int dense_dim_checked(const ModelParams& params, int n_ph_max, int max_dim) {
    params.validate();
    if (n_ph_max < 0)
        throw std::invalid_argument("photon truncation must be >= 0");
    const long dim = static_cast<long>(params.two_j() + 1) * (n_ph_max + 1);
    if (dim > max_dim)
        throw std::invalid_argument("dense basis dimension " + std::to_string(dim) +
                                    " exceeds cap " + std::to_string(max_dim));
    return static_cast<int>(dim);
}

} // namespace

Eigen::MatrixXd dense_hamiltonian(const ModelParams& params, int n_ph_max,
                                  int max_dim) {
    const int dim = dense_dim_checked(params, n_ph_max, max_dim);
    const int two_j = params.two_j();
    const double omega_a = params.omega_a();
    const double g_coll = params.coupling / std::sqrt(params.n_emitters);

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int two_m = -two_j; two_m <= two_j; two_m += 2) {
        for (int n = 0; n <= n_ph_max; ++n) {
            const int p = dense_index(two_j, n_ph_max, two_m, n);
            h(p, p) = params.omega_c * n + omega_a * (0.5 * two_m);
            // a J_+ : |M, n> -> |M+1, n-1>; the conjugate a^dag J_- fills (p, q).
            if (n >= 1 && two_m + 2 <= two_j) {
                const int q = dense_index(two_j, n_ph_max, two_m + 2, n - 1);
                const double amp = g_coll * std::sqrt(static_cast<double>(n)) *
                                   std::sqrt(raising_strength(two_j, two_m));
                h(q, p) += amp;
                h(p, q) += amp;
            }
        }
    }
    return h;
}

Eigen::MatrixXd dense_excitation_number(const ModelParams& params, int n_ph_max,
                                        int max_dim) {
    const int dim = dense_dim_checked(params, n_ph_max, max_dim);
    const int two_j = params.two_j();

    Eigen::MatrixXd nex = Eigen::MatrixXd::Zero(dim, dim);
    for (int two_m = -two_j; two_m <= two_j; two_m += 2) {
        for (int n = 0; n <= n_ph_max; ++n) {
            const int p = dense_index(two_j, n_ph_max, two_m, n);
            nex(p, p) = n + 0.5 * two_m + params.j();
        }
    }
    return nex;
}

} // namespace tc
