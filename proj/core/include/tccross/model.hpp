#ifndef TCCROSS_MODEL_HPP
#define TCCROSS_MODEL_HPP

#include <vector>

#include <Eigen/Dense>

namespace tc {

// Tavis-Cummings model: a single cavity mode coupled to N identical two-level
// emitters treated as one collective spin J = N/2,
//
//   H = omega_c a^dag a + omega_a J_z + (g/sqrt(N)) (a^dag J_- + a J_+).
//
// The total excitation number N_ex = a^dag a + J_z + J commutes with H, so H
// is block diagonal over manifolds of fixed N_ex = nu.  Internal units: the
// coupling g sets the energy scale (g = 1 by default) and omega_c is a free
// reference, so detuning Delta = omega_c - omega_a is the physical knob.
struct ModelParams {
    double omega_c = 1.0;
    double detuning = 0.0;
    double coupling = 1.0;
    int n_emitters = 1;

    double omega_a() const { return omega_c - detuning; }
    int two_j() const { return n_emitters; }
    double j() const { return 0.5 * n_emitters; }

    // Throws std::invalid_argument on out-of-domain values.
    void validate() const;
};

// One Dicke-basis product state |M, n> inside a manifold.  M is half-integer
// when N is odd, so it is stored doubled: two_m = 2M (always integral).
struct BasisState {
    int two_m = 0;
    int n_photons = 0;
};

// Ordered basis of the nu manifold.  State k holds M = -J + k and
// n = nu - k, k = 0 .. D-1, so photon number decreases along the basis.
// D = min(nu, 2J) + 1.
struct ManifoldBasis {
    int nu = 0;
    std::vector<BasisState> states;

    int dim() const { return static_cast<int>(states.size()); }
};

// Symmetric tridiagonal restriction of H to one manifold, in the ordered
// manifold basis.  offdiag[k] couples states k and k+1 and is strictly
// positive for every interior coupling (both ladder factors nonzero there).
struct TridiagonalBlock {
    int nu = 0;
    std::vector<double> diag;
    std::vector<double> offdiag;

    int dim() const { return static_cast<int>(diag.size()); }
};

// Squared collective raising matrix element J(J+1) - M(M+1), evaluated from
// doubled quantum numbers so half-integer spins stay exact.
inline double raising_strength(int two_j, int two_m) {
    return 0.25 * (static_cast<double>(two_j) * (two_j + 2) -
                   static_cast<double>(two_m) * (two_m + 2));
}

ManifoldBasis manifold_basis(const ModelParams& params, int nu);

TridiagonalBlock hamiltonian_block(const ModelParams& params, int nu);

// Flat index of |M, n> in the dense product basis used by the oracle paths:
// emitters-major, photons-minor.
inline int dense_index(int two_j, int n_ph_max, int two_m, int n_photons) {
    int m_idx = (two_m + two_j) / 2;
    return m_idx * (n_ph_max + 1) + n_photons;
}

// Full H on the product basis truncated at n_ph_max photons.  Test oracle
// only; the cap guards against accidental huge allocations.
Eigen::MatrixXd dense_hamiltonian(const ModelParams& params, int n_ph_max,
                                  int max_dim = 4096);

// N_ex = a^dag a + J_z + J on the same truncated product basis.
Eigen::MatrixXd dense_excitation_number(const ModelParams& params, int n_ph_max,
                                        int max_dim = 4096);

} // namespace tc

#endif
