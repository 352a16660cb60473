#ifndef TCCROSS_VARIATIONAL_HPP
#define TCCROSS_VARIATIONAL_HPP

#include <array>
#include <complex>
#include <vector>

#include "tccross/model.hpp"

namespace tc {

// Spin coherent state |theta, phi> on the J = N/2 Bloch sphere, expanded in
// the Dicke basis |M>, M = -J .. J (index k = M + J):
//   c_k = binom(2J, k)^(1/2) sin(theta/2)^k cos(theta/2)^(2J-k) e^(-i k phi).
// Amplitudes are built in log space so large J stays finite.
struct BlochState {
    int two_j = 0;
    double theta = 0.0;
    double phi = 0.0;
    std::vector<std::complex<double>> coefficients;
};

BlochState bloch_state(int two_j, double theta, double phi);

// <J_z> of a Bloch state; equals -J cos(theta) analytically.
double bloch_jz(const BlochState& state);

// Grand-canonical mean-field energy of the product ansatz
// |alpha> (coherent photons) x |theta, phi> (Bloch spin):
//   Mbar = (omega_c - mu) alpha^2 - (omega_a - mu) J cos(theta) - mu J
//        + [g sqrt(2J)(1 + eta) alpha + epsilon sqrt(8 J^3)] sin(theta) cos(phi).
// eta and epsilon are optional drive/symmetry-breaking knobs (0 by default).
double mbar(double alpha, double theta, double phi, double mu,
            const ModelParams& params, double eta = 0.0, double epsilon = 0.0);

// Analytic gradient of mbar in (alpha, theta, phi).
std::array<double, 3> mbar_gradient(double alpha, double theta, double phi,
                                    double mu, const ModelParams& params,
                                    double eta = 0.0, double epsilon = 0.0);

// Excitation density of the ansatz: |alpha|^2 / N - cos(theta) / 2.
double constraint_density(double alpha, double theta, const ModelParams& params);

// Minimizer of mbar at fixed target density.  alpha >= 0 with phi in
// {0, pi}; phi = pi carries the condensed (alpha > 0) branch.  Residual
// fields are diagnostics evaluated at the solution.
struct VariationalSolution {
    double alpha = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    double mu = 0.0;
    double rho_ex = 0.0;         // achieved density
    double mbar_value = 0.0;
    double constraint_residual = 0.0;
    double grad_norm = 0.0;      // |(dM/dalpha, dM/dtheta)| at the solution
    double eta = 0.0;
    double epsilon = 0.0;
};

// Solves the constrained minimization: outer bisection on the chemical
// potential mu (the density rho(mu) of the unconstrained minimizer is
// monotone), inner closed-form minimization over (alpha, theta) per cos(phi)
// branch, then Newton polish of the stationarity system for interior
// solutions.  The alpha = 0 branch is always evaluated and wins ties.
// Throws ConvergenceError when the target density is unreachable.
VariationalSolution solve_variational(const ModelParams& params,
                                      double target_rho_ex, double eta = 0.0,
                                      double epsilon = 0.0);

} // namespace tc

#endif
