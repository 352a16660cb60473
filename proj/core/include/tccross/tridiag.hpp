#ifndef TCCROSS_TRIDIAG_HPP
#define TCCROSS_TRIDIAG_HPP

#include <span>
#include <utility>
#include <vector>

#include "tccross/model.hpp"

namespace tc {

// Ground eigenvalue and unit-norm eigenvector of a symmetric tridiagonal
// matrix.  Sign convention: first nonzero vector entry is positive.
struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;
};

// Number of eigenvalues strictly below x, by Sturm sequence count.
// offdiag entries must be nonzero (unreduced matrix).
int sturm_count(std::span<const double> diag, std::span<const double> offdiag,
                double x);

// Closed interval containing the whole spectrum (Gershgorin, padded).
std::pair<double, double> spectrum_bounds(std::span<const double> diag,
                                          std::span<const double> offdiag);

// k-th smallest eigenvalue (k is 0-based) by bisection, refined to relative
// interval width 1e-14.  Deterministic: same input bits, same output bits.
double eigenvalue_by_index(std::span<const double> diag,
                           std::span<const double> offdiag, int k);

double smallest_eigenvalue(std::span<const double> diag,
                           std::span<const double> offdiag);

// All eigenvalues in ascending order, each by independent bisection.
std::vector<double> all_eigenvalues(std::span<const double> diag,
                                    std::span<const double> offdiag);

// Ground eigenpair: bisection for the eigenvalue, inverse iteration for the
// vector.  The all-ones start vector can be orthogonal to the ground state;
// on stagnation the shift and start are perturbed deterministically (fixed
// relative size 1e-8).  Throws ConvergenceError if no attempt converges.
EigenPair ground_eigenpair(std::span<const double> diag,
                           std::span<const double> offdiag);

EigenPair ground_eigenpair(const TridiagonalBlock& block);
std::vector<double> all_eigenvalues(const TridiagonalBlock& block);

} // namespace tc

#endif
