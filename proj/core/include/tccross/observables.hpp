#ifndef TCCROSS_OBSERVABLES_HPP
#define TCCROSS_OBSERVABLES_HPP

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "tccross/model.hpp"

namespace tc {

// Ground state of one manifold: energy plus real Schmidt coefficients c_k in
// the ordered manifold basis (unit norm, first nonzero entry positive).
struct GroundState {
    ManifoldBasis basis;
    double energy = 0.0;
    std::vector<double> amplitudes;

    int dim() const { return basis.dim(); }
};

GroundState ground_state(const ModelParams& params, int nu);

// First four moments of a discrete distribution: mean, variance, and the
// standardized central skewness/kurtosis.  The latter two are undefined for
// a single-point distribution (variance zero).
struct Moments {
    double mean = 0.0;
    double variance = 0.0;
    std::optional<double> skewness;
    std::optional<double> kurtosis;
};

// Photon-number distribution moments, weights c_k^2 on n_k.
Moments photon_moments(const GroundState& gs);

// Emitter excitation distribution moments on the shifted count m = M + J
// (integer k in the ordered basis), so the mean is nonnegative.
Moments matter_moments(const GroundState& gs);

// <J_z> = sum c_k^2 M_k (raw, can be negative).
double jz_mean(const GroundState& gs);

// Equal-time second-order photon correlation sum c^2 n(n-1) / <n>^2.
// Undefined when <n> = 0.
std::optional<double> g2_zero(const GroundState& gs);

// Linear entanglement entropy between field and matter, normalized by the
// Schmidt rank: S = D/(D-1) (1 - sum c^4), and 0 for D = 1.  Range [0, 1].
double linear_entropy(const GroundState& gs);

// Purity sum c^4 accumulated through both reduced density matrices (photon
// side and matter side).  The two must agree; both are returned.
std::pair<double, double> purity_pair(const GroundState& gs);

// One entry of the manifold density matrix |psi><psi|.
struct DensityMatrixElement {
    BasisState row;
    BasisState col;
    double value = 0.0;
};

// All D^2 elements c_j c_k, row-major in the ordered basis.
std::vector<DensityMatrixElement> density_matrix_elements(const GroundState& gs);

enum class Statistics { SubPoissonian, Poissonian, SuperPoissonian };

// Compares variance to mean with a relative tolerance band of 1e-9.
Statistics classify_statistics(double mean, double variance);

// Excitation density rho_ex = (nu - J)/N in [-1/2, infinity).
double excitation_density(const ModelParams& params, int nu);

// mu_nu = E0(nu+1) - E0(nu) from a map of ground energies keyed by nu.
// Throws std::out_of_range if either energy is missing.
double chemical_potential(const std::map<int, double>& ground_energies, int nu);

// (<J_z>/N + 1/2) / (rho_ex + 1/2); undefined at rho_ex = -1/2 (nu = 0).
std::optional<double> scaled_inversion(double jz, const ModelParams& params,
                                       int nu);

// Everything reported for one manifold.  mu is filled by the sweep driver
// (it needs the neighbouring manifold energy).
struct ObservableRecord {
    int nu = 0;
    double rho_ex = 0.0;
    double energy = 0.0;
    std::optional<double> mu;
    double jz = 0.0;
    std::optional<double> jz_scaled;
    Moments light;
    Moments matter;
    std::optional<double> g2;
    double lin_entropy = 0.0;
    std::optional<double> poisson_skew;  // 1/sqrt(mean) reference
    std::optional<double> poisson_kurt;  // 3 + 1/mean reference
};

ObservableRecord assemble_record(const ModelParams& params, const GroundState& gs,
                                 std::optional<double> mu = std::nullopt);

// A point where a subsystem's coherence indicator changes sign along a
// sweep in rho_ex.  Interpolated crossings sit between grid points; a
// discontinuous jump is reported at the right-hand grid point.
struct Crossing {
    double rho_ex = 0.0;
    bool discontinuous = false;
};

enum class Subsystem { Light, Matter };

// Scans a coherence indicator over records ordered in rho_ex: photon
// variance minus photon mean for Light (zero at the Poisson point, where
// g2 = 1), excitation variance minus the signed inversion <Jz> for Matter.
// Sign changes between adjacent points are located by linear interpolation
// unless both flanking magnitudes exceed jump_threshold, which marks a
// discontinuity.  A grid point with exactly zero difference counts as a
// crossing only when its nearest nonzero neighbours disagree in sign.
std::vector<Crossing> find_statistics_crossings(
    std::span<const ObservableRecord> records, Subsystem subsystem,
    double jump_threshold = 0.25);

} // namespace tc

#endif
