#include "tccross/observables.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

#include "tccross/tridiag.hpp"

namespace tc {

namespace {

// Moments of the distribution {w_k on value(k)}.  Variance is the raw
// difference <x^2> - <x>^2; skewness/kurtosis use central sums.  Variance at
// or below the cancellation noise floor marks a single-point distribution.
template <typename ValueFn>
Moments weighted_moments(std::span<const double> weights, ValueFn value) {
    double mean = 0.0, raw2 = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        const double x = value(k);
        mean += weights[k] * x;
        raw2 += weights[k] * x * x;
    }
    Moments m;
    m.mean = mean;
    m.variance = std::max(0.0, raw2 - mean * mean);

    const double noise = 4.0 * std::numeric_limits<double>::epsilon() * raw2;
    if (m.variance > noise) {
        double c3 = 0.0, c4 = 0.0;
        for (std::size_t k = 0; k < weights.size(); ++k) {
            const double d = value(k) - mean;
            c3 += weights[k] * d * d * d;
            c4 += weights[k] * d * d * d * d;
        }
        const double sd = std::sqrt(m.variance);
        m.skewness = c3 / (sd * sd * sd);
        m.kurtosis = c4 / (m.variance * m.variance);
    } else {
        m.variance = 0.0;
    }
    return m;
}

std::vector<double> squared_weights(const GroundState& gs) {
    std::vector<double> w(gs.amplitudes.size());
    for (std::size_t k = 0; k < w.size(); ++k)
        w[k] = gs.amplitudes[k] * gs.amplitudes[k];
    return w;
}

} // namespace

GroundState ground_state(const ModelParams& params, int nu) {
    TridiagonalBlock block = hamiltonian_block(params, nu);
    EigenPair pair = ground_eigenpair(block);
    return {manifold_basis(params, nu), pair.value, std::move(pair.vector)};
}

Moments photon_moments(const GroundState& gs) {
    const auto w = squared_weights(gs);
    return weighted_moments(w, [&](std::size_t k) {
        return static_cast<double>(gs.basis.states[k].n_photons);
    });
}

Moments matter_moments(const GroundState& gs) {
    const auto w = squared_weights(gs);
    // m = M + J = k exactly in the ordered basis.
    return weighted_moments(
        w, [](std::size_t k) { return static_cast<double>(k); });
}

double jz_mean(const GroundState& gs) {
    double s = 0.0;
    for (std::size_t k = 0; k < gs.amplitudes.size(); ++k)
        s += gs.amplitudes[k] * gs.amplitudes[k] * 0.5 * gs.basis.states[k].two_m;
    return s;
}

std::optional<double> g2_zero(const GroundState& gs) {
    double mean = 0.0, num = 0.0;
    for (std::size_t k = 0; k < gs.amplitudes.size(); ++k) {
        const double w = gs.amplitudes[k] * gs.amplitudes[k];
        const double n = gs.basis.states[k].n_photons;
        mean += w * n;
        num += w * n * (n - 1.0);
    }
    if (mean == 0.0)
        return std::nullopt;
    return num / (mean * mean);
}

double linear_entropy(const GroundState& gs) {
    const int dim = gs.dim();
    if (dim <= 1)
        return 0.0;
    double sum4 = 0.0;
    for (double c : gs.amplitudes) sum4 += c * c * c * c;
    const double val = (static_cast<double>(dim) / (dim - 1)) * (1.0 - sum4);
    return std::clamp(val, 0.0, 1.0);
}

std::pair<double, double> purity_pair(const GroundState& gs) {
    // Both reduced density matrices are diagonal with the same spectrum
    // because photon and matter labels each appear once per manifold; the
    // two accumulations traverse that spectrum in opposite orders, so they
    // agree to rounding but not necessarily bit for bit.
    std::map<int, double> by_photon, by_matter;
    for (std::size_t k = 0; k < gs.amplitudes.size(); ++k) {
        const double w = gs.amplitudes[k] * gs.amplitudes[k];
        by_photon[gs.basis.states[k].n_photons] += w;
        by_matter[gs.basis.states[k].two_m] += w;
    }
    double pp = 0.0, pm = 0.0;
    for (auto& [n, w] : by_photon) pp += w * w;
    for (auto& [m, w] : by_matter) pm += w * w;
    return {pp, pm};
}

std::vector<DensityMatrixElement> density_matrix_elements(const GroundState& gs) {
    const int dim = gs.dim();
    std::vector<DensityMatrixElement> out;
    out.reserve(static_cast<std::size_t>(dim) * dim);
    for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k)
            out.push_back({gs.basis.states[j], gs.basis.states[k],
                           gs.amplitudes[j] * gs.amplitudes[k]});
    return out;
}

Statistics classify_statistics(double mean, double variance) {
    const double band = 1e-9 * std::max(std::abs(mean), std::abs(variance));
    const double diff = variance - mean;
    if (std::abs(diff) <= band)
        return Statistics::Poissonian;
    return diff < 0.0 ? Statistics::SubPoissonian : Statistics::SuperPoissonian;
}

double excitation_density(const ModelParams& params, int nu) {
    params.validate();
    if (nu < 0)
        throw std::invalid_argument("nu must be >= 0");
    return (nu - params.j()) / params.n_emitters;
}

double chemical_potential(const std::map<int, double>& ground_energies, int nu) {
    const auto lo = ground_energies.find(nu);
    const auto hi = ground_energies.find(nu + 1);
    if (lo == ground_energies.end() || hi == ground_energies.end())
        throw std::out_of_range("chemical potential at nu = " + std::to_string(nu) +
                                " needs ground energies at nu and nu + 1");
    return hi->second - lo->second;
}

std::optional<double> scaled_inversion(double jz, const ModelParams& params,
                                       int nu) {
    const double rho = excitation_density(params, nu);
    if (rho + 0.5 <= 0.0)
        return std::nullopt;
    return (jz / params.n_emitters + 0.5) / (rho + 0.5);
}

ObservableRecord assemble_record(const ModelParams& params, const GroundState& gs,
                                 std::optional<double> mu) {
    ObservableRecord rec;
    rec.nu = gs.basis.nu;
    rec.rho_ex = excitation_density(params, gs.basis.nu);
    rec.energy = gs.energy;
    rec.mu = mu;
    rec.jz = jz_mean(gs);
    rec.jz_scaled = scaled_inversion(rec.jz, params, gs.basis.nu);
    rec.light = photon_moments(gs);
    rec.matter = matter_moments(gs);
    rec.g2 = g2_zero(gs);
    rec.lin_entropy = linear_entropy(gs);
    if (rec.light.mean > 0.0) {
        rec.poisson_skew = 1.0 / std::sqrt(rec.light.mean);
        rec.poisson_kurt = 3.0 + 1.0 / rec.light.mean;
    }
    return rec;
}

std::vector<Crossing> find_statistics_crossings(
    std::span<const ObservableRecord> records, Subsystem subsystem,
    double jump_threshold) {
    if (records.empty())
        throw std::invalid_argument("crossing scan needs at least one record");

    auto diff = [&](std::size_t i) {
        // Light compares the photon variance against the photon mean
        // (variance = mean is the Poisson point, equivalent to g2 = 1).
        // Matter compares the excitation variance against the signed
        // inversion <Jz>, which is negative below half filling; the
        // crossing marks where the distribution reaches its coherent width.
        if (subsystem == Subsystem::Light)
            return records[i].light.variance - records[i].light.mean;
        return records[i].matter.variance - records[i].jz;
    };
    auto rho = [&](std::size_t i) { return records[i].rho_ex; };

    std::vector<Crossing> out;
    std::ptrdiff_t prev = -1;           // last nonzero value seen
    std::size_t zero_run = SIZE_MAX;    // start of the current exact-zero run
    for (std::size_t k = 0; k < records.size(); ++k) {
        const double v = diff(k);
        if (v == 0.0) {
            if (zero_run == SIZE_MAX) zero_run = k;
            continue;
        }
        if (prev >= 0) {
            const double pv = diff(static_cast<std::size_t>(prev));
            if (zero_run != SIZE_MAX) {
                if (pv * v < 0.0)
                    out.push_back({rho(zero_run), false});
            } else if (pv * v < 0.0) {
                if (std::min(std::abs(pv), std::abs(v)) > jump_threshold) {
                    out.push_back({rho(k), true});
                } else {
                    const double x = rho(k - 1) + (rho(k) - rho(k - 1)) * pv / (pv - v);
                    out.push_back({x, false});
                }
            }
        }
        prev = static_cast<std::ptrdiff_t>(k);
        zero_run = SIZE_MAX;
    }
    return out;
}

} // namespace tc
