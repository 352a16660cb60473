#include "tccross/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "tccross/errors.hpp"

namespace tc {

namespace {

constexpr double kRelWidth = 1e-14;   // bisection interval target
constexpr int kMaxBisect = 200;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_shape(std::span<const double> diag, std::span<const double> offdiag) {
    if (diag.empty())
        throw std::invalid_argument("tridiagonal matrix must be nonempty");
    if (offdiag.size() + 1 != diag.size())
        throw std::invalid_argument("offdiag size must be diag size - 1");
    for (double e : offdiag)
        if (e == 0.0)
            throw std::invalid_argument("reducible tridiagonal (zero offdiag entry)");
}

// Deterministic 64-bit LCG for perturbed restart vectors.
double lcg_uniform(std::uint64_t& state) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

} // namespace

int sturm_count(std::span<const double> diag, std::span<const double> offdiag,
                double x) {
    check_shape(diag, offdiag);
    // Barth-Martin-Wilkinson recurrence on the LDL^T pivots; a vanishing
    // pivot is replaced by |e|/eps which preserves the count.
    int count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < diag.size(); ++i) {
        double v;
        if (i == 0)
            v = 0.0;
        else if (q != 0.0)
            v = offdiag[i - 1] * offdiag[i - 1] / q;
        else
            v = std::abs(offdiag[i - 1]) / kEps;
        q = diag[i] - x - v;
        if (q < 0.0)
            ++count;
    }
    return count;
}

std::pair<double, double> spectrum_bounds(std::span<const double> diag,
                                          std::span<const double> offdiag) {
    check_shape(diag, offdiag);
    const std::size_t n = diag.size();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(offdiag[i - 1]);
        if (i + 1 < n) r += std::abs(offdiag[i]);
        lo = std::min(lo, diag[i] - r);
        hi = std::max(hi, diag[i] + r);
    }
    const double pad = kEps * (std::abs(lo) + std::abs(hi) + 1.0);
    return {lo - pad, hi + pad};
}

double eigenvalue_by_index(std::span<const double> diag,
                           std::span<const double> offdiag, int k) {
    check_shape(diag, offdiag);
    const int n = static_cast<int>(diag.size());
    if (k < 0 || k >= n)
        throw std::invalid_argument("eigenvalue index out of range");
    if (n == 1)
        return diag[0];

    auto [lo, hi] = spectrum_bounds(diag, offdiag);
    for (int iter = 0; iter < kMaxBisect; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;  // interval hit ulp resolution
        if (hi - lo <= kRelWidth * std::max(1.0, std::abs(mid)))
            break;
        if (sturm_count(diag, offdiag, mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

double smallest_eigenvalue(std::span<const double> diag,
                           std::span<const double> offdiag) {
    return eigenvalue_by_index(diag, offdiag, 0);
}

std::vector<double> all_eigenvalues(std::span<const double> diag,
                                    std::span<const double> offdiag) {
    const int n = static_cast<int>(diag.size());
    std::vector<double> vals(n);
    for (int k = 0; k < n; ++k)
        vals[k] = eigenvalue_by_index(diag, offdiag, k);
    return vals;
}

namespace {

// Partial-pivot LU of (T - sigma I) for a tridiagonal T, plus the solve.
// Layout follows the usual banded factorization: multipliers in dl, pivots
// in dd, two superdiagonals du/du2, row-swap flags in swapped.
struct ShiftedLU {
    std::vector<double> dl, dd, du, du2;
    std::vector<char> swapped;

    ShiftedLU(std::span<const double> diag, std::span<const double> offdiag,
              double sigma) {
        const std::size_t n = diag.size();
        dd.resize(n);
        dl.assign(n > 0 ? n - 1 : 0, 0.0);
        du.assign(n > 0 ? n - 1 : 0, 0.0);
        du2.assign(n > 1 ? n - 2 : 0, 0.0);
        swapped.assign(n > 0 ? n - 1 : 0, 0);

        for (std::size_t i = 0; i < n; ++i) dd[i] = diag[i] - sigma;
        for (std::size_t i = 0; i + 1 < n; ++i) { dl[i] = offdiag[i]; du[i] = offdiag[i]; }

        // Exactly singular pivots are nudged so the solve stays finite; the
        // huge solution this produces is exactly what inverse iteration wants.
        const double tiny = std::numeric_limits<double>::min() / kEps;
        auto guard = [tiny](double x) {
            if (std::abs(x) >= tiny) return x;
            return x < 0.0 ? -tiny : tiny;
        };

        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (std::abs(dd[i]) >= std::abs(dl[i])) {
                dd[i] = guard(dd[i]);
                const double fact = dl[i] / dd[i];
                dl[i] = fact;
                dd[i + 1] -= fact * du[i];
                if (i + 2 < n) du2[i] = 0.0;
            } else {
                const double fact = dd[i] / dl[i];
                dd[i] = dl[i];
                dl[i] = fact;
                const double temp = du[i];
                du[i] = dd[i + 1];
                dd[i + 1] = temp - fact * dd[i + 1];
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = 1;
            }
        }
        dd[n - 1] = guard(dd[n - 1]);
    }

    void solve(std::vector<double>& b) const {
        const std::size_t n = dd.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!swapped[i]) {
                b[i + 1] -= dl[i] * b[i];
            } else {
                const double temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - dl[i] * b[i];
            }
        }
        b[n - 1] /= dd[n - 1];
        if (n > 1)
            b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / dd[n - 2];
        for (std::size_t i = n - 2; i-- > 0;)
            b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / dd[i];
    }
};

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Rayleigh quotient and residual norm ||T v - rho v|| for unit v.
std::pair<double, double> rayleigh_residual(std::span<const double> diag,
                                            std::span<const double> offdiag,
                                            const std::vector<double>& v) {
    const std::size_t n = diag.size();
    std::vector<double> tv(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = diag[i] * v[i];
        if (i > 0) s += offdiag[i - 1] * v[i - 1];
        if (i + 1 < n) s += offdiag[i] * v[i + 1];
        tv[i] = s;
    }
    double rho = 0.0;
    for (std::size_t i = 0; i < n; ++i) rho += v[i] * tv[i];
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = tv[i] - rho * v[i];
        res += r * r;
    }
    return {rho, std::sqrt(res)};
}

} // namespace

EigenPair ground_eigenpair(std::span<const double> diag,
                           std::span<const double> offdiag) {
    check_shape(diag, offdiag);
    const std::size_t n = diag.size();
    if (n == 1)
        return {diag[0], {1.0}};

    const double lambda = smallest_eigenvalue(diag, offdiag);
    const double scale = std::max(1.0, std::abs(lambda));

    // Attempt 0: plain shift, all-ones start.  Later attempts perturb both,
    // covering starts that happen to be orthogonal to the ground vector.
    for (int attempt = 0; attempt < 4; ++attempt) {
        double sigma = lambda;
        if (attempt == 1) sigma += 1e-8 * scale;
        if (attempt == 2) sigma -= 1e-8 * scale;
        if (attempt == 3) sigma += 3e-8 * scale;

        std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
        if (attempt > 0) {
            std::uint64_t rng = 0x9e3779b97f4a7c15ULL * (attempt + 1);
            for (double& x : v) x *= 1.0 + 1e-8 * lcg_uniform(rng);
        }

        const ShiftedLU lu(diag, offdiag, sigma);
        bool finite = true;
        for (int it = 0; it < 8 && finite; ++it) {
            lu.solve(v);
            const double nrm = norm2(v);
            if (!std::isfinite(nrm) || nrm == 0.0) {
                finite = false;
                break;
            }
            for (double& x : v) x /= nrm;

            auto [rho, res] = rayleigh_residual(diag, offdiag, v);
            // Accept only if the vector really belongs to the bisection
            // eigenvalue; a converged residual alone can mean some other
            // eigenpair when the start vector was orthogonal to the ground.
            const bool value_ok =
                std::abs(rho - lambda) <= 1e-9 * std::max(1.0, std::abs(lambda));
            if (value_ok && res <= 1e-11 * std::max(1.0, std::abs(rho))) {
                for (double x : v) {
                    if (x != 0.0) {
                        if (x < 0.0)
                            for (double& y : v) y = -y;
                        break;
                    }
                }
                return {rho, std::move(v)};
            }
        }
    }
    throw ConvergenceError("inverse iteration failed at dim " + std::to_string(n));
}

EigenPair ground_eigenpair(const TridiagonalBlock& block) {
    return ground_eigenpair(block.diag, block.offdiag);
}

std::vector<double> all_eigenvalues(const TridiagonalBlock& block) {
    return all_eigenvalues(block.diag, block.offdiag);
}

} // namespace tc
