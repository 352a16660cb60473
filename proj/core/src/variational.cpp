#include "tccross/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "tccross/errors.hpp"

namespace tc {

namespace {

double log_binom(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

} // namespace

BlochState bloch_state(int two_j, double theta, double phi) {
    if (two_j < 1)
        throw std::invalid_argument("two_j must be >= 1");
    if (!(theta >= 0.0 && theta <= std::numbers::pi + 1e-12))
        throw std::invalid_argument("theta must lie in [0, pi]");
    theta = std::min(theta, std::numbers::pi);

    BlochState state;
    state.two_j = two_j;
    state.theta = theta;
    state.phi = phi;
    state.coefficients.resize(two_j + 1);

    const double ls = std::log(std::sin(0.5 * theta));  // -inf at theta = 0 is fine
    const double lc = std::log(std::cos(0.5 * theta));
    double norm2 = 0.0;
    for (int k = 0; k <= two_j; ++k) {
        double lamp = 0.5 * log_binom(two_j, k);
        lamp += (k > 0) ? k * ls : 0.0;                 // avoid 0 * (-inf)
        lamp += (k < two_j) ? (two_j - k) * lc : 0.0;
        const double amp = std::exp(lamp);
        state.coefficients[k] = std::polar(amp, -k * phi);
        norm2 += amp * amp;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& c : state.coefficients) c *= inv;
    return state;
}

double bloch_jz(const BlochState& state) {
    double s = 0.0;
    for (int k = 0; k <= state.two_j; ++k)
        s += std::norm(state.coefficients[k]) * (-0.5 * state.two_j + k);
    return s;
}

double mbar(double alpha, double theta, double phi, double mu,
            const ModelParams& params, double eta, double epsilon) {
    const double j = params.j();
    const double k_coup = params.coupling * std::sqrt(2.0 * j) * (1.0 + eta);
    const double drive = epsilon * std::sqrt(8.0 * j * j * j);
    return (params.omega_c - mu) * alpha * alpha -
           (params.omega_a() - mu) * j * std::cos(theta) - mu * j +
           (k_coup * alpha + drive) * std::sin(theta) * std::cos(phi);
}

std::array<double, 3> mbar_gradient(double alpha, double theta, double phi,
                                    double mu, const ModelParams& params,
                                    double eta, double epsilon) {
    const double j = params.j();
    const double k_coup = params.coupling * std::sqrt(2.0 * j) * (1.0 + eta);
    const double drive = epsilon * std::sqrt(8.0 * j * j * j);
    const double st = std::sin(theta), ct = std::cos(theta), cp = std::cos(phi);
    return {2.0 * (params.omega_c - mu) * alpha + k_coup * st * cp,
            (params.omega_a() - mu) * j * st + (k_coup * alpha + drive) * ct * cp,
            -(k_coup * alpha + drive) * st * std::sin(phi)};
}

double constraint_density(double alpha, double theta, const ModelParams& params) {
    return alpha * alpha / params.n_emitters - 0.5 * std::cos(theta);
}

namespace {

// One unconstrained minimizer candidate at fixed mu: alpha >= 0, u =
// cos(theta), cosphi in {+1, -1}.
struct InnerPoint {
    double alpha = 0.0;
    double u = 1.0;
    double cosphi = 1.0;
    double value = 0.0;
    double rho = 0.0;
};

struct InnerProblem {
    double omega_c, omega_a, j, n, k_coup, drive;

    double value(double alpha, double u, double cosphi, double mu) const {
        const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
        return (omega_c - mu) * alpha * alpha - (omega_a - mu) * j * u - mu * j +
               cosphi * (k_coup * alpha + drive) * s;
    }

    // argmin over alpha >= 0 of the photon quadratic at fixed (u, cosphi);
    // needs mu < omega_c.
    double best_alpha(double u, double cosphi, double mu) const {
        const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
        const double a = -cosphi * k_coup * s / (2.0 * (omega_c - mu));
        return a > 0.0 ? a : 0.0;
    }

    InnerPoint make(double alpha, double u, double cosphi, double mu) const {
        InnerPoint pt;
        pt.alpha = alpha;
        pt.u = u;
        pt.cosphi = cosphi;
        pt.value = value(alpha, u, cosphi, mu);
        pt.rho = alpha * alpha / n - 0.5 * u;
        return pt;
    }
};

// Golden-section refinement of f over [lo, hi] (assumes a bracketed minimum).
double golden_min(double lo, double hi, const auto& f) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 80 && (b - a) > 1e-14 * std::max(1.0, std::abs(a) + std::abs(b));
         ++it) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Global minimizer of mbar over (alpha >= 0, u, cosphi) at fixed mu < omega_c.
// The alpha = 0 corners are seeded first and survive exact ties, so the
// trivial branch always wins when nothing beats it strictly.
InnerPoint inner_minimize(const InnerProblem& pr, double mu) {
    InnerPoint best = pr.make(0.0, 1.0, 1.0, mu);
    const InnerPoint down = pr.make(0.0, -1.0, 1.0, mu);
    if (down.value < best.value) best = down;

    if (pr.drive == 0.0) {
        if (pr.k_coup != 0.0) {
            // Condensed branch: substituting the optimal alpha leaves a convex
            // quadratic in u with interior stationary point ustar.
            const double cosphi = pr.k_coup > 0.0 ? -1.0 : 1.0;
            const double ustar = 2.0 * (pr.omega_a - mu) * pr.j * (pr.omega_c - mu) /
                                 (pr.k_coup * pr.k_coup);
            const double u = std::clamp(ustar, -1.0, 1.0);
            const InnerPoint cond = pr.make(pr.best_alpha(u, cosphi, mu), u, cosphi, mu);
            if (cond.value < best.value) best = cond;
        }
        return best;
    }

    // Symmetry-breaking drive on: scan both cosphi branches numerically.
    for (double cosphi : {1.0, -1.0}) {
        auto reduced = [&](double u) {
            return pr.value(pr.best_alpha(u, cosphi, mu), u, cosphi, mu);
        };
        constexpr int kGrid = 512;
        int ibest = 0;
        double fbest = reduced(-1.0);
        for (int i = 1; i <= kGrid; ++i) {
            const double u = -1.0 + 2.0 * i / kGrid;
            const double f = reduced(u);
            if (f < fbest) { fbest = f; ibest = i; }
        }
        const double lo = std::max(-1.0, -1.0 + 2.0 * (ibest - 1) / kGrid);
        const double hi = std::min(1.0, -1.0 + 2.0 * (ibest + 1) / kGrid);
        const double u = golden_min(lo, hi, reduced);
        const InnerPoint cand = pr.make(pr.best_alpha(u, cosphi, mu), u, cosphi, mu);
        if (cand.value < best.value) best = cand;
    }
    return best;
}

} // namespace

VariationalSolution solve_variational(const ModelParams& params,
                                      double target_rho_ex, double eta,
                                      double epsilon) {
    params.validate();
    if (!std::isfinite(target_rho_ex) || target_rho_ex < -0.5 - 1e-12)
        throw std::invalid_argument("target rho_ex must be >= -1/2");
    const double target = std::max(target_rho_ex, -0.5);

    const double j = params.j();
    InnerProblem pr{params.omega_c,
                    params.omega_a(),
                    j,
                    static_cast<double>(params.n_emitters),
                    params.coupling * std::sqrt(2.0 * j) * (1.0 + eta),
                    epsilon * std::sqrt(8.0 * j * j * j)};

    // mbar is unbounded below in alpha once mu >= omega_c, so the upper
    // bracket stays strictly below it.
    const double cap =
        params.omega_c - 1e-9 * std::max(1.0, std::abs(params.omega_c) + params.coupling);
    double hi = cap;
    double lo = std::min(params.omega_a() - 5.0 * params.coupling, cap - 1.0);

    auto rho_at = [&](double mu) { return inner_minimize(pr, mu).rho; };

    for (int i = 0; i < 4 && rho_at(lo) > target; ++i) lo -= 2.0 * (hi - lo);
    if (rho_at(lo) > target)
        throw ConvergenceError("density bracket failed from below at rho_ex = " +
                               std::to_string(target));
    if (rho_at(hi) < target)
        throw ConvergenceError("target rho_ex = " + std::to_string(target) +
                               " unreachable below the cavity frequency");

    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (hi - lo <= 1e-15 * std::max({1.0, std::abs(lo), std::abs(hi)}))
            break;
        if (rho_at(mid) < target)
            lo = mid;
        else
            hi = mid;
    }

    double mu = 0.5 * (lo + hi);
    InnerPoint pt = inner_minimize(pr, mu);

    // Newton polish of the joint stationarity + constraint system for
    // interior (condensed) solutions; corners are already exact.
    if (pt.alpha > 0.0 && std::abs(pt.u) < 1.0) {
        const double c = pt.cosphi;
        double a = pt.alpha;
        double th = std::acos(std::clamp(pt.u, -1.0, 1.0));
        auto residual = [&](double a_, double th_, double mu_) {
            const double st = std::sin(th_), ct = std::cos(th_);
            return Eigen::Vector3d{
                2.0 * (pr.omega_c - mu_) * a_ + c * pr.k_coup * st,
                (pr.omega_a - mu_) * pr.j * st + c * (pr.k_coup * a_ + pr.drive) * ct,
                a_ * a_ / pr.n - 0.5 * ct - target};
        };
        Eigen::Vector3d f = residual(a, th, mu);
        for (int it = 0; it < 30 && f.norm() > 0.0; ++it) {
            const double st = std::sin(th), ct = std::cos(th);
            Eigen::Matrix3d jac;
            jac << 2.0 * (pr.omega_c - mu), c * pr.k_coup * ct, -2.0 * a,
                   c * pr.k_coup * ct,
                   (pr.omega_a - mu) * pr.j * ct - c * (pr.k_coup * a + pr.drive) * st,
                   -pr.j * st,
                   2.0 * a / pr.n, 0.5 * st, 0.0;
            const Eigen::Vector3d step = jac.fullPivLu().solve(-f);
            if (!step.allFinite())
                break;
            double t = 1.0;
            double a2 = a, th2 = th, mu2 = mu;
            Eigen::Vector3d f2 = f;
            bool improved = false;
            for (int half = 0; half < 12; ++half) {
                a2 = a + t * step[0];
                th2 = std::clamp(th + t * step[1], 1e-12, std::numbers::pi - 1e-12);
                mu2 = std::min(mu + t * step[2], cap);
                if (a2 > 0.0) {
                    f2 = residual(a2, th2, mu2);
                    if (f2.norm() < f.norm()) {
                        improved = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if (!improved)
                break;
            a = a2; th = th2; mu = mu2; f = f2;
            const double scale = std::max(1.0, std::abs(pr.k_coup) + std::abs(pr.drive) +
                                                   pr.j * (std::abs(pr.omega_a) + std::abs(mu)));
            if (std::abs(f[0]) <= 1e-13 * scale && std::abs(f[1]) <= 1e-13 * scale &&
                std::abs(f[2]) <= 1e-14 * std::max(1.0, std::abs(target)))
                break;
        }
        pt = pr.make(a, std::cos(th), c, mu);
    }

    // theta in [0, pi] keeps sin(theta) >= 0, so (alpha >= 0, phi in {0, pi})
    // reproduces the signed coupling exactly; the stored triple is stationary.
    VariationalSolution sol;
    sol.alpha = pt.alpha;
    sol.theta = std::acos(std::clamp(pt.u, -1.0, 1.0));
    sol.phi = (pt.alpha > 0.0 && pt.cosphi < 0.0) ? std::numbers::pi : 0.0;
    sol.mu = mu;
    sol.rho_ex = pt.rho;
    sol.mbar_value = mbar(sol.alpha, sol.theta, sol.phi, mu, params, eta, epsilon);
    sol.constraint_residual = std::abs(pt.rho - target);
    sol.eta = eta;
    sol.epsilon = epsilon;

    const auto grad = mbar_gradient(sol.alpha, sol.theta, sol.phi, mu, params, eta, epsilon);
    sol.grad_norm = std::hypot(grad[0], grad[1]);

    if (sol.constraint_residual > 1e-8)
        throw ConvergenceError("density constraint not met: target = " +
                               std::to_string(target) + ", achieved = " +
                               std::to_string(sol.rho_ex));
    return sol;
}

} // namespace tc
