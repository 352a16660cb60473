#include "tccross/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <type_traits>

#include "tccross/csv.hpp"
#include "tccross/errors.hpp"
#include "tccross/tridiag.hpp"

namespace tc {

void SweepConfig::validate() const {
    try {
        params.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (threads < 0)
        throw ConfigError("threads must be >= 0");
    switch (mode) {
    case SweepMode::Exact:
        if (nu_min < 0)
            throw ConfigError("nu_min must be >= 0");
        if (nu_max < nu_min)
            throw ConfigError("nu_max must be >= nu_min");
        if (!(jump_threshold >= 0.0) || !std::isfinite(jump_threshold))
            throw ConfigError("jump_threshold must be finite and >= 0");
        break;
    case SweepMode::Variational:
        if (rho_steps < 1)
            throw ConfigError("rho_steps must be >= 1");
        if (!std::isfinite(rho_min) || !std::isfinite(rho_max))
            throw ConfigError("density grid bounds must be finite");
        if (rho_min < -0.5 - 1e-12)
            throw ConfigError("rho_min must be >= -1/2");
        if (rho_max < rho_min)
            throw ConfigError("rho_max must be >= rho_min");
        if (rho_steps > 1 && !(rho_max > rho_min))
            throw ConfigError("rho_steps > 1 needs rho_max > rho_min");
        if (!std::isfinite(eta) || !std::isfinite(epsilon))
            throw ConfigError("eta and epsilon must be finite");
        break;
    case SweepMode::Scaling:
        if (omega_a_grid.empty())
            throw ConfigError("omega_a_grid must be nonempty");
        for (double w : omega_a_grid)
            if (!std::isfinite(w))
                throw ConfigError("omega_a_grid entries must be finite");
        if (rho_set.empty())
            throw ConfigError("rho_set must be nonempty");
        for (double r : rho_set)
            if (!std::isfinite(r) || r < -0.5 - 1e-12)
                throw ConfigError("rho_set entries must be finite and >= -1/2");
        break;
    case SweepMode::Tomography:
        if (nu_list.empty())
            throw ConfigError("nu_list must be nonempty");
        for (int nu : nu_list)
            if (nu < 0)
                throw ConfigError("nu_list entries must be >= 0");
        break;
    }
}

void parallel_for_index(int n, int threads, const std::function<void(int)>& fn) {
    if (n <= 0)
        return;
    int workers = threads;
    if (workers <= 0)
        workers = static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, n));

    if (workers == 1) {
        for (int i = 0; i < n; ++i)
            fn(i);
        return;
    }

    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back(work);
    for (auto& t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

ExactSweepResult run_exact_sweep(const SweepConfig& cfg) {
    cfg.validate();
    const int count = cfg.nu_max - cfg.nu_min + 1;

    ExactSweepResult result;
    result.records.resize(count);
    std::vector<double> energies(count + 1);  // one manifold past the range for mu

    parallel_for_index(count + 1, cfg.threads, [&](int i) {
        const int nu = cfg.nu_min + i;
        if (i < count) {
            const GroundState gs = ground_state(cfg.params, nu);
            energies[i] = gs.energy;
            result.records[i] = assemble_record(cfg.params, gs);
        } else {
            const TridiagonalBlock block = hamiltonian_block(cfg.params, nu);
            energies[i] = smallest_eigenvalue(block.diag, block.offdiag);
        }
    });

    for (int i = 0; i < count; ++i)
        result.records[i].mu = energies[i + 1] - energies[i];

    result.light = find_statistics_crossings(result.records, Subsystem::Light,
                                             cfg.jump_threshold);
    result.matter = find_statistics_crossings(result.records, Subsystem::Matter,
                                              cfg.jump_threshold);
    return result;
}

std::vector<VariationalPoint> run_variational_sweep(const SweepConfig& cfg) {
    cfg.validate();
    std::vector<VariationalPoint> points(cfg.rho_steps);
    const double step =
        cfg.rho_steps > 1 ? (cfg.rho_max - cfg.rho_min) / (cfg.rho_steps - 1) : 0.0;
    parallel_for_index(cfg.rho_steps, cfg.threads, [&](int i) {
        const double target = cfg.rho_min + step * i;
        points[i].target = target;
        points[i].solution = solve_variational(cfg.params, target, cfg.eta, cfg.epsilon);
    });
    return points;
}

std::vector<ScalingPoint> run_scaling_sweep(const SweepConfig& cfg) {
    cfg.validate();
    const int n_emitters = cfg.params.n_emitters;

    // Resolve densities to manifolds up front so misaligned grids fail fast.
    std::vector<int> nus(cfg.rho_set.size());
    for (std::size_t r = 0; r < cfg.rho_set.size(); ++r) {
        const double exact = n_emitters * (cfg.rho_set[r] + 0.5);
        const long nu = std::lround(exact);
        if (std::abs(exact - nu) > 1e-9 * std::max(1.0, std::abs(exact)))
            throw ConfigError("rho_ex = " + format_double(cfg.rho_set[r]) +
                              " is not an integral manifold for N = " +
                              std::to_string(n_emitters));
        nus[r] = static_cast<int>(nu);
    }

    const int per = static_cast<int>(cfg.rho_set.size());
    const int total = static_cast<int>(cfg.omega_a_grid.size()) * per;
    std::vector<ScalingPoint> points(total);
    parallel_for_index(total, cfg.threads, [&](int i) {
        const int wi = i / per;
        const int ri = i % per;
        ModelParams params = cfg.params;
        params.detuning = params.omega_c - cfg.omega_a_grid[wi];

        const GroundState gs = ground_state(params, nus[ri]);
        ScalingPoint& pt = points[i];
        pt.omega_a = cfg.omega_a_grid[wi];
        pt.nu = nus[ri];
        pt.rho_ex = excitation_density(params, nus[ri]);
        pt.jz = jz_mean(gs);
        pt.jz_scaled = scaled_inversion(pt.jz, params, nus[ri]);
    });
    return points;
}

std::vector<TomographySection> run_tomography(const SweepConfig& cfg) {
    cfg.validate();
    std::vector<TomographySection> sections(cfg.nu_list.size());
    parallel_for_index(static_cast<int>(cfg.nu_list.size()), cfg.threads, [&](int i) {
        const int nu = cfg.nu_list[i];
        const GroundState gs = ground_state(cfg.params, nu);
        sections[i] = {nu, density_matrix_elements(gs)};
    });
    return sections;
}

namespace {

void echo(std::ostream& out, const char* key, const std::string& value) {
    out << "# " << key << " = " << value << "\n";
}

void echo(std::ostream& out, const char* key, double value) {
    echo(out, key, format_double(value));
}

void echo(std::ostream& out, const char* key, int value) {
    echo(out, key, std::to_string(value));
}

template <typename T>
std::string join(const std::vector<T>& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) s.push_back(',');
        if constexpr (std::is_same_v<T, double>)
            s += format_double(values[i]);
        else
            s += std::to_string(values[i]);
    }
    return s;
}

void echo_params(std::ostream& out, const ModelParams& p) {
    echo(out, "emitters", p.n_emitters);
    echo(out, "omega_c", p.omega_c);
    echo(out, "coupling", p.coupling);
}

void write_crossings(std::ostream& out, const char* name,
                     const std::vector<Crossing>& crossings) {
    for (const Crossing& c : crossings)
        out << "# crossing subsystem=" << name << " rho_ex=" << format_double(c.rho_ex)
            << " kind=" << (c.discontinuous ? "jump" : "interpolated") << "\n";
}

} // namespace

void write_exact_csv(std::ostream& out, const SweepConfig& cfg,
                     const ExactSweepResult& result) {
    echo(out, "mode", std::string("exact"));
    echo_params(out, cfg.params);
    echo(out, "detuning", cfg.params.detuning);
    echo(out, "nu_min", cfg.nu_min);
    echo(out, "nu_max", cfg.nu_max);
    echo(out, "jump_threshold", cfg.jump_threshold);
    out << "nu,rho_ex,energy,mu,mu_scaled,jz,jz_abs,jz_scaled,"
           "light_mean,light_var,light_skew,light_kurt,"
           "matter_mean,matter_var,matter_skew,matter_kurt,"
           "g2,lin_entropy,poisson_skew,poisson_kurt\n";
    const double g = cfg.params.coupling;
    for (const ObservableRecord& r : result.records) {
        std::optional<double> mu_scaled;
        if (r.mu)
            mu_scaled = (*r.mu - cfg.params.omega_c) / g;
        out << r.nu << ',' << format_double(r.rho_ex) << ','
            << format_double(r.energy) << ',' << format_cell(r.mu) << ','
            << format_cell(mu_scaled) << ',' << format_double(r.jz) << ','
            << format_double(std::abs(r.jz)) << ',' << format_cell(r.jz_scaled) << ','
            << format_double(r.light.mean) << ',' << format_double(r.light.variance)
            << ',' << format_cell(r.light.skewness) << ','
            << format_cell(r.light.kurtosis) << ',' << format_double(r.matter.mean)
            << ',' << format_double(r.matter.variance) << ','
            << format_cell(r.matter.skewness) << ',' << format_cell(r.matter.kurtosis)
            << ',' << format_cell(r.g2) << ',' << format_double(r.lin_entropy) << ','
            << format_cell(r.poisson_skew) << ',' << format_cell(r.poisson_kurt)
            << "\n";
    }
    write_crossings(out, "light", result.light);
    write_crossings(out, "matter", result.matter);
}

void write_variational_csv(std::ostream& out, const SweepConfig& cfg,
                           const std::vector<VariationalPoint>& points) {
    echo(out, "mode", std::string("variational"));
    echo_params(out, cfg.params);
    echo(out, "detuning", cfg.params.detuning);
    echo(out, "eta", cfg.eta);
    echo(out, "epsilon", cfg.epsilon);
    echo(out, "rho_min", cfg.rho_min);
    echo(out, "rho_max", cfg.rho_max);
    echo(out, "rho_steps", cfg.rho_steps);
    out << "rho_target,rho_ex,alpha,theta,phi,mu,mu_scaled,mbar,"
           "constraint_residual,grad_norm\n";
    for (const VariationalPoint& p : points) {
        const VariationalSolution& s = p.solution;
        out << format_double(p.target) << ',' << format_double(s.rho_ex) << ','
            << format_double(s.alpha) << ',' << format_double(s.theta) << ','
            << format_double(s.phi) << ',' << format_double(s.mu) << ','
            << format_double((s.mu - cfg.params.omega_c) / cfg.params.coupling) << ','
            << format_double(s.mbar_value) << ','
            << format_double(s.constraint_residual) << ','
            << format_double(s.grad_norm) << "\n";
    }
}

void write_scaling_csv(std::ostream& out, const SweepConfig& cfg,
                       const std::vector<ScalingPoint>& points) {
    echo(out, "mode", std::string("scaling"));
    echo_params(out, cfg.params);
    echo(out, "omega_a_grid", join(cfg.omega_a_grid));
    echo(out, "rho_set", join(cfg.rho_set));
    out << "omega_a,detuning,nu,rho_ex,jz,jz_scaled\n";
    for (const ScalingPoint& p : points) {
        out << format_double(p.omega_a) << ','
            << format_double(cfg.params.omega_c - p.omega_a) << ',' << p.nu << ','
            << format_double(p.rho_ex) << ',' << format_double(p.jz) << ','
            << format_cell(p.jz_scaled) << "\n";
    }
}

void write_tomography_csv(std::ostream& out, const SweepConfig& cfg,
                          const std::vector<TomographySection>& sections) {
    echo(out, "mode", std::string("tomography"));
    echo_params(out, cfg.params);
    echo(out, "detuning", cfg.params.detuning);
    echo(out, "nu_list", join(cfg.nu_list));
    out << "nu,row_two_m,row_n,col_two_m,col_n,value\n";
    for (const TomographySection& sec : sections) {
        for (const DensityMatrixElement& e : sec.elements) {
            out << sec.nu << ',' << e.row.two_m << ',' << e.row.n_photons << ','
                << e.col.two_m << ',' << e.col.n_photons << ','
                << format_double(e.value) << "\n";
        }
    }
}

} // namespace tc
