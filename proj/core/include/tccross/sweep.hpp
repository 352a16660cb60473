#ifndef TCCROSS_SWEEP_HPP
#define TCCROSS_SWEEP_HPP

#include <functional>
#include <iosfwd>
#include <vector>

#include "tccross/model.hpp"
#include "tccross/observables.hpp"
#include "tccross/variational.hpp"

namespace tc {

enum class SweepMode { Exact, Variational, Scaling, Tomography };

// Everything a sweep needs; validate() throws ConfigError with the offending
// field named.  Fields outside the active mode are ignored.
struct SweepConfig {
    SweepMode mode = SweepMode::Exact;
    ModelParams params;

    // exact: inclusive manifold range
    int nu_min = 0;
    int nu_max = 0;
    double jump_threshold = 0.25;

    // variational: density grid, linspace(rho_min, rho_max, rho_steps)
    double rho_min = -0.5;
    double rho_max = 2.5;
    int rho_steps = 61;
    double eta = 0.0;
    double epsilon = 0.0;

    // scaling: emitter-frequency grid times a fixed density set
    std::vector<double> omega_a_grid;
    std::vector<double> rho_set = {-0.4, -0.2, 0.0, 0.2, 0.4, 0.6};

    // tomography: manifolds to dump
    std::vector<int> nu_list;

    int threads = 1;  // 0 = hardware concurrency

    void validate() const;
};

// Runs fn(0..n-1) on the configured number of threads.  Slot-indexed output
// keeps results deterministic regardless of scheduling; the first worker
// exception is rethrown on the caller thread.
void parallel_for_index(int n, int threads, const std::function<void(int)>& fn);

struct ExactSweepResult {
    std::vector<ObservableRecord> records;   // ordered by nu
    std::vector<Crossing> light;
    std::vector<Crossing> matter;
};

ExactSweepResult run_exact_sweep(const SweepConfig& cfg);

struct VariationalPoint {
    double target = 0.0;
    VariationalSolution solution;
};

std::vector<VariationalPoint> run_variational_sweep(const SweepConfig& cfg);

struct ScalingPoint {
    double omega_a = 0.0;
    int nu = 0;
    double rho_ex = 0.0;
    double jz = 0.0;
    std::optional<double> jz_scaled;
};

// Rows ordered omega_a-major, density-minor.  Each density must land on an
// integral manifold for the configured emitter count.
std::vector<ScalingPoint> run_scaling_sweep(const SweepConfig& cfg);

struct TomographySection {
    int nu = 0;
    std::vector<DensityMatrixElement> elements;  // row-major
};

std::vector<TomographySection> run_tomography(const SweepConfig& cfg);

// CSV writers: '# key = value' config echo, one header row, then data.
// Missing values are empty fields.  Output depends only on the config
// physics (thread count never changes a byte).
void write_exact_csv(std::ostream& out, const SweepConfig& cfg,
                     const ExactSweepResult& result);
void write_variational_csv(std::ostream& out, const SweepConfig& cfg,
                           const std::vector<VariationalPoint>& points);
void write_scaling_csv(std::ostream& out, const SweepConfig& cfg,
                       const std::vector<ScalingPoint>& points);
void write_tomography_csv(std::ostream& out, const SweepConfig& cfg,
                          const std::vector<TomographySection>& sections);

} // namespace tc

#endif
