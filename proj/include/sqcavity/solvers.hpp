// solvers.hpp: steady states and time evolution of a Liouvillian, with
// truncation-adequacy checks on the Fock cutoff.

#pragma once

#include <functional>
#include <vector>

#include "sqcavity/lindblad.hpp"

namespace sqcavity {

inline constexpr double kTruncationEpsilon = 1e-8;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kHermiticityTolerance = 1e-10;
inline constexpr double kNegativeEigenvalueTolerance = 1e-8;
inline constexpr double kSteadyStateResidual = 1e-8;

// max(4, N/5), clamped below N.
int default_guard(int fock_cutoff);

struct StateDiagnostics {
    double trace_error = 0.0;        // |Tr ρ − 1| after normalization
    double hermiticity_error = 0.0;  // max |ρ − ρ†| after hermitization
    double min_eigenvalue = 0.0;
    double tail_mass = 0.0;          // population of the top default_guard Fock levels
    double raw_trace_error = 0.0;        // before normalization
    double raw_hermiticity_error = 0.0;  // before hermitization
};

// Hermitian, unit-trace, positive state. Construction hermitizes and renormalizes the
// input, then rejects eigenvalues below −1e−8 with CorruptedStateError; small negative
// eigenvalues are recorded in diagnostics, never clipped.
class DensityMatrix {
public:
    DensityMatrix(Space space, Matrix matrix);

    static DensityMatrix pure(Space space, const Eigen::VectorXcd& psi);
    static DensityMatrix basis_state(Space space, int index);

    const Space& space() const noexcept { return space_; }
    const Matrix& matrix() const noexcept { return matrix_; }
    const StateDiagnostics& diagnostics() const noexcept { return diagnostics_; }
    int dim() const noexcept { return space_.dim(); }

private:
    Space space_;
    Matrix matrix_;
    StateDiagnostics diagnostics_;
};

// Σ_α ⟨α,n|ρ|α,n⟩ for n = 0 … N−1 (atom traced out when present).
Eigen::VectorXd photon_populations(const Space& space, const Matrix& rho);

struct TailReport {
    double tail_mass = 0.0;
    int guard = 0;
    bool adequate = false;
};

TailReport check_truncation(const DensityMatrix& rho, int guard, double epsilon = kTruncationEpsilon);

// Cutoff estimated to push the tail below epsilon, from the decay of the top populations.
int suggest_cutoff(const Eigen::VectorXd& populations, int guard, double epsilon);

struct SteadyStateOptions {
    int guard = -1;  // < 0 selects default_guard
    double epsilon = kTruncationEpsilon;
    bool check_truncation = true;
    double residual_tolerance = kSteadyStateResidual;
};

// Solves L·vec(ρ) = 0 with the trace constraint written into row 0.
DensityMatrix steady_state(const Superoperator& l, const SteadyStateOptions& options = {});

// Rebuilds at a larger cutoff whenever the truncation check fails, up to max_cutoff.
DensityMatrix steady_state_adaptive(const std::function<Superoperator(int)>& build, int initial_cutoff,
                                    int max_cutoff, const SteadyStateOptions& options = {});

// ‖L·vec(ρ)‖_∞
double steady_state_residual(const Superoperator& l, const Matrix& rho);

struct EvolveOptions {
    double t_end = 0.0;
    double dt = 0.0;
    std::vector<double> sample_times;  // empty: {0, t_end}
    double trace_drift_tolerance = 1e-8;
};

struct TrajectoryPoint {
    double t;
    DensityMatrix rho;
};

// Classical RK4 on vec(ρ). Requires dt ≤ 0.05 / L.rate_scale.
std::vector<TrajectoryPoint> evolve(const Superoperator& l, const DensityMatrix& rho0, const EvolveOptions& options);

// Σ|eigenvalues| of a − b (both Hermitian).
double trace_distance(const Matrix& a, const Matrix& b);

} // namespace sqcavity
