// observables.hpp: moments, photon statistics, atomic population, purity and the
// Wigner function of a cavity state.

#pragma once

#include <vector>

#include "sqcavity/solvers.hpp"

namespace sqcavity {

struct PhotonDistribution {
    Eigen::VectorXd probabilities;  // P(0 … N−1)
    double tail_mass = 0.0;         // Σ P(n) over the top `guard` levels
    int guard = 0;
};

// W(q_i, p_j) with α = (q + ip)/√2, normalized to unit integral over dq dp.
struct WignerGrid {
    std::vector<double> q_axis;
    std::vector<double> p_axis;
    Eigen::MatrixXd values;  // rows follow q, columns follow p
    double max_imaginary = 0.0;
};

struct WignerOptions {
    int pad = kDefaultDisplacementPad;
    int guard = -1;
    double epsilon = kTruncationEpsilon;
    bool check_truncation = true;
    int threads = 1;
};

struct GaussianMoments {
    double integral = 0.0;
    double mean_q = 0.0;
    double mean_p = 0.0;
    double var_q = 0.0;
    double var_p = 0.0;
    double cov_qp = 0.0;

    double major_variance() const;
    double minor_variance() const;
    double variance_ratio() const { return major_variance() / minor_variance(); }
};

cplx expectation(const DensityMatrix& rho, const Operator& op);

// Re Tr(ρ·op); CorruptedStateError when |Im| > 1e−8.
double real_expectation(const DensityMatrix& rho, const Operator& op);

double mean_photon_number(const DensityMatrix& rho);
cplx pair_amplitude(const DensityMatrix& rho);
PhotonDistribution photon_distribution(const DensityMatrix& rho, int guard = -1);
double atom_excited_population(const DensityMatrix& rho);
DensityMatrix partial_trace_atom(const DensityMatrix& rho);
double purity(const DensityMatrix& rho);

WignerGrid wigner(const DensityMatrix& rho_field, const std::vector<double>& q_axis,
                  const std::vector<double>& p_axis, const WignerOptions& options = {});

// `points` evenly spaced values on [−extent, extent].
std::vector<double> symmetric_axis(double extent, int points);

// Trapezoidal integral, means and second moments of a Wigner grid.
GaussianMoments wigner_moments(const WignerGrid& grid);

} // namespace sqcavity
