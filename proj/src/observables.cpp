#include "sqcavity/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "sqcavity/errors.hpp"

namespace sqcavity {

namespace {

std::vector<double> trapezoid_weights(const std::vector<double>& axis) {
    const std::size_t n = axis.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = 0.5 * (axis[i + 1] - axis[i]);
        w[i] += h;
        w[i + 1] += h;
    }
    return w;
}

} // namespace

double GaussianMoments::major_variance() const {
    const double mid = 0.5 * (var_q + var_p);
    const double half = std::hypot(0.5 * (var_q - var_p), cov_qp);
    return mid + half;
}

double GaussianMoments::minor_variance() const {
    const double mid = 0.5 * (var_q + var_p);
    const double half = std::hypot(0.5 * (var_q - var_p), cov_qp);
    return mid - half;
}

cplx expectation(const DensityMatrix& rho, const Operator& op) {
    require_same_space(rho.space(), op.space(), "expectation");
    // Tr(ρA) = Σ_ij ρ_ij A_ji
    return (rho.matrix().transpose().cwiseProduct(op.matrix())).sum();
}

double real_expectation(const DensityMatrix& rho, const Operator& op) {
    const cplx v = expectation(rho, op);
    if (std::abs(v.imag()) > 1e-8) {
        std::ostringstream msg;
        msg << "expectation of a Hermitian observable has imaginary part " << v.imag();
        throw CorruptedStateError(msg.str());
    }
    return v.real();
}

double mean_photon_number(const DensityMatrix& rho) {
    return real_expectation(rho, field_operator(number(rho.space().fock_cutoff()), rho.space()));
}

cplx pair_amplitude(const DensityMatrix& rho) {
    const Operator a = annihilation(rho.space().fock_cutoff());
    return expectation(rho, field_operator(a * a, rho.space()));
}

PhotonDistribution photon_distribution(const DensityMatrix& rho, int guard) {
    const int n = rho.space().fock_cutoff();
    PhotonDistribution out;
    out.guard = guard < 0 ? default_guard(n) : guard;
    if (out.guard >= n) throw DimensionError("photon_distribution: guard must be below the cutoff");
    out.probabilities = photon_populations(rho.space(), rho.matrix());
    const double lowest = out.probabilities.minCoeff();
    if (lowest < -1e-8) {
        std::ostringstream msg;
        msg << "photon distribution has negative entry " << lowest;
        throw CorruptedStateError(msg.str());
    }
    out.tail_mass = out.probabilities.tail(out.guard).sum();
    return out;
}

double atom_excited_population(const DensityMatrix& rho) {
    if (rho.space().kind() != Space::Kind::composite) {
        throw DimensionError("atom_excited_population: state has no atom");
    }
    return real_expectation(rho, lift(atom_sigma(Level::e, Level::e), Subsystem::atom, rho.space().dims()));
}

DensityMatrix partial_trace_atom(const DensityMatrix& rho) {
    if (rho.space().kind() != Space::Kind::composite) throw DimensionError("partial_trace_atom: state has no atom");
    const int n = rho.space().fock_cutoff();
    const Matrix& m = rho.matrix();
    return {Space::field(n), m.topLeftCorner(n, n) + m.bottomRightCorner(n, n)};
}

double purity(const DensityMatrix& rho) {
    return rho.matrix().cwiseAbs2().sum();
}

std::vector<double> symmetric_axis(double extent, int points) {
    if (points < 2 || !(extent > 0.0)) throw std::invalid_argument("symmetric_axis: need extent > 0 and >= 2 points");
    std::vector<double> axis(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) axis[static_cast<std::size_t>(i)] = -extent + 2.0 * extent * i / (points - 1);
    return axis;
}

WignerGrid wigner(const DensityMatrix& rho_field, const std::vector<double>& q_axis,
                  const std::vector<double>& p_axis, const WignerOptions& options) {
    if (rho_field.space().kind() != Space::Kind::field) throw DimensionError("wigner: needs a field-only state");
    for (double v : q_axis) if (!std::isfinite(v)) throw std::invalid_argument("wigner: non-finite q axis");
    for (double v : p_axis) if (!std::isfinite(v)) throw std::invalid_argument("wigner: non-finite p axis");

    const int n = rho_field.space().fock_cutoff();
    if (options.check_truncation) {
        const int guard = options.guard < 0 ? default_guard(n) : options.guard;
        const TailReport tail = check_truncation(rho_field, guard, options.epsilon);
        if (!tail.adequate) {
            const int suggested = suggest_cutoff(photon_populations(rho_field.space(), rho_field.matrix()), guard,
                                                 options.epsilon);
            std::ostringstream msg;
            msg << "wigner: fock cutoff " << n << " too small (tail mass " << tail.tail_mass << "); try cutoff "
                << suggested;
            throw TruncationError(msg.str(), n, suggested);
        }
    }

    const Displacer displacer(n, options.pad);
    const int k = displacer.padded_dim();
    Eigen::VectorXd parity_signs(k);
    for (int i = 0; i < k; ++i) parity_signs(i) = (i % 2 == 0) ? 1.0 : -1.0;

    WignerGrid grid{q_axis, p_axis, Eigen::MatrixXd::Zero(Eigen::Index(q_axis.size()), Eigen::Index(p_axis.size())), 0.0};
    std::vector<double> worker_imag(static_cast<std::size_t>(std::max(1, options.threads)), 0.0);
    const Matrix& rho = rho_field.matrix();

    // W(α) = (1/π) Σ_k (−1)^k [D(α)† ρ D(α)]_kk with D restricted to the rows where ρ lives.
    auto evaluate_rows = [&](std::size_t worker, std::size_t stride) {
        for (std::size_t i = worker; i < q_axis.size(); i += stride) {
            for (std::size_t j = 0; j < p_axis.size(); ++j) {
                const cplx alpha = cplx(q_axis[i], p_axis[j]) / std::numbers::sqrt2;
                const Matrix d = displacer.leading_rows(alpha, n);
                const Matrix rho_d = rho * d;
                const Eigen::VectorXcd diag = (d.conjugate().cwiseProduct(rho_d)).colwise().sum().transpose();
                const cplx w = diag.dot(parity_signs.cast<cplx>()) / std::numbers::pi;
                grid.values(Eigen::Index(i), Eigen::Index(j)) = w.real();
                worker_imag[worker] = std::max(worker_imag[worker], std::abs(w.imag()));
            }
        }
    };

    const std::size_t workers = std::min<std::size_t>(worker_imag.size(), std::max<std::size_t>(q_axis.size(), 1));
    if (workers <= 1) {
        evaluate_rows(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(evaluate_rows, w, workers);
    }

    grid.max_imaginary = *std::max_element(worker_imag.begin(), worker_imag.end());
    if (grid.max_imaginary > 1e-8) {
        std::ostringstream msg;
        msg << "wigner: imaginary part " << grid.max_imaginary << " exceeds 1e-8";
        throw CorruptedStateError(msg.str());
    }
    return grid;
}

GaussianMoments wigner_moments(const WignerGrid& grid) {
    const auto wq = trapezoid_weights(grid.q_axis);
    const auto wp = trapezoid_weights(grid.p_axis);
    GaussianMoments m;
    double sq = 0, sp = 0, sqq = 0, spp = 0, sqp = 0;
    for (std::size_t i = 0; i < grid.q_axis.size(); ++i) {
        for (std::size_t j = 0; j < grid.p_axis.size(); ++j) {
            const double w = wq[i] * wp[j] * grid.values(Eigen::Index(i), Eigen::Index(j));
            const double q = grid.q_axis[i];
            const double p = grid.p_axis[j];
            m.integral += w;
            sq += w * q;
            sp += w * p;
            sqq += w * q * q;
            spp += w * p * p;
            sqp += w * q * p;
        }
    }
    m.mean_q = sq / m.integral;
    m.mean_p = sp / m.integral;
    m.var_q = sqq / m.integral - m.mean_q * m.mean_q;
    m.var_p = spp / m.integral - m.mean_p * m.mean_p;
    m.cov_qp = sqp / m.integral - m.mean_q * m.mean_p;
    return m;
}

} // namespace sqcavity
