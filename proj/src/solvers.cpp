#include "sqcavity/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#ifdef SQCAVITY_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

#include "sqcavity/errors.hpp"

namespace sqcavity {

namespace {

using Vector = Eigen::VectorXcd;

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unvec(const Vector& v, int d) { return Eigen::Map<const Matrix>(v.data(), d, d); }

Vector solve_sparse(const SparseMatrix& system, const Vector& rhs) {
#ifdef SQCAVITY_HAVE_UMFPACK
    Eigen::UmfPackLU<SparseMatrix> lu;
#else
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
#endif
    lu.compute(system);
    if (lu.info() != Eigen::Success) {
        throw NonUniqueSteadyStateError("steady_state: trace-constrained generator is singular");
    }
    Vector x = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !x.allFinite()) {
        throw NonUniqueSteadyStateError("steady_state: linear solve failed");
    }
    return x;
}

double tail_sum(const Eigen::VectorXd& populations, int guard) {
    return populations.tail(guard).sum();
}

} // namespace

int default_guard(int fock_cutoff) { return std::min(fock_cutoff - 1, std::max(4, fock_cutoff / 5)); }

DensityMatrix::DensityMatrix(Space space, Matrix matrix) : space_(space), matrix_(std::move(matrix)) {
    const int d = space_.dim();
    if (matrix_.rows() != d || matrix_.cols() != d) {
        throw DimensionError("density matrix shape does not match its space");
    }
    if (!matrix_.allFinite()) throw CorruptedStateError("density matrix has non-finite entries");

    diagnostics_.raw_hermiticity_error = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
    const cplx trace = matrix_.trace();
    diagnostics_.raw_trace_error = std::abs(trace - 1.0);
    if (std::abs(trace) < 1e-300) throw CorruptedStateError("density matrix has zero trace");
    matrix_ /= trace.real();

    diagnostics_.trace_error = std::abs(matrix_.trace() - 1.0);
    diagnostics_.hermiticity_error = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(matrix_, Eigen::EigenvaluesOnly);
    diagnostics_.min_eigenvalue = eig.eigenvalues().minCoeff();
    if (space_.has_field()) {
        diagnostics_.tail_mass = tail_sum(photon_populations(space_, matrix_), default_guard(space_.fock_cutoff()));
    }
    if (diagnostics_.min_eigenvalue < -kNegativeEigenvalueTolerance) {
        std::ostringstream msg;
        msg << "density matrix has eigenvalue " << diagnostics_.min_eigenvalue << " below -"
            << kNegativeEigenvalueTolerance;
        throw CorruptedStateError(msg.str());
    }
}

DensityMatrix DensityMatrix::pure(Space space, const Eigen::VectorXcd& psi) {
    if (psi.size() != space.dim()) throw DimensionError("state vector length does not match its space");
    const double norm = psi.norm();
    if (norm == 0.0) throw CorruptedStateError("zero state vector");
    const Eigen::VectorXcd unit = psi / norm;
    return {space, unit * unit.adjoint()};
}

DensityMatrix DensityMatrix::basis_state(Space space, int index) {
    if (index < 0 || index >= space.dim()) throw DimensionError("basis index out of range");
    Matrix m = Matrix::Zero(space.dim(), space.dim());
    m(index, index) = 1.0;
    return {space, std::move(m)};
}

Eigen::VectorXd photon_populations(const Space& space, const Matrix& rho) {
    if (!space.has_field()) throw DimensionError("photon_populations: space has no field mode");
    const int n = space.fock_cutoff();
    const int blocks = space.has_atom() ? SpaceDims::atom_dim : 1;
    Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
    for (int a = 0; a < blocks; ++a) {
        for (int k = 0; k < n; ++k) p(k) += rho(a * n + k, a * n + k).real();
    }
    return p;
}

TailReport check_truncation(const DensityMatrix& rho, int guard, double epsilon) {
    const int n = rho.space().fock_cutoff();
    if (guard < 0 || guard >= n) {
        throw DimensionError("truncation guard " + std::to_string(guard) + " must lie in [0, " + std::to_string(n) + ")");
    }
    TailReport report;
    report.guard = guard;
    report.tail_mass = tail_sum(photon_populations(rho.space(), rho.matrix()), guard);
    report.adequate = report.tail_mass < epsilon;
    return report;
}

int suggest_cutoff(const Eigen::VectorXd& populations, int guard, double epsilon) {
    const int n = static_cast<int>(populations.size());
    guard = std::max(guard, 1);
    const double top = std::abs(populations.tail(guard).sum());
    const double below = 2 * guard <= n ? std::abs(populations.segment(n - 2 * guard, guard).sum()) : 0.0;
    int grown = 2 * n;
    if (below > 0.0 && top > 0.0 && top < below) {
        // Tail shrinks by top/below per `guard` levels; aim an order of magnitude under epsilon.
        const double blocks = std::log(0.1 * epsilon / top) / std::log(top / below);
        grown = n + static_cast<int>(std::ceil(std::max(blocks, 1.0) * guard));
    }
    return std::clamp(grown, n + guard, 4 * n);
}

double steady_state_residual(const Superoperator& l, const Matrix& rho) {
    return (l.matrix * vec(rho)).cwiseAbs().maxCoeff();
}

DensityMatrix steady_state(const Superoperator& l, const SteadyStateOptions& options) {
    const int d = l.dim();
    const Eigen::Index d2 = Eigen::Index(d) * d;
    if (l.matrix.rows() != d2 || l.matrix.cols() != d2) throw DimensionError("steady_state: generator shape mismatch");
    const double scale = std::max(1.0, l.rate_scale);
    if (trace_row_defect(l) > 1e-10 * scale) {
        throw std::invalid_argument("steady_state: generator is not trace preserving");
    }

    // Row 0 of L·vec(ρ) = 0 is redundant given trace preservation; replace it by Tr ρ = 1.
    std::vector<Eigen::Triplet<cplx>> triplets;
    triplets.reserve(static_cast<std::size_t>(l.matrix.nonZeros()) + d);
    for (int k = 0; k < l.matrix.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(l.matrix, k); it; ++it) {
            if (it.row() != 0) triplets.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
        }
    }
    for (int i = 0; i < d; ++i) triplets.emplace_back(0, i * (d + 1), 1.0);
    SparseMatrix system(d2, d2);
    system.setFromTriplets(triplets.begin(), triplets.end());
    system.makeCompressed();

    Vector rhs = Vector::Zero(d2);
    rhs(0) = 1.0;
    const Vector x = solve_sparse(system, rhs);

    DensityMatrix rho(l.space, unvec(x, d));
    const double residual = steady_state_residual(l, rho.matrix());
    if (residual >= options.residual_tolerance * scale) {
        std::ostringstream msg;
        msg << "steady_state: residual " << residual << " exceeds " << options.residual_tolerance * scale
            << "; kernel is not one-dimensional";
        throw NonUniqueSteadyStateError(msg.str());
    }

    if (options.check_truncation && l.space.has_field()) {
        const int n = l.space.fock_cutoff();
        const int guard = options.guard < 0 ? default_guard(n) : options.guard;
        const TailReport tail = check_truncation(rho, guard, options.epsilon);
        if (!tail.adequate) {
            const int suggested = suggest_cutoff(photon_populations(rho.space(), rho.matrix()), guard, options.epsilon);
            std::ostringstream msg;
            msg << "fock cutoff " << n << " too small: tail mass " << tail.tail_mass << " in top " << guard
                << " levels exceeds " << options.epsilon << "; try cutoff " << suggested;
            throw TruncationError(msg.str(), n, suggested);
        }
    }
    return rho;
}

DensityMatrix steady_state_adaptive(const std::function<Superoperator(int)>& build, int initial_cutoff,
                                    int max_cutoff, const SteadyStateOptions& options) {
    int cutoff = initial_cutoff;
    for (;;) {
        try {
            return steady_state(build(cutoff), options);
        } catch (const TruncationError& e) {
            if (cutoff >= max_cutoff) throw;
            cutoff = std::min(max_cutoff, e.suggested_cutoff());
        }
    }
}

std::vector<TrajectoryPoint> evolve(const Superoperator& l, const DensityMatrix& rho0, const EvolveOptions& options) {
    require_same_space(l.space, rho0.space(), "evolve");
    if (!(options.dt > 0.0)) throw std::invalid_argument("evolve: dt must be > 0");
    if (!(options.t_end >= 0.0)) throw std::invalid_argument("evolve: t_end must be >= 0");
    if (l.rate_scale > 0.0 && options.dt > 0.05 / l.rate_scale * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "evolve: dt = " << options.dt << " exceeds stability bound 0.05/" << l.rate_scale;
        throw StepTooLargeError(msg.str());
    }

    std::vector<double> samples = options.sample_times;
    if (samples.empty()) samples = {0.0, options.t_end};
    std::sort(samples.begin(), samples.end());
    if (samples.front() < 0.0 || samples.back() > options.t_end * (1.0 + 1e-12)) {
        throw std::invalid_argument("evolve: sample times must lie in [0, t_end]");
    }

    const int d = l.dim();
    const double h_max = options.dt;
    Vector y = vec(rho0.matrix());
    Vector k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size());
    auto step = [&](double h) {
        k1 = l.matrix * y;
        k2 = l.matrix * (y + 0.5 * h * k1);
        k3 = l.matrix * (y + 0.5 * h * k2);
        k4 = l.matrix * (y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };

    std::vector<TrajectoryPoint> out;
    out.reserve(samples.size());
    double t = 0.0;
    long steps_taken = 0;
    for (double target : samples) {
        // Uniform steps from t = 0 where possible, so runs at dt and dt/2 share grid points.
        while (t < target - 1e-12 * std::max(1.0, target)) {
            const double next = std::min(target, static_cast<double>(steps_taken + 1) * h_max);
            step(next - t);
            t = next;
            if (std::abs(t - static_cast<double>(steps_taken + 1) * h_max) < 1e-12 * std::max(1.0, t)) ++steps_taken;
            if (!y.allFinite()) throw DivergenceError("evolve: state became non-finite at t = " + std::to_string(t));
        }
        Matrix rho = unvec(y, d);
        const double drift = std::abs(rho.trace() - 1.0);
        if (drift > options.trace_drift_tolerance) {
            throw DivergenceError("evolve: trace drift " + std::to_string(drift) + " at t = " + std::to_string(t));
        }
        rho = 0.5 * (rho + rho.adjoint()).eval();
        y = vec(rho);
        out.push_back({target, DensityMatrix(l.space, std::move(rho))});
    }
    return out;
}

double trace_distance(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("trace_distance: shape mismatch");
    const Matrix diff = 0.5 * ((a - b) + (a - b).adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(diff, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().cwiseAbs().sum();
}

} // namespace sqcavity
