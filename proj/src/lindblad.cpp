#include "sqcavity/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "sqcavity/errors.hpp"

namespace sqcavity {

namespace {

SparseMatrix sparse_identity(int d) {
    SparseMatrix id(d, d);
    id.setIdentity();
    return id;
}

SparseMatrix to_sparse(const Matrix& m) { return m.sparseView(); }

double bath_rate(double kappa, const SqueezedBath& bath) {
    return kappa * (1.0 + 2.0 * bath.n_th() + 2.0 * std::abs(bath.m_corr()));
}

double hamiltonian_rate(const SystemParams& p) {
    double rate = std::abs(p.delta_C);
    if (p.atom_present) rate = std::max({rate, std::abs(p.delta_A), p.g0, p.gamma});
    return rate;
}

void require_atom_space(const SystemParams& params, const Space& space, std::string_view context) {
    if (space.kind() == Space::Kind::atom) {
        throw DimensionError(std::string(context) + ": the model needs a field mode");
    }
    if (params.atom_present && space.kind() != Space::Kind::composite) {
        throw DimensionError(std::string(context) + ": atom_present requires the composite space");
    }
}

// g₀(σ_eg·c + σ_ge·c†) for a field coupling operator c.
Operator jaynes_cummings(double g0, const Operator& coupling, const SpaceDims& dims) {
    const Operator sigma_eg = lift(atom_sigma(Level::e, Level::g), Subsystem::atom, dims);
    const Operator c = lift(coupling, Subsystem::field, dims);
    const Operator term = sigma_eg * c;
    return cplx(g0) * (term + term.adjoint());
}

Superoperator assemble(const SystemParams& params, const Operator& h, const Superoperator& cavity,
                       const Space& space) {
    Superoperator l = commutator_superoperator(h) + cavity;
    if (params.atom_present) l = l + atom_dissipator(params.gamma, space.dims());
    l.rate_scale = std::max(hamiltonian_rate(params), cavity.rate_scale);
    return l;
}

} // namespace

void SystemParams::validate() const {
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be > 0");
    if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
    if (!(g0 >= 0.0)) throw std::invalid_argument("g0 must be >= 0");
    if (!std::isfinite(delta_A) || !std::isfinite(delta_C)) throw std::invalid_argument("detunings must be finite");
}

void SqueezedBath::validate() const {
    if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("squeezing strength r must be finite and >= 0");
    if (!std::isfinite(phi)) throw std::invalid_argument("squeezing phase must be finite");
}

double SqueezedBath::n_th() const {
    const double s = std::sinh(r);
    return s * s;
}

cplx SqueezedBath::m_corr() const { return std::cosh(r) * std::sinh(r) * std::polar(1.0, phi); }

Matrix Superoperator::apply(const Matrix& rho) const {
    const int d = dim();
    if (rho.rows() != d || rho.cols() != d) throw DimensionError("Superoperator::apply: state has wrong shape");
    const Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.data(), Eigen::Index(d) * d);
    const Eigen::VectorXcd out = matrix * v;
    return Eigen::Map<const Matrix>(out.data(), d, d);
}

Superoperator operator+(const Superoperator& a, const Superoperator& b) {
    require_same_space(a.space, b.space, "superoperator +");
    return {a.space, a.matrix + b.matrix, std::max(a.rate_scale, b.rate_scale)};
}

Space model_space(const SystemParams& params, int fock_cutoff) {
    return params.atom_present ? Space::composite(SpaceDims(fock_cutoff)) : Space::field(fock_cutoff);
}

SparseMatrix left_multiply(const Matrix& a) {
    return Eigen::kroneckerProduct(sparse_identity(static_cast<int>(a.rows())), to_sparse(a));
}

SparseMatrix right_multiply(const Matrix& b) {
    return Eigen::kroneckerProduct(to_sparse(b.transpose()), sparse_identity(static_cast<int>(b.rows())));
}

SparseMatrix sandwich(const Matrix& a, const Matrix& b) {
    return Eigen::kroneckerProduct(to_sparse(b.transpose()), to_sparse(a));
}

Superoperator zero_superoperator(const Space& space) {
    const int d2 = space.dim() * space.dim();
    return {space, SparseMatrix(d2, d2), 0.0};
}

Superoperator commutator_superoperator(const Operator& h) {
    const cplx minus_i(0.0, -1.0);
    SparseMatrix m = minus_i * (left_multiply(h.matrix()) - right_multiply(h.matrix()));
    m.prune(cplx{});
    return {h.space(), std::move(m), h.matrix().cwiseAbs().maxCoeff()};
}

Operator field_operator(const Operator& field_op, const Space& space) {
    if (space.kind() == Space::Kind::composite) return lift(field_op, Subsystem::field, space.dims());
    require_same_space(field_op.space(), space, "field_operator");
    return field_op;
}

Operator build_hamiltonian(const SystemParams& params, const Space& space) {
    params.validate();
    require_atom_space(params, space, "build_hamiltonian");
    const int n = space.fock_cutoff();
    Operator h = cplx(params.delta_C) * field_operator(number(n), space);
    if (!params.atom_present) return h;

    const SpaceDims dims = space.dims();
    h = h + cplx(params.delta_A) * lift(atom_sigma(Level::e, Level::e), Subsystem::atom, dims);
    return h + jaynes_cummings(params.g0, annihilation(n), dims);
}

Superoperator atom_dissipator(double gamma, const SpaceDims& dims) {
    if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
    const Space space = Space::composite(dims);
    if (gamma == 0.0) return zero_superoperator(space);

    const Matrix lower = lift(atom_sigma(Level::g, Level::e), Subsystem::atom, dims).matrix();
    const Matrix raise = lift(atom_sigma(Level::e, Level::g), Subsystem::atom, dims).matrix();
    const Matrix excited = lift(atom_sigma(Level::e, Level::e), Subsystem::atom, dims).matrix();
    SparseMatrix m = gamma * (2.0 * sandwich(lower, raise) - left_multiply(excited) - right_multiply(excited));
    return {space, std::move(m), gamma};
}

Superoperator cavity_squeezed_dissipator(double kappa, const SqueezedBath& bath, const Space& space) {
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be > 0");
    bath.validate();
    if (!space.has_field()) throw DimensionError("cavity_squeezed_dissipator: space has no field mode");

    const int n = space.fock_cutoff();
    const Matrix a = field_operator(annihilation(n), space).matrix();
    const Matrix ad = a.adjoint();
    const double big_n = bath.n_th();
    const cplx big_m = bath.m_corr();

    auto bracket = [](const Matrix& x, const Matrix& y) {
        // xyρ − 2yρx + ρxy
        const Matrix xy = x * y;
        return SparseMatrix(left_multiply(xy) - 2.0 * sandwich(y, x) + right_multiply(xy));
    };

    SparseMatrix m = -kappa * (1.0 + big_n) * bracket(ad, a);
    if (big_n != 0.0) m -= kappa * big_n * bracket(a, ad);
    if (big_m != cplx{}) {
        m += (kappa * big_m) * bracket(ad, ad);
        m += (kappa * std::conj(big_m)) * bracket(a, a);
    }
    m.prune(cplx{});
    return {space, std::move(m), bath_rate(kappa, bath)};
}

Superoperator build_liouvillian(const SystemParams& params, const SqueezedBath& bath, const Space& space) {
    params.validate();
    const Operator h = build_hamiltonian(params, space);
    return assemble(params, h, cavity_squeezed_dissipator(params.kappa, bath, space), space);
}

Operator lab_annihilation_in_bogoliubov_frame(double r, const Space& space) {
    const Operator b = annihilation(space.fock_cutoff());
    const Operator a = cplx(std::cosh(r)) * b + cplx(std::sinh(r)) * b.adjoint();
    return field_operator(a, space);
}

Superoperator build_bogoliubov_liouvillian(const SystemParams& params, const SqueezedBath& bath,
                                           const Space& space) {
    params.validate();
    bath.validate();
    if (params.delta_A != 0.0 || params.delta_C != 0.0) {
        throw UnsupportedFrameError("Bogoliubov frame requires delta_A = delta_C = 0");
    }
    if (bath.phi != 0.0) throw UnsupportedFrameError("Bogoliubov frame requires squeezing phase phi = 0");
    require_atom_space(params, space, "build_bogoliubov_liouvillian");

    const int n = space.fock_cutoff();
    Operator h = identity(space) * cplx(0.0);
    if (params.atom_present) {
        const Operator b = annihilation(n);
        const Operator coupling = cplx(std::cosh(bath.r)) * b + cplx(std::sinh(bath.r)) * b.adjoint();
        h = jaynes_cummings(params.g0, coupling, space.dims());
    }
    // In the b-mode basis the squeezed bath is an ordinary vacuum bath.
    Superoperator cavity = cavity_squeezed_dissipator(params.kappa, SqueezedBath{}, space);
    cavity.rate_scale = bath_rate(params.kappa, bath);
    return assemble(params, h, cavity, space);
}

Superoperator build_bogoliubov_liouvillian(const SystemParams& params, double r, const Space& space) {
    return build_bogoliubov_liouvillian(params, SqueezedBath{r, 0.0}, space);
}

double trace_row_defect(const Superoperator& l) {
    const int d = l.dim();
    // vec(I) selects the diagonal entries i + d·i.
    Eigen::VectorXcd row = Eigen::VectorXcd::Zero(l.matrix.cols());
    for (int k = 0; k < l.matrix.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(l.matrix, k); it; ++it) {
            if (it.row() % (d + 1) == 0) row(it.col()) += it.value();
        }
    }
    return row.size() == 0 ? 0.0 : row.cwiseAbs().maxCoeff();
}

} // namespace sqcavity
