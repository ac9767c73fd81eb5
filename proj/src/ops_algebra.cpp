#include "sqcavity/ops_algebra.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "sqcavity/errors.hpp"

namespace sqcavity {

namespace {

void require_cutoff(int fock_cutoff) {
    if (fock_cutoff < 2) {
        throw DimensionError("fock cutoff must be >= 2, got " + std::to_string(fock_cutoff));
    }
}

std::string describe(const Space& s) {
    switch (s.kind()) {
    case Space::Kind::atom: return "atom";
    case Space::Kind::field: return "field(" + std::to_string(s.fock_cutoff()) + ")";
    case Space::Kind::composite: return "atom⊗field(" + std::to_string(s.fock_cutoff()) + ")";
    }
    return "?";
}

} // namespace

SpaceDims::SpaceDims(int cutoff) : fock_cutoff(cutoff) { require_cutoff(cutoff); }

Level parse_level(std::string_view label) {
    if (label == "g") return Level::g;
    if (label == "e") return Level::e;
    throw LabelError("unknown atomic level '" + std::string(label) + "' (expected 'g' or 'e')");
}

Space Space::field(int fock_cutoff) {
    require_cutoff(fock_cutoff);
    return Space(Kind::field, fock_cutoff);
}

SpaceDims Space::dims() const {
    if (kind_ != Kind::composite) throw DimensionError("space " + describe(*this) + " is not composite");
    return SpaceDims(cutoff_);
}

int Space::dim() const noexcept {
    switch (kind_) {
    case Kind::atom: return SpaceDims::atom_dim;
    case Kind::field: return cutoff_;
    case Kind::composite: return SpaceDims::atom_dim * cutoff_;
    }
    return 0;
}

void require_same_space(const Space& a, const Space& b, std::string_view context) {
    if (!(a == b)) {
        throw DimensionError(std::string(context) + ": space mismatch " + describe(a) + " vs " + describe(b));
    }
}

Operator::Operator(Space space, Matrix matrix) : space_(space), matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() != space_.dim()) {
        throw DimensionError("operator matrix is " + std::to_string(matrix_.rows()) + "x" +
                             std::to_string(matrix_.cols()) + " but space " + describe(space_) +
                             " has dimension " + std::to_string(space_.dim()));
    }
}

Operator operator+(const Operator& a, const Operator& b) {
    require_same_space(a.space_, b.space_, "operator +");
    return {a.space_, a.matrix_ + b.matrix_};
}

Operator operator-(const Operator& a, const Operator& b) {
    require_same_space(a.space_, b.space_, "operator -");
    return {a.space_, a.matrix_ - b.matrix_};
}

Operator operator*(const Operator& a, const Operator& b) {
    require_same_space(a.space_, b.space_, "operator *");
    return {a.space_, a.matrix_ * b.matrix_};
}

Operator identity(const Space& space) {
    return {space, Matrix::Identity(space.dim(), space.dim())};
}

Operator annihilation(int fock_cutoff) {
    const Space space = Space::field(fock_cutoff);
    Matrix m = Matrix::Zero(fock_cutoff, fock_cutoff);
    for (int n = 1; n < fock_cutoff; ++n) {
        m(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return {space, std::move(m)};
}

Operator creation(int fock_cutoff) { return annihilation(fock_cutoff).adjoint(); }

Operator number(int fock_cutoff) {
    const Space space = Space::field(fock_cutoff);
    Matrix m = Matrix::Zero(fock_cutoff, fock_cutoff);
    for (int n = 0; n < fock_cutoff; ++n) m(n, n) = static_cast<double>(n);
    return {space, std::move(m)};
}

Operator atom_sigma(Level i, Level j) {
    Matrix m = Matrix::Zero(2, 2);
    m(static_cast<int>(i), static_cast<int>(j)) = 1.0;
    return {Space::atom(), std::move(m)};
}

Operator atom_sigma(std::string_view i, std::string_view j) {
    return atom_sigma(parse_level(i), parse_level(j));
}

Operator lift(const Operator& op, Subsystem subsystem, const SpaceDims& dims) {
    const int n = dims.fock_cutoff;
    const Space target = Space::composite(dims);
    Matrix out = Matrix::Zero(dims.total_dim(), dims.total_dim());
    if (subsystem == Subsystem::atom) {
        require_same_space(op.space(), Space::atom(), "lift(atom)");
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                const cplx v = op.matrix()(a, b);
                if (v == cplx{}) continue;
                out.block(a * n, b * n, n, n).diagonal().setConstant(v);
            }
        }
    } else {
        require_same_space(op.space(), Space::field(n), "lift(field)");
        for (int a = 0; a < 2; ++a) out.block(a * n, a * n, n, n) = op.matrix();
    }
    return {target, std::move(out)};
}

Operator parity(int fock_cutoff) {
    const Space space = Space::field(fock_cutoff);
    Matrix m = Matrix::Zero(fock_cutoff, fock_cutoff);
    for (int n = 0; n < fock_cutoff; ++n) m(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
    return {space, std::move(m)};
}

Operator bogoliubov_b(double r, int fock_cutoff) {
    const Operator a = annihilation(fock_cutoff);
    return cplx(std::cosh(r)) * a - cplx(std::sinh(r)) * a.adjoint();
}

Displacer::Displacer(int fock_cutoff, int pad) : cutoff_(fock_cutoff), pad_(pad) {
    require_cutoff(fock_cutoff);
    if (pad < 0) throw DimensionError("displacement pad must be >= 0");
    const int k = cutoff_ + pad_;
    const Matrix a = annihilation(k).matrix();
    // i(a† − a) is Hermitian, so exp(|α|(a† − a)) = V exp(−i|α|Λ) V†.
    const Matrix generator = cplx(0.0, 1.0) * (a.adjoint() - a);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(generator);
    vectors_ = eig.eigenvectors();
    values_ = eig.eigenvalues();
}

Matrix Displacer::leading_rows(cplx alpha, int rows) const {
    const int k = padded_dim();
    const double mag = std::abs(alpha);
    const double theta = std::arg(alpha);

    // Rotating by e^{iθ a†a} maps a† − a onto e^{iθ}a† − e^{−iθ}a.
    Eigen::VectorXcd phases(values_.size());
    for (Eigen::Index j = 0; j < values_.size(); ++j) phases(j) = std::polar(1.0, -mag * values_(j));
    Matrix out = (vectors_.topRows(rows) * phases.asDiagonal()) * vectors_.adjoint();
    for (int m = 0; m < rows; ++m) {
        for (int n = 0; n < k; ++n) out(m, n) *= std::polar(1.0, theta * (m - n));
    }
    return out;
}

Matrix Displacer::padded(cplx alpha) const { return leading_rows(alpha, padded_dim()); }

Operator displacement(cplx alpha, int fock_cutoff, int pad) {
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
        throw DimensionError("displacement amplitude must be finite");
    }
    const Displacer displacer(fock_cutoff, pad);
    return {Space::field(fock_cutoff), displacer.padded(alpha).topLeftCorner(fock_cutoff, fock_cutoff)};
}

double unitarity_defect(const Operator& d, int columns) {
    if (columns < 0 || columns > d.dim()) throw DimensionError("unitarity_defect: column count out of range");
    if (columns == 0) return 0.0;
    const Matrix block = d.matrix().leftCols(columns);
    const Matrix gram = block.adjoint() * block;
    return (gram - Matrix::Identity(columns, columns)).cwiseAbs().maxCoeff();
}

} // namespace sqcavity
