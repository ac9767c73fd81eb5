// ops_algebra.hpp: ladder, atomic and phase-space operators on the atom ⊗ truncated-Fock space

#pragma once

#include <complex>
#include <string_view>

#include <Eigen/Dense>

namespace sqcavity {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr int kDefaultDisplacementPad = 20;

// Composite space bookkeeping. Basis |α⟩⊗|n⟩ sits at flat index α·fock_cutoff + n
// (atom slow, field fast), with atom index g = 0, e = 1.
struct SpaceDims {
    static constexpr int atom_dim = 2;
    int fock_cutoff;

    explicit SpaceDims(int cutoff);

    int total_dim() const noexcept { return atom_dim * fock_cutoff; }
    friend bool operator==(const SpaceDims&, const SpaceDims&) = default;
};

enum class Subsystem { atom, field };
enum class Level { g = 0, e = 1 };

Level parse_level(std::string_view label);

// Hilbert space an operator acts on.
class Space {
public:
    enum class Kind { atom, field, composite };

    static Space atom() { return Space(Kind::atom, 0); }
    static Space field(int fock_cutoff);
    static Space composite(const SpaceDims& dims) { return Space(Kind::composite, dims.fock_cutoff); }

    Kind kind() const noexcept { return kind_; }
    int fock_cutoff() const noexcept { return cutoff_; }
    SpaceDims dims() const;  // composite only
    int dim() const noexcept;
    bool has_atom() const noexcept { return kind_ != Kind::field; }
    bool has_field() const noexcept { return kind_ != Kind::atom; }

    friend bool operator==(const Space&, const Space&) = default;

private:
    Space(Kind kind, int cutoff) : kind_(kind), cutoff_(cutoff) {}
    Kind kind_;
    int cutoff_;
};

// Throws DimensionError naming `context` unless a == b.
void require_same_space(const Space& a, const Space& b, std::string_view context);

// Dense operator tagged with its space; immutable once built.
class Operator {
public:
    Operator(Space space, Matrix matrix);

    const Space& space() const noexcept { return space_; }
    const Matrix& matrix() const noexcept { return matrix_; }
    int dim() const noexcept { return static_cast<int>(matrix_.rows()); }

    Operator adjoint() const { return {space_, matrix_.adjoint()}; }

    friend Operator operator+(const Operator& a, const Operator& b);
    friend Operator operator-(const Operator& a, const Operator& b);
    friend Operator operator*(const Operator& a, const Operator& b);
    friend Operator operator*(cplx s, const Operator& a) { return {a.space_, s * a.matrix_}; }
    friend Operator operator*(const Operator& a, cplx s) { return s * a; }

private:
    Space space_;
    Matrix matrix_;
};

Operator identity(const Space& space);

// ⟨n−1|a|n⟩ = √n on |0⟩…|fock_cutoff−1⟩.
Operator annihilation(int fock_cutoff);
Operator creation(int fock_cutoff);
Operator number(int fock_cutoff);

// |i⟩⟨j| on the two-level atom.
Operator atom_sigma(Level i, Level j);
Operator atom_sigma(std::string_view i, std::string_view j);

// Embed an atom-only or field-only operator into the composite space.
Operator lift(const Operator& op, Subsystem subsystem, const SpaceDims& dims);

// diag((−1)^n)
Operator parity(int fock_cutoff);

// cosh(r)·a − sinh(r)·a†
Operator bogoliubov_b(double r, int fock_cutoff);

// exp(α a† − α* a) on the padded space, computed from one eigendecomposition of the
// truncated generator a† − a. Reuse one instance for many α on the same cutoff.
class Displacer {
public:
    Displacer(int fock_cutoff, int pad = kDefaultDisplacementPad);

    int fock_cutoff() const noexcept { return cutoff_; }
    int padded_dim() const noexcept { return cutoff_ + pad_; }

    // Full padded (K×K) exponential.
    Matrix padded(cplx alpha) const;
    // First `rows` rows of the padded exponential (rows × K).
    Matrix leading_rows(cplx alpha, int rows) const;

private:
    int cutoff_;
    int pad_;
    Matrix vectors_;          // eigenvectors of i(a† − a)
    Eigen::VectorXd values_;  // its eigenvalues
};

// D(α) truncated back to fock_cutoff × fock_cutoff.
Operator displacement(cplx alpha, int fock_cutoff, int pad = kDefaultDisplacementPad);

// max |(D†D − I)_{mn}| over the leading `columns` columns.
double unitarity_defect(const Operator& d, int columns);

} // namespace sqcavity
