#include <doctest.h>

#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "oracles.hpp"
#include "sqcavity/errors.hpp"
#include "sqcavity/ops_algebra.hpp"

using namespace sqcavity;

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Matrix diag(std::initializer_list<double> values) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v(i++) = x;
    return v.asDiagonal();
}

} // namespace

TEST_CASE("annihilation matrix elements") {
    CHECK(max_abs(annihilation(2).matrix() - (Matrix(2, 2) << 0, 1, 0, 0).finished()) == 0.0);

    const Matrix a4 = annihilation(4).matrix();
    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 1) = 1.0;
    expected(1, 2) = std::sqrt(2.0);
    expected(2, 3) = std::sqrt(3.0);
    CHECK(max_abs(a4 - expected) == 0.0);

    const Operator a3 = annihilation(3);
    CHECK(max_abs((a3.adjoint() * a3).matrix() - diag({0, 1, 2})) < 1e-15);
    CHECK(max_abs(creation(5).matrix() - annihilation(5).matrix().adjoint()) == 0.0);

    CHECK_THROWS_AS(annihilation(1), DimensionError);
    CHECK_THROWS_AS(SpaceDims(0), DimensionError);
}

TEST_CASE("truncated canonical commutator") {
    for (int n : {2, 5, 17}) {
        const Operator a = annihilation(n);
        const Matrix comm = (a * a.adjoint() - a.adjoint() * a).matrix();
        Matrix expected = Matrix::Identity(n, n);
        expected(n - 1, n - 1) = 1.0 - n;
        CHECK(max_abs(comm - expected) < 1e-13);
    }
}

TEST_CASE("atom_sigma projector algebra") {
    CHECK(max_abs(atom_sigma("e", "g").matrix() - (Matrix(2, 2) << 0, 0, 1, 0).finished()) == 0.0);
    CHECK(max_abs((atom_sigma(Level::e, Level::g) * atom_sigma(Level::g, Level::e)).matrix() -
                  atom_sigma(Level::e, Level::e).matrix()) == 0.0);
    CHECK(max_abs((atom_sigma(Level::e, Level::e) + atom_sigma(Level::g, Level::g)).matrix() - Matrix::Identity(2, 2)) == 0.0);
    CHECK_THROWS_AS(atom_sigma("x", "g"), LabelError);
    CHECK_THROWS_AS(parse_level("excited"), LabelError);
}

TEST_CASE("lift ordering: atom slow, field fast") {
    const SpaceDims dims(3);
    CHECK(max_abs(lift(atom_sigma(Level::e, Level::e), Subsystem::atom, dims).matrix() - diag({0, 0, 0, 1, 1, 1})) == 0.0);
    CHECK(max_abs(lift(number(3), Subsystem::field, dims).matrix() - diag({0, 1, 2, 0, 1, 2})) == 0.0);
    CHECK(max_abs(lift(identity(Space::atom()), Subsystem::atom, dims).matrix() - Matrix::Identity(6, 6)) == 0.0);

    CHECK_THROWS_AS(lift(number(4), Subsystem::field, dims), DimensionError);
    CHECK_THROWS_AS(lift(number(3), Subsystem::atom, dims), DimensionError);
    CHECK_THROWS_AS(annihilation(3) * annihilation(4), DimensionError);
}

TEST_CASE("lift is a homomorphism and atom/field lifts commute") {
    std::mt19937 rng(7);
    const SpaceDims dims(4);
    for (int trial = 0; trial < 10; ++trial) {
        const Operator x(Space::atom(), oracle::random_hermitian(2, rng));
        const Operator y(Space::atom(), oracle::random_hermitian(2, rng));
        const Operator f(Space::field(4), oracle::random_hermitian(4, rng));
        const Operator h(Space::field(4), oracle::random_hermitian(4, rng));

        CHECK(max_abs(lift(x * y, Subsystem::atom, dims).matrix() -
                      (lift(x, Subsystem::atom, dims) * lift(y, Subsystem::atom, dims)).matrix()) < 1e-14);
        CHECK(max_abs(lift(f * h, Subsystem::field, dims).matrix() -
                      (lift(f, Subsystem::field, dims) * lift(h, Subsystem::field, dims)).matrix()) < 1e-13);
        const Operator xa = lift(x, Subsystem::atom, dims);
        const Operator fa = lift(f, Subsystem::field, dims);
        CHECK(max_abs((xa * fa - fa * xa).matrix()) < 1e-14);
        // Matches the explicit Kronecker product x ⊗ f.
        CHECK(max_abs((xa * fa).matrix() - oracle::kron(x.matrix(), f.matrix())) < 1e-14);
    }
}

TEST_CASE("parity") {
    CHECK(max_abs(parity(3).matrix() - diag({1, -1, 1})) == 0.0);
    const Operator p = parity(8);
    CHECK(max_abs((p * p).matrix() - Matrix::Identity(8, 8)) == 0.0);
    Matrix vac = Matrix::Zero(8, 8);
    vac(0, 0) = 1.0;
    CHECK((p.matrix() * vac).trace().real() == doctest::Approx(1.0));
}

TEST_CASE("displacement") {
    CHECK(max_abs(displacement(0.0, 10).matrix() - Matrix::Identity(10, 10)) < 1e-13);

    // Coherent-state overlap ⟨0|D(α)|0⟩ = e^{−|α|²/2}.
    const Operator d = displacement(1.0, 40, 20);
    CHECK(std::abs(d.matrix()(0, 0) - std::exp(-0.5)) < 1e-8);
    const cplx alpha(0.7, -1.1);
    const Operator dc = displacement(alpha, 40, 20);
    CHECK(std::abs(dc.matrix()(0, 0) - std::exp(-0.5 * std::norm(alpha))) < 1e-8);
    // ⟨n|D(α)|0⟩ = e^{−|α|²/2} αⁿ/√n!
    for (int n = 1; n < 6; ++n) {
        const cplx expected = std::exp(-0.5 * std::norm(alpha)) * std::pow(alpha, n) / std::sqrt(std::tgamma(n + 1.0));
        CHECK(std::abs(dc.matrix()(n, 0) - expected) < 1e-8);
    }

    // Columns well below the cutoff keep their displaced weight inside the truncated space.
    const int guarded = 16;
    const Matrix prod = (displacement(alpha, 40, 20) * displacement(-alpha, 40, 20)).matrix();
    CHECK(max_abs(prod.topLeftCorner(guarded, guarded) - Matrix::Identity(guarded, guarded)) < 1e-8);
    CHECK(unitarity_defect(dc, guarded) < 1e-8);
    // Padding only matters near the cutoff: low columns agree, the last ones do not.
    const Matrix unpadded = displacement(alpha, 40, 0).matrix();
    CHECK(max_abs(unpadded.topLeftCorner(guarded, guarded) - dc.matrix().topLeftCorner(guarded, guarded)) < 1e-8);
    CHECK(max_abs(unpadded.rightCols(1) - dc.matrix().rightCols(1)) > 1e-3);

    CHECK_THROWS_AS(displacement(cplx(std::nan(""), 0.0), 10), DimensionError);
}

TEST_CASE("Displacer agrees with a direct matrix exponential of the padded generator") {
    const int n = 12, pad = 6;
    const Displacer displacer(n, pad);
    const Matrix a = oracle::ladder(n + pad);
    for (cplx alpha : {cplx(0.3, 0.0), cplx(-1.2, 0.8), cplx(0.0, 2.5)}) {
        const Matrix generator = alpha * a.adjoint() - std::conj(alpha) * a;
        const Matrix expected = generator.exp();
        CHECK(max_abs(displacer.padded(alpha) - expected) < 1e-12);
        CHECK(max_abs(displacer.leading_rows(alpha, n) - expected.topRows(n)) < 1e-12);
    }
}

TEST_CASE("bogoliubov_b") {
    CHECK(max_abs(bogoliubov_b(0.0, 7).matrix() - annihilation(7).matrix()) == 0.0);

    const int n = 30, guard = 2;
    const Operator b = bogoliubov_b(0.8, n);
    const Matrix comm = (b * b.adjoint() - b.adjoint() * b).matrix();
    const int interior = n - guard;
    CHECK(max_abs(comm.topLeftCorner(interior, interior) - Matrix::Identity(interior, interior)) < 1e-10);

    // The squeezed vacuum is the b-vacuum.
    const Eigen::VectorXcd psi = oracle::squeezed_vacuum_amplitudes(0.5, 40);
    const Eigen::VectorXcd b_psi = bogoliubov_b(0.5, 40).matrix() * psi;
    CHECK(b_psi.norm() < 1e-6);
}
