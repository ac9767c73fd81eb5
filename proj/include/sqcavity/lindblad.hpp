// lindblad.hpp: Hamiltonian, dissipators and Liouvillian superoperators of the
// squeezed-vacuum-driven atom–cavity master equation.
//
// Units: ħ = 1, every rate and detuning in units of the cavity damping κ.
// Vectorization stacks columns, so the sandwich AρB acts as (Bᵀ ⊗ A)·vec(ρ).

#pragma once

#include <complex>

#include <Eigen/SparseCore>

#include "sqcavity/ops_algebra.hpp"

namespace sqcavity {

using SparseMatrix = Eigen::SparseMatrix<cplx>;

struct SystemParams {
    double delta_A = 0.0;  // ω_A − ω_sq
    double delta_C = 0.0;  // ω_cav − ω_sq
    double g0 = 0.0;
    double gamma = 0.0;
    double kappa = 1.0;
    bool atom_present = true;

    void validate() const;
};

// Broadband squeezed vacuum with strength r and phase φ.
struct SqueezedBath {
    double r = 0.0;
    double phi = 0.0;

    void validate() const;
    double n_th() const;    // sinh²r
    cplx m_corr() const;    // cosh r sinh r e^{iφ}
};

struct Superoperator {
    Space space;          // space of the density matrices it acts on
    SparseMatrix matrix;  // d² × d²
    double rate_scale = 0.0;  // largest rate in the generator; 0 when unknown

    int dim() const noexcept { return space.dim(); }

    // L·vec(ρ) reshaped back to a d × d matrix.
    Matrix apply(const Matrix& rho) const;

    friend Superoperator operator+(const Superoperator& a, const Superoperator& b);
};

// Composite space when the atom is present, field-only otherwise.
Space model_space(const SystemParams& params, int fock_cutoff);

// Superoperator building blocks.
SparseMatrix left_multiply(const Matrix& a);                   // ρ ↦ Aρ
SparseMatrix right_multiply(const Matrix& b);                  // ρ ↦ ρB
SparseMatrix sandwich(const Matrix& a, const Matrix& b);       // ρ ↦ AρB

Superoperator zero_superoperator(const Space& space);
Superoperator commutator_superoperator(const Operator& h);    // ρ ↦ −i[H, ρ]

// Δ_A σ_ee + Δ_C a†a + g₀(σ_eg a + σ_ge a†). With atom_present = false only Δ_C a†a is kept,
// on whichever space the caller passes.
Operator build_hamiltonian(const SystemParams& params, const Space& space);

// γ(2σ_ge ρ σ_eg − σ_ee ρ − ρ σ_ee)
Superoperator atom_dissipator(double gamma, const SpaceDims& dims);

// −κ(1+N)(a†aρ − 2aρa† + ρa†a) − κN(aa†ρ − 2a†ρa + ρaa†)
//   + κM(a†a†ρ − 2a†ρa† + ρa†a†) + κM*(aaρ − 2aρa + ρaa)
Superoperator cavity_squeezed_dissipator(double kappa, const SqueezedBath& bath, const Space& space);

Superoperator build_liouvillian(const SystemParams& params, const SqueezedBath& bath, const Space& space);

// Generator written on the Fock basis of the Bogoliubov mode b = cosh r·a − sinh r·a†:
// vacuum decay of b plus H_I = g₀σ_eg(cosh r·b + sinh r·b†) + h.c., with the atomic decay
// kept unchanged. Requires zero detunings and φ = 0.
Superoperator build_bogoliubov_liouvillian(const SystemParams& params, const SqueezedBath& bath,
                                           const Space& space);
Superoperator build_bogoliubov_liouvillian(const SystemParams& params, double r, const Space& space);

// The lab-frame field operator a = cosh r·b + sinh r·b† on the b-mode Fock basis, lifted to `space`.
Operator lab_annihilation_in_bogoliubov_frame(double r, const Space& space);

// max |vec(I)ᵀ·L|; zero for a trace-preserving generator.
double trace_row_defect(const Superoperator& l);

// Field operator lifted to `space` (identity on the atom for composite spaces).
Operator field_operator(const Operator& field_op, const Space& space);

} // namespace sqcavity
