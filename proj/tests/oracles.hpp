// oracles.hpp: closed forms and brute-force routes used as independent references.
// Nothing here calls into the library's superoperator assembly.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

// Empty-cavity steady state: P(2n) = tanh^{2n} r / cosh r · (2n)! / ((n!)² 4^n), P(odd) = 0.
inline double squeezed_vacuum_probability(double r, int n) {
    if (n % 2 == 1) return 0.0;
    const int k = n / 2;
    const double log_p = 2.0 * k * std::log(std::tanh(r)) - std::log(std::cosh(r)) + std::lgamma(2.0 * k + 1) -
                         2.0 * std::lgamma(k + 1.0) - 2.0 * k * std::log(2.0);
    if (k == 0) return 1.0 / std::cosh(r);
    return std::exp(log_p);
}

// Amplitudes of the state annihilated by cosh r·a − sinh r·a†, by recursion on
// c_{2n+2} = tanh r·√((2n+1)/(2n+2))·c_{2n}, then normalized on `cutoff` levels.
inline Eigen::VectorXcd squeezed_vacuum_amplitudes(double r, int cutoff) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(cutoff);
    double c = 1.0;
    for (int n = 0; n < cutoff; n += 2) {
        psi(n) = c;
        c *= std::tanh(r) * std::sqrt((n + 1.0) / (n + 2.0));
    }
    return psi / psi.norm();
}

// Σ_{n ≥ cutoff − guard} P(n) of the untruncated squeezed vacuum.
inline double squeezed_vacuum_tail(double r, int cutoff, int guard) {
    double total = 0.0;
    for (int n = cutoff - guard; n < cutoff + 4000; ++n) total += squeezed_vacuum_probability(r, n);
    return total;
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Mat ladder(int n) {
    Mat a = Mat::Zero(n, n);
    for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(double(k));
    return a;
}

struct Model {
    double delta_A = 0, delta_C = 0, g0 = 0, gamma = 0, kappa = 1, r = 0, phi = 0;
};

// dρ/dt of the master equation evaluated with plain matrix products, composite space
// (atom slow, field fast, atom basis (g, e)).
inline Mat master_rhs(const Model& m, int cutoff, const Mat& rho) {
    const Mat id_f = Mat::Identity(cutoff, cutoff);
    const Mat id_a = Mat::Identity(2, 2);
    Mat s_eg = Mat::Zero(2, 2);
    s_eg(1, 0) = 1.0;
    Mat s_ee = Mat::Zero(2, 2);
    s_ee(1, 1) = 1.0;
    const Mat a = kron(id_a, ladder(cutoff));
    const Mat ad = a.adjoint();
    const Mat eg = kron(s_eg, id_f);
    const Mat ge = eg.adjoint();
    const Mat ee = kron(s_ee, id_f);

    const Mat h = m.delta_A * ee + m.delta_C * (ad * a) + m.g0 * (eg * a + ge * ad);
    const double n_th = std::sinh(m.r) * std::sinh(m.r);
    const cplx mc = std::cosh(m.r) * std::sinh(m.r) * std::polar(1.0, m.phi);
    const cplx i(0, 1);

    Mat out = -i * (h * rho - rho * h);
    out += m.gamma * (2.0 * eg.adjoint() * rho * eg - eg * eg.adjoint() * rho - rho * eg * eg.adjoint());
    out += -m.kappa * (1 + n_th) * (ad * a * rho - 2.0 * a * rho * ad + rho * ad * a);
    out += -m.kappa * n_th * (a * ad * rho - 2.0 * ad * rho * a + rho * a * ad);
    out += m.kappa * mc * (ad * ad * rho - 2.0 * ad * rho * ad + rho * ad * ad);
    out += m.kappa * std::conj(mc) * (a * a * rho - 2.0 * a * rho * a + rho * a * a);
    (void)ge;
    return out;
}

inline Mat random_hermitian(int d, std::mt19937& rng) {
    std::normal_distribution<double> g;
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = cplx(g(rng), g(rng));
    return 0.5 * (m + m.adjoint());
}

inline Mat random_density(int d, std::mt19937& rng) {
    std::normal_distribution<double> g;
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = cplx(g(rng), g(rng));
    Mat rho = m * m.adjoint();
    return rho / rho.trace();
}

inline double vacuum_wigner(double q, double p) { return std::exp(-(q * q + p * p)) / std::numbers::pi; }

} // namespace oracle
