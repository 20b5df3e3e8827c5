// l2.hpp — the standard form L²(A) in the Hilbert–Schmidt model

#pragma once

#include "vnalg/algebra.hpp"

#include <string>
#include <utility>
#include <vector>

namespace vnalg::l2 {

using vnalg::algebra::algebra;
using vnalg::algebra::element;
using vnalg::algebra::functional;

// Hilbert–Schmidt realization: one n_i × n_i block per summand.
struct l2_vector {
    algebra parent;
    std::vector<cmat> blocks;

    static l2_vector zero(const algebra& A);
    static l2_vector from_vec(const algebra& A, const cvec& v);
    static l2_vector random(const algebra& A, rng_t& rng);
    cvec vec() const;

    cplx inner(const l2_vector& o) const;   // Σ Tr(ξ_i* η_i)
    double norm() const;
    l2_vector left(const element& a) const;  // a ξ
    l2_vector right(const element& a) const; // ξ a
};

l2_vector sqrt_state(const functional& phi, double tol = tol::kernel);
double inner_direct(const functional& phi, const functional& psi, double tol = tol::kernel);

struct analytic_report {
    double value = 0;        // Re f(i/2)
    double imag = 0;         // Im f(i/2), reported for diagnostics
    std::vector<std::pair<cplx, cplx>> samples;  // (t, f(t))
};
// f(t) = Σ Tr(ρ^{1+it} σ^{-it}), evaluated at t = i/2 on supports.
analytic_report inner_analytic(const functional& phi, const functional& psi,
                               const std::vector<cplx>& t_samples = {}, double tol = tol::kernel);

l2_vector modular_conjugation(const l2_vector& xi);

// Operators on L² coordinates.
cmat left_operator(const element& a);
cmat right_operator(const element& a);

// J in the form v ↦ P v̄ (antilinear) or v ↦ P v (linear, used only as a negative control).
enum class conjugation { adjoint, transpose };
struct axiom_result {
    std::string name;
    bool pass = false;
    double residual = 0;
};
struct standard_form_report {
    std::vector<axiom_result> axioms;  // exactly five, in the order of the standard-form list
    bool all_pass() const;
};
standard_form_report check_standard_form(const algebra& A, conjugation J = conjugation::adjoint,
                                         std::uint64_t seed = 1, double tol = tol::kernel);

// Isometry L²(pAp) → L²(A) onto p L²(A) p, √φ ↦ √(φ∘E) with E(a) = pap.
struct corner_map {
    vnalg::algebra::corner_data corner;
    cmat matrix;  // dim A × dim pAp
};
corner_map l2_corner(const algebra& A, const element& p, double tol = tol::kernel);

} // namespace vnalg::l2
