// duality.hpp — duality data (R, S), normalization, dimension, bar involution

#pragma once

#include "vnalg/bimodule.hpp"

namespace vnalg::duality {

namespace bm = vnalg::bimodule;
using bm::bimodule;
using bm::bimodule_map;

// R : L²A → H ⊠ H̄,  S : L²B → H̄ ⊠ H (bilinear)
struct duality_data {
    bimodule H, Hbar;
    bimodule_map R, S;
    bool normalized = false;
};

duality_data canonical_duality(const bimodule& H);
// Duality for H̄ with conjugate H: (R, S) swapped.
duality_data dual_of(const duality_data& D);

// (R*⊗1)(1⊗S) on H and (S*⊗1)(1⊗R) on H̄, unitors and associators included.
bimodule_map zigzag_h(const duality_data& D);
bimodule_map zigzag_hbar(const duality_data& D);
double zigzag_residual(const duality_data& D);
// max over (i,j) and a basis of End(H)_{ij} of |φ_R - ψ_S|
double normalization_residual(const duality_data& D);

// φ(x) = R*(x⊗1)R ∈ Z(A), ψ(x) = S*(1⊗x)S ∈ Z(B): one value per minimal central projection.
cvec left_state(const duality_data& D, const bimodule_map& x);
cvec right_state(const duality_data& D, const bimodule_map& x);

// Canonical state: per central pair (i,j), φ(p_i x q_j).
cmat canonical_state(const duality_data& D, const bimodule_map& x);

// Unique positive x with x a x = x⁻¹ b x⁻¹.
cmat solve_normalization_element(const cmat& a, const cmat& b);

struct normalize_result {
    duality_data D;
    bimodule_map x;  // positive element with R = (x⊗1)R̃, S = (1⊗x⁻¹)S̃
    double zigzag_residual = 0;
    double normalization_residual = 0;
};
normalize_result normalize(const bimodule& H, const bimodule& Hbar, const bimodule_map& R,
                           const bimodule_map& S, double tol = tol::normalization);

// Skew a duality by an invertible endomorphism g: R ↦ (g⊗1)R, S ↦ (1⊗g^{-*})S.
duality_data skew(const duality_data& D, const bimodule_map& g);

cmat statistical_dimension(const duality_data& D, double tol = tol::normalization);

// x̄ ∈ End(H̄) by the two bend formulas
bimodule_map bar_left(const duality_data& D, const bimodule_map& x);
bimodule_map bar_right(const duality_data& D, const bimodule_map& x);
bimodule_map bar_involution(const duality_data& D, const bimodule_map& x, double tol = tol::kernel);

// v = (S*⊗1)(1⊗R′) : H̄ → H̄′
bimodule_map compare_duals(const duality_data& D1, const duality_data& D2);

struct jones_report {
    bimodule_map e1, e2;  // on H ⊠ (H̄ ⊠ H)
    double dim_R = 0, dim_S = 0, product = 0;
    double e1_residual = 0, e2_residual = 0;  // idempotent + self-adjoint
    double relation_residual = 0;             // |e1 e2 e1 - e1/(dR dS)|
    double order_gap = 0;                     // min eigenvalue of e1 - e1e2e1
    bool holds = false;
};
jones_report jones_projections(const duality_data& D);

// helpers shared with diagram evaluation
bimodule_map inverse_unitor_left(const bimodule& H);
bimodule_map inverse_unitor_right(const bimodule& H);
double identity_residual(const bimodule_map& f);

} // namespace vnalg::duality
