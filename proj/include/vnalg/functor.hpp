// functor.hpp — the L² functor, its isometric variant, Φ, and fusion functoriality

#pragma once

#include "vnalg/index.hpp"

#include <optional>
#include <vector>

namespace vnalg::functor {

namespace bm = vnalg::bimodule;
using vnalg::algebra::algebra;
using vnalg::algebra::element;
using vnalg::algebra::functional;
using vnalg::algebra::homomorphism;

// Linear map L²(A) → L²(B) on L² coordinates.
struct l2_map {
    algebra source, target;
    cmat matrix;                     // dim B × dim A
    std::vector<double> scale;       // per block of A: mean singular value on that block
    std::vector<double> defect;      // per block of A: max |σ - scale| over singular values σ
    double extension_residual = 0;   // linear extension vs √(φ∘E) on random positives

    cvec operator()(const cvec& xi) const { return matrix * xi; }
};

// Density of φ∘E on B for a functional φ on A.
functional pullback(const functional& phi, const index::cond_exp& E);

// √φ ↦ √(φ∘E_{A,B}) extended linearly from rank-one projections; InconsistentExtension on failure.
l2_map l2_of_hom(const homomorphism& f, double tol = 1e-8);
// Isometric part of the polar decomposition of L²(f); NotInjective.
l2_map l2_iso(const homomorphism& f);
// Scaling report for an arbitrary matrix between L² spaces.
l2_map make_l2_map(const algebra& A, const algebra& B, const cmat& m);

// |L²(f)√φ - √(φ∘E)| for a given positive φ
double sqrt_state_residual(const l2_map& L, const homomorphism& f, const functional& phi);

// Every block of A lands in a single block of B (equivalently Z(B) ⊆ f(A) for injective f).
bool center_in_image(const homomorphism& f);
// Random injective f with center_in_image(f).
homomorphism random_central_inclusion(const algebra& A, int max_blocks, int max_size, rng_t& rng);

// Φ = (S*⊗1)(1⊗L²ι) : H̄ → _B L²B _A for the normalized duality of H = _A L²B _B.
struct phi_result {
    bm::ingested H;        // _A L²B _B
    bm::ingested K;        // _B L²B _A
    duality::duality_data D;
    bm::bimodule_map phi;  // H̄ → K.H (canonical coordinates)
    double unitary_residual = 0;
    double square_residual = 0;  // |ρ_H (1⊠Φ) R - L²(ι)|
};
phi_result phi_identification(const homomorphism& iota);
phi_result phi_identification(const homomorphism& iota, const duality::duality_data& D);

// h ⊠_α k : H₁ ⊠_{A₁} K₁ → H₂ ⊠_{A₂} K₂ with h(ξa) = h(ξ)α(a), k(aκ) = α(a)k(κ).
struct functor_map {
    bm::bimodule_map map;          // plain linear map between canonical fused objects
    element c;                     // fixed element of α(A₁)' ∩ A₂: [ξ⊗κ] ↦ [h(ξ)c ⊗ k(κ)]
    double balance_residual = 0;   // independence of the chosen generators
};
// c = zηz with η = L²(α)(1) and z = S̃*[1⊗1] for the Φ-twisted S̃ = (Φ⊗1)S.
element fusion_twist(const homomorphism& alpha);
functor_map fuse_functor(const bm::bimodule_map& h, const homomorphism& alpha, const bm::bimodule_map& k,
                         double tol = 1e-8);
// Random h : H₁ → H₂ with h(ξa) = h(ξ)α(a) (right) or h(aξ) = α(a)h(ξ) (left).
bm::bimodule_map random_along(const bm::bimodule& H1, const bm::bimodule& H2, const homomorphism& alpha,
                              bm::side s, rng_t& rng);
// residual of h(ξa) = h(ξ)α(a) (right) or k(aκ) = α(a)k(κ) (left) on generators of A₁
double along_residual(const bm::bimodule_map& m, const homomorphism& alpha, bm::side s);

// B ≅ hom(L²A_A, L²B_A), b ↦ (b⊗1)L²(ι), inverse T ↦ T(1_A)η⁻¹ with η = L²(ι)(1_A).
struct b_hom_iso {
    homomorphism iota;
    l2_map L;
    element eta_inv;
    int hom_dim = 0;  // dimension of right A-linear maps L²A → L²B

    cmat operator()(const element& b) const;
    element inverse(const cmat& T) const;
};
b_hom_iso b_to_hom(const homomorphism& iota);

// Smallest commutative tower ℂ ⊂ ℂ^a ⊂ target where l2_iso fails to compose; nullopt if none.
struct iso_counterexample {
    homomorphism f, g;
    double residual = 0;  // |l2_iso(g∘f) - l2_iso(g) l2_iso(f)|
};
std::optional<iso_counterexample> find_iso_counterexample(int max_size = 4, double tol = 1e-6);
double iso_composition_residual(const homomorphism& f, const homomorphism& g);

} // namespace vnalg::functor
