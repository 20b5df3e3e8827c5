// bimodule.hpp — canonical bimodules, bimodule maps, Connes fusion, commutants

#pragma once

#include "vnalg/algebra.hpp"

#include <functional>
#include <string>
#include <vector>

namespace vnalg::bimodule {

using vnalg::algebra::algebra;
using vnalg::algebra::element;

// H = ⊕_{ij} ℂ^{m_ij} ⊗ Mat(n_i, k_j); left action a_i X, right action X b_j, HS inner product.
// Realized coordinates: (i,j) row-major, then α, then the entries of X row-major.
struct bimodule {
    algebra left, right;
    imat mult;

    bimodule() = default;
    bimodule(algebra l, algebra r, imat m);

    int dim() const;
    int offset(int i, int j) const;
    int block_dim(int i, int j) const { return left.block(i) * right.block(j); }
    int index(int i, int j, int alpha, int a, int c) const {
        return offset(i, j) + alpha * block_dim(i, j) + a * right.block(j) + c;
    }
    std::string str() const;

    friend bool operator==(const bimodule& x, const bimodule& y) {
        return x.left == y.left && x.right == y.right && x.mult == y.mult;
    }
    friend bool operator!=(const bimodule& x, const bimodule& y) { return !(x == y); }
};

bimodule l2_bimodule(const algebra& A);
bimodule conjugate(const bimodule& H);
bimodule direct_sum(const bimodule& H, const bimodule& K);
bimodule external_tensor(const bimodule& H, const bimodule& K);
bimodule fuse_object(const bimodule& H, const bimodule& K);
bimodule random_bimodule(const algebra& A, const algebra& B, int max_mult, rng_t& rng, bool nonzero = true);

// realized actions
cmat left_action(const bimodule& H, const element& a);
cmat right_action(const bimodule& H, const element& b);

// antiunitary H → H̄: v ↦ P v̄
cmat conjugation_permutation(const bimodule& H);
cvec bar_vector(const bimodule& H, const cvec& v);
cmat bar_operator(const bimodule& H, const cmat& x);  // x̄ on H̄ with x̄ ξ̄ = conj(x ξ)

// Slot (j, α, β) of block (i,l) of H ⊠ K.
int fused_slot(const bimodule& H, const bimodule& K, int i, int l, int j, int alpha, int beta);

enum class linearity { bilinear, left, right, plain };
std::string to_string(linearity l);
bool is_left_linear(linearity l);
bool is_right_linear(linearity l);

struct bimodule_map {
    bimodule source, target;
    linearity lin = linearity::bilinear;
    std::vector<cmat> blocks;  // bilinear: per (i,j) row-major, m'_ij × m_ij
    cmat full;                 // otherwise: realized matrix, target.dim × source.dim

    bool bilinear() const { return lin == linearity::bilinear; }
    cmat matrix() const;
    bimodule_map adjoint() const;
    bimodule_map operator*(const bimodule_map& o) const;  // composition this ∘ o
    bimodule_map operator+(const bimodule_map& o) const;
    bimodule_map operator*(cplx s) const;
    cvec apply(const cvec& v) const;
};

bimodule_map identity_map(const bimodule& H);
bimodule_map zero_map(const bimodule& H, const bimodule& K);
bimodule_map from_blocks(const bimodule& H, const bimodule& K, std::vector<cmat> blocks);
// Full matrix with declared linearity, validated against the actions (LinearityViolation).
bimodule_map from_full(const bimodule& H, const bimodule& K, const cmat& m, linearity lin,
                       double tol = 1e-8);
// Bilinear map recovered from a realized matrix (throws LinearityViolation if not bilinear).
bimodule_map to_bilinear(const bimodule_map& f, double tol = 1e-8);
bimodule_map random_bilinear(const bimodule& H, const bimodule& K, rng_t& rng);
bimodule_map random_invertible_endo(const bimodule& H, rng_t& rng);
// residual of commuting with the left / right actions on generators
double left_linearity_residual(const bimodule_map& f);
double right_linearity_residual(const bimodule_map& f);

// Orthonormal basis of bilinear maps (HS inner product on multiplicity blocks).
std::vector<bimodule_map> hom_space(const bimodule& H, const bimodule& K);

// ----------------------------------------------------------------- fusion

// ξ ⊗ κ ↦ ξκ ∈ H ⊠ K (canonical coordinates).
cvec product(const bimodule& H, const bimodule& K, const cvec& xi, const cvec& kappa);

struct fusion_result {
    bimodule object;
    cmat from_gram;          // unitary: Gram-completion model → canonical object
    int gram_dim = 0;        // rank of the Gram matrix after the null-space quotient
    int generators = 0;      // generators kept (structurally null pairs dropped)
    double unitarity_residual = 0;
    double gram_residual = 0;  // |T*T - G| for the product map T on generators
};
// Gram model hom(L²B, K) ⊗ H with ⟨φ₁⊗ξ₁, φ₂⊗ξ₂⟩ = ⟨(φ₂*φ₁)ξ₁, ξ₂⟩, φ ↔ φ(1) ∈ K.
fusion_result fuse(const bimodule& H, const bimodule& K, double tol = tol::kernel);
// A-valued pairing used by the Gram model: b = κ₁ κ₂* ∈ B.
element right_pairing(const bimodule& K, const cvec& k1, const cvec& k2);

bimodule_map fuse_maps(const bimodule_map& f, const bimodule_map& g);
// General fused map: f right-linear, g left-linear (or the middle algebra trivial).
bimodule_map fused_map(const bimodule_map& f, const bimodule_map& g, double tol = 1e-8);
// Apply f ⊠ g to a vector of H ⊠ K without forming the matrix.
cvec apply_fused(const bimodule_map& f, const bimodule_map& g, const cvec& v);

bimodule_map left_unitor(const bimodule& H);   // L²A ⊠ H → H
bimodule_map right_unitor(const bimodule& H);  // H ⊠ L²B → H
bimodule_map associator(const bimodule& H, const bimodule& K, const bimodule& L);  // (HK)L → H(KL)

// -------------------------------------------------------------- ingestion

// Canonical form of a concrete bimodule: U has canonical basis vectors as columns.
struct ingested {
    bimodule H;
    cmat U;  // concrete dim × H.dim(), unitary
};
// lambda(i,a,b) = image of e^i_{ab}, rho(j,c,d) = operator ξ ↦ ξ f^j_{cd}.
ingested ingest(const algebra& A, const algebra& B,
                const std::function<cmat(int, int, int)>& lambda,
                const std::function<cmat(int, int, int)>& rho, double tol = tol::kernel);

// ------------------------------------------------------ concrete algebras

// A unital *-subalgebra of B(ℂ^D): x ↦ W (⊕ x_i ⊗ 1_{μ_i}) W*.
struct concrete_algebra {
    algebra abs;
    std::vector<int> mult;
    cmat W;

    int space_dim() const { return static_cast<int>(W.rows()); }
    cmat rep(const element& x) const;
    element pullback(const cmat& X) const;  // inverse of rep on the image
    std::vector<cmat> generator_images() const;
};

concrete_algebra concrete_from_rep(const algebra& A, const std::function<cmat(int, int, int)>& image,
                                   double tol = tol::kernel);
concrete_algebra commutant(const concrete_algebra& X);
// X ∩ S' for a set of operators S.
concrete_algebra relative_commutant(const concrete_algebra& X, const std::vector<cmat>& S,
                                    std::uint64_t seed = 7, double tol = 1e-9);
concrete_algebra intersection(const concrete_algebra& X, const concrete_algebra& Y, std::uint64_t seed = 7);
concrete_algebra join(const concrete_algebra& X, const concrete_algebra& Y, std::uint64_t seed = 7);
// The inclusion X ⊂ Y as a canonical homomorphism abs(X) → abs(Y).
vnalg::algebra::homomorphism inclusion(const concrete_algebra& X, const concrete_algebra& Y);
// Structure of a *-subalgebra of abs(X) spanned by the given elements.
concrete_algebra subalgebra(const concrete_algebra& X, const std::vector<element>& span,
                            std::uint64_t seed = 7, double tol = 1e-9);

struct commutant_result {
    concrete_algebra commutant;  // acting on the realized space of H
    double double_commutant_residual = 0;
};
enum class side { left, right };
commutant_result commutant_on(const bimodule& H, side s);
// left/right action of H as a concrete algebra
concrete_algebra action_algebra(const bimodule& H, side s);

} // namespace vnalg::bimodule
