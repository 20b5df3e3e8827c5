// algebra.hpp — multi-matrix algebras, elements, functionals, homomorphisms

#pragma once

#include "vnalg/numerics.hpp"

#include <functional>
#include <string>
#include <vector>

namespace vnalg::algebra {

// A = M_{n_1} ⊕ ... ⊕ M_{n_r}.
class algebra {
public:
    algebra() = default;
    explicit algebra(std::vector<int> blocks);

    int num_blocks() const { return static_cast<int>(blocks_.size()); }
    int block(int i) const { return blocks_.at(i); }
    const std::vector<int>& blocks() const { return blocks_; }
    int dim() const;           // Σ n_i², also the dimension of L²(A)
    int total() const;         // Σ n_i, size of the block-diagonal realization
    int offset(int i) const;   // start of block i in L² coordinates
    int diag_offset(int i) const;  // start of block i in the block-diagonal realization
    bool is_factor() const { return blocks_.size() == 1; }
    bool is_trivial() const { return blocks_.size() == 1 && blocks_[0] == 1; }
    std::string str() const;

    friend bool operator==(const algebra& a, const algebra& b) { return a.blocks_ == b.blocks_; }
    friend bool operator!=(const algebra& a, const algebra& b) { return !(a == b); }

private:
    std::vector<int> blocks_;
};

algebra trivial();
algebra tensor(const algebra& a, const algebra& b);  // blocks n_i m_j, (i,j) row-major
algebra sum(const algebra& a, const algebra& b);
algebra random_algebra(int max_blocks, int max_size, rng_t& rng);

struct element {
    algebra parent;
    std::vector<cmat> blocks;

    static element zero(const algebra& A);
    static element unit(const algebra& A);
    static element matrix_unit(const algebra& A, int i, int a, int b);
    static element random(const algebra& A, rng_t& rng);
    static element random_hermitian(const algebra& A, rng_t& rng);
    static element from_vec(const algebra& A, const cvec& v);
    static element from_dense(const algebra& A, const cmat& m);

    cvec vec() const;            // L² coordinates (blocks row-major, concatenated)
    cmat dense() const;          // block-diagonal matrix
    element adjoint() const;
    bool is_projection(double tol = tol::kernel) const;
    bool is_positive(double tol = tol::kernel) const;
    double norm() const;         // Frobenius

    element operator*(const element& o) const;
    element operator+(const element& o) const;
    element operator-(const element& o) const;
    element operator*(cplx s) const;
};

std::vector<element> minimal_central_projections(const algebra& A);
// Matrix units e^i_{ab} in canonical order (i, a, b).
std::vector<element> matrix_units(const algebra& A);
// A small generating set: e^i_{00}, e^i_{a,a+1}, e^i_{a+1,a}.
std::vector<element> generators(const algebra& A);

struct functional {
    algebra parent;
    std::vector<cmat> densities;  // with respect to the unnormalised block traces

    cplx operator()(const element& a) const;
    bool is_positive(double tol = tol::kernel) const;
    double l1_norm() const;
    element support(double tol = tol::kernel) const;

    static functional from_density(const element& rho);
    static functional random_positive(const algebra& A, rng_t& rng, bool allow_rank_deficient = true);
};

// a ↦ ⊕_j U_j (⊕_i a_i ⊗ 1_{Λ_ij}) U_j*.
struct homomorphism {
    algebra source, target;
    imat mult;                  // Λ, r × s
    std::vector<cmat> unitaries;

    element operator()(const element& a) const;
    cmat matrix() const;        // linear map on L² coordinates, dim B × dim A
    bool injective() const;
};

homomorphism canonical_embedding(const algebra& A, const algebra& B, const imat& lambda);
homomorphism identity_hom(const algebra& A);
homomorphism compose_hom(const homomorphism& f, const homomorphism& g);  // g ∘ f
homomorphism random_conjugate(const homomorphism& f, rng_t& rng);        // random block unitaries
// Random injective unital A → B with ≤ max_blocks target blocks of size ≤ max_size (conjugated).
homomorphism random_inclusion(const algebra& A, int max_blocks, int max_size, rng_t& rng, int max_mult = 2);
double homomorphism_residual(const homomorphism& f);  // multiplicativity, *, unit on matrix units

// Decomposition of a unital representation given by images of matrix units.
// W has columns π(e^i_{a0}) w^i_α, ordered (i, a, α), so π(x) = W (⊕ x_i ⊗ 1_{μ_i}) W*.
struct rep_decomposition {
    std::vector<int> mult;
    cmat W;
};
rep_decomposition decompose_rep(const algebra& A, const std::function<cmat(int, int, int)>& image,
                                double tol = tol::kernel);

// Canonical form of a concrete unital *-homomorphism given as a function.
homomorphism ingest_hom(const algebra& A, const algebra& B,
                        const std::function<element(const element&)>& f, double tol = tol::kernel);

struct corner_data {
    algebra alg;                 // pAp with zero-rank blocks dropped
    std::vector<int> block_of;   // corner block -> parent block
    std::vector<cmat> isometries;  // per parent block, n_i × rank(p_i)

    element compress(const element& a) const;  // V* a V
    element embed(const element& c) const;     // V c V*
};
corner_data corner(const algebra& A, const element& p, double tol = tol::kernel);

} // namespace vnalg::algebra
