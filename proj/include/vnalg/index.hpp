// index.hpp — conditional expectations, Pimsner–Popa and minimal indices, inequalities

#pragma once

#include "vnalg/duality.hpp"

#include <map>
#include <string>
#include <vector>

namespace vnalg::index {

namespace bm = vnalg::bimodule;
using vnalg::algebra::algebra;
using vnalg::algebra::element;
using vnalg::algebra::homomorphism;

// _A L²B _B in canonical form; U maps canonical coordinates to L²B coordinates.
bm::ingested l2_bimodule_of(const homomorphism& iota);

// ⟦B:A⟧ from the canonical duality of _A L²B _B (r × s).
cmat dim_matrix(const homomorphism& iota);
// entrywise squares of dim_matrix
cmat minimal_index(const homomorphism& iota);

struct cond_exp {
    homomorphism inclusion;  // A → B
    cmat map;                // L² coordinates, dim A × dim B
    std::string kind;        // "unscaled", "minimal", "unitized", "parametric", "custom"
    cmat density;            // parametric family: density on the relative commutant

    element operator()(const element& b) const;
};

// E_{A,B}(b) = R*(b⊗1)R applied to 1_A
cond_exp unscaled_expectation(const homomorphism& iota);
// factors: E_{A,B}/dim; otherwise E_{A,B}(1)⁻¹ E_{A,B}
cond_exp minimal_expectation(const homomorphism& iota);
// factor inclusions M_k ⊂ M_{kΛ}: E_ρ(y) = (id ⊗ ω_ρ)(U* y U) with ρ a density on M_Λ
cond_exp parametric_expectation(const homomorphism& iota, const cmat& rho);
// minimal expectation read off the parametric family (ρ = 1/Λ)
cmat minimal_density(const homomorphism& iota);

struct expectation_check {
    double unit = 0;         // |E(1) - 1|
    double bimodularity = 0; // |E(a x a') - a E(x) a'| on generators
    double positivity = 0;   // most negative Choi eigenvalue (clamped at 0)
    bool valid(double tol = 1e-8) const { return unit <= tol && bimodularity <= tol && positivity <= tol; }
};
expectation_check check_expectation(const cond_exp& E);

struct pp_result {
    double value = 0;           // Ind(E); infinity if E is not faithful
    bool faithful = true;
    int block = 0;              // block of B holding the maximizer
    cvec maximizer;
    element watatani;           // Σ u_k u_k* from a quasi-basis
    double watatani_norm = 0;
    bool consistent = true;     // value ≤ ‖Σ u_k u_k*‖ within tolerance
    double quasi_basis_residual = 0;  // |Σ u_k E(u_k* x) - x| on matrix units
};
pp_result pp_index(const cond_exp& E, std::uint64_t seed = 1, int starts = 64, bool quasi_basis = true);

struct longo_result {
    double value = 0;
    cmat density;           // minimizing ρ on the relative commutant
    double distance_to_minimal = 0;  // |ρ - 1/Λ|
    double minimal_value = 0;        // Ind(E₀)
    int evaluations = 0;
};
longo_result longo_index(const homomorphism& iota, std::uint64_t seed = 1);

// ------------------------------------------------------------- inequalities

// Σ_i [p_i B p_i : p_i A] over minimal central projections of A (B a factor) and ‖⟦B:A⟧‖².
struct corner_identity {
    double corner_sum = 0;
    double norm_squared = 0;
};
corner_identity corner_index_sum(const homomorphism& iota);

// Extremality on a partition of unity of projections of the relative commutant.
struct extremality_report {
    std::vector<double> expectation;  // E₀(p_i)
    std::vector<double> dims;         // d_i
    double residual = 0;
    double trace_residual = 0;  // E₀ restricted to the relative commutant is a trace
};
extremality_report extremality(const homomorphism& iota, rng_t& rng);

// Concrete configuration on ℂ^D: factors N ⊂ M and an auxiliary algebra A.
struct inequality_config {
    std::string name;
    bm::concrete_algebra N, M, A;
};
struct inequality_entry {
    std::string name;
    double lhs = 0, rhs = 0;
    bool hypothesis = true;     // hypotheses of the statement are met
    bool informational = false; // statement is not expected to hold in finite dimensions
    bool holds = true;
    std::map<std::string, double> norms;  // experiment mode: the matrix under several norms
};
std::vector<inequality_entry> check_inequalities(const inequality_config& c, std::uint64_t seed = 7);
// Both corollary hypotheses satisfied: M ⊂ A for the first, A ⊂ M' for the second.
inequality_config random_config(rng_t& rng, bool commuting);
std::map<std::string, double> matrix_norms(const cmat& m);

// ⟦B:A⟧ and ⟦A':B'⟧ for concrete A ⊂ B (transpose law)
struct transpose_report {
    cmat forward, commutant;
    bool holds = false;
};
transpose_report transpose_law(const bm::concrete_algebra& A, const bm::concrete_algebra& B, std::uint64_t seed = 7);

} // namespace vnalg::index
