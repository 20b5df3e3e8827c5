// test_index.cpp — dimension matrices, conditional expectations, indices, inequalities

#include "doctest.h"
#include "vnalg/index.hpp"

using vnalg::cmat;
using vnalg::cplx;
using vnalg::cvec;
using vnalg::error;
using vnalg::imat;
using vnalg::rng_t;
namespace numerics = vnalg::numerics;
using namespace vnalg::index;
using vnalg::algebra::canonical_embedding;
using vnalg::algebra::trivial;

namespace {
homomorphism factor_inclusion(int k, int m) {
    return canonical_embedding(algebra({k}), algebra({k * m}), imat::Constant(1, 1, m));
}
} // namespace

TEST_CASE("⟦M3:ℂ⟧ = 3 and the minimal index is 9") {
    const homomorphism f = canonical_embedding(trivial(), algebra({3}), imat::Constant(1, 1, 3));
    CHECK(dim_matrix(f)(0, 0).real() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(minimal_index(f)(0, 0).real() == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("⟦B:A⟧ is the inclusion matrix, also after conjugation") {
    imat lambda(2, 2);
    lambda << 2, 1, 1, 1;
    rng_t rng(3);
    const homomorphism f =
        vnalg::algebra::random_conjugate(canonical_embedding(algebra({1, 2}), algebra({4, 3}), lambda), rng);
    CHECK((dim_matrix(f) - lambda.cast<cplx>()).norm() < 1e-9);
}

TEST_CASE("the minimal expectation of ℂ ⊂ M_n is the normalized trace") {
    for (int n = 2; n <= 4; ++n) {
        const homomorphism f = canonical_embedding(trivial(), algebra({n}), imat::Constant(1, 1, n));
        const cond_exp E = minimal_expectation(f);
        CHECK(E(element::matrix_unit(f.target, 0, 0, 0)).blocks[0](0, 0).real() == doctest::Approx(1.0 / n));
        CHECK(std::abs(E(element::matrix_unit(f.target, 0, 0, 1)).blocks[0](0, 0)) < 1e-14);
        CHECK(check_expectation(E).valid());
    }
}

TEST_CASE("Pimsner–Popa index of the trace on ℂ ⊂ M_n is n; the quasi-basis gives n²") {
    for (int n = 2; n <= 4; ++n) {
        const homomorphism f = canonical_embedding(trivial(), algebra({n}), imat::Constant(1, 1, n));
        const pp_result r = pp_index(minimal_expectation(f));
        CHECK(r.value == doctest::Approx(double(n)).epsilon(1e-6));
        CHECK(r.watatani_norm == doctest::Approx(double(n * n)).epsilon(1e-9));
        CHECK(r.consistent);
        CHECK(r.quasi_basis_residual < 1e-9);
    }
}

TEST_CASE("Pimsner–Popa index of E₀ on M_k ⊂ M_{km} is m·min(k, m)") {
    CHECK(pp_index(minimal_expectation(factor_inclusion(2, 2))).value == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(pp_index(minimal_expectation(factor_inclusion(3, 2))).value == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(pp_index(minimal_expectation(factor_inclusion(1, 3))).value == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("a non-faithful expectation has infinite index") {
    const homomorphism f = factor_inclusion(1, 2);
    cmat rho = cmat::Zero(2, 2);
    rho(0, 0) = 1;
    const cond_exp E = parametric_expectation(f, rho);
    CHECK(check_expectation(E).valid());
    const pp_result r = pp_index(E, 1, 16, false);
    CHECK(!r.faithful);
    CHECK(!std::isfinite(r.value));
}

TEST_CASE("parametric expectations: E_ρ(1) = 1 and ρ = 1/Λ is the minimal one") {
    const homomorphism f = factor_inclusion(2, 2);
    rng_t rng(4);
    cmat rho = numerics::random_pd(2, rng);
    rho /= rho.trace();
    CHECK(check_expectation(parametric_expectation(f, rho)).valid());
    CHECK((minimal_density(f) - 0.5 * numerics::identity(2)).norm() < 1e-12);
}

TEST_CASE("Longo index of ℂ ⊂ M2 is attained at the trace") {
    const homomorphism f = factor_inclusion(1, 2);
    const longo_result L = longo_index(f, 3);
    CHECK(L.value == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(L.minimal_value == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(L.distance_to_minimal < 1e-3);
}

TEST_CASE("corner sum Σ[p_i B p_i : p_i A] = ‖⟦B:A⟧‖² for Λ = [[2],[1]]") {
    imat lambda(2, 1);
    lambda << 2, 1;
    const homomorphism f = canonical_embedding(algebra({1, 2}), algebra({4}), lambda);
    const corner_identity c = corner_index_sum(f);
    CHECK(c.norm_squared == doctest::Approx(5.0));
    CHECK(c.corner_sum == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("extremality: E₀(p_i) = d_i / Σ d_i on M2 ⊂ M6") {
    rng_t rng(2);
    const extremality_report r = extremality(factor_inclusion(2, 3), rng);
    double sum_d = 0;
    for (double d : r.dims) sum_d += d;
    REQUIRE(r.expectation.size() == r.dims.size());
    for (std::size_t i = 0; i < r.dims.size(); ++i)
        CHECK(r.expectation[i] == doctest::Approx(r.dims[i] / sum_d).epsilon(1e-8));
    CHECK(r.residual < 1e-8);
    CHECK(r.trace_residual < 1e-9);
}

TEST_CASE("matrix_norms of diag(3, 4)") {
    cmat m = cmat::Zero(2, 2);
    m(0, 0) = 3;
    m(1, 1) = 4;
    const auto n = matrix_norms(m);
    CHECK(n.at("operator") == doctest::Approx(4.0));
    CHECK(n.at("l2_entrywise") == doctest::Approx(5.0));
    CHECK(n.at("l1_entrywise") == doctest::Approx(7.0));
}

TEST_CASE("random configurations satisfy both inequalities") {
    rng_t rng(21);
    for (bool commuting : {false, true}) {
        const inequality_config c = random_config(rng, commuting);
        for (const auto& e : check_inequalities(c)) {
            INFO(e.name);
            if (e.hypothesis && !e.informational) CHECK(e.holds);
        }
    }
}

TEST_CASE("transpose law for a concrete inclusion") {
    const algebra A({1, 2}), B({3});
    imat lambda(2, 1);
    lambda << 1, 1;
    const homomorphism f = canonical_embedding(A, B, lambda);
    const bm::concrete_algebra Bc{B, {1}, numerics::identity(3)};
    const bm::concrete_algebra Ac = bm::concrete_from_rep(
        A, [&](int i, int a, int b) { return f(element::matrix_unit(A, i, a, b)).dense(); });
    const transpose_report t = transpose_law(Ac, Bc);
    CHECK(t.holds);
    CHECK((t.forward - lambda.cast<cplx>()).norm() < 1e-9);
}
