// test_algebra.cpp — multi-matrix algebras, elements, functionals, homomorphisms

#include "doctest.h"
#include "vnalg/algebra.hpp"

using vnalg::cmat;
using vnalg::cplx;
using vnalg::cvec;
using vnalg::error;
using vnalg::imat;
using vnalg::rng_t;
namespace numerics = vnalg::numerics;
using namespace vnalg::algebra;

TEST_CASE("M2 ⊕ M3: dimensions and offsets") {
    const algebra A({2, 3});
    CHECK(A.num_blocks() == 2);
    CHECK(A.dim() == 13);
    CHECK(A.total() == 5);
    CHECK(A.offset(1) == 4);
    CHECK(A.diag_offset(1) == 2);
    CHECK(!A.is_factor());
    CHECK(A.str() == "M2+M3");
    CHECK(trivial().is_trivial());
    CHECK(tensor(algebra({2}), A).blocks() == std::vector<int>{4, 6});
    CHECK(sum(A, algebra({1})).blocks() == std::vector<int>{2, 3, 1});
}

TEST_CASE("matrix units multiply as e_ab e_bc = e_ac and vanish across blocks") {
    const algebra A({2, 3});
    const element e01 = element::matrix_unit(A, 1, 0, 1), e12 = element::matrix_unit(A, 1, 1, 2);
    const element e02 = element::matrix_unit(A, 1, 0, 2);
    CHECK((e01 * e12 - e02).norm() == 0);
    CHECK((e12 * e01).norm() == 0);
    CHECK((element::matrix_unit(A, 0, 0, 0) * e01).norm() == 0);
    CHECK(matrix_units(A).size() == 13u);
}

TEST_CASE("minimal central projections sum to the unit") {
    const algebra A({1, 2, 3});
    const auto p = minimal_central_projections(A);
    REQUIRE(p.size() == 3u);
    element s = element::zero(A);
    for (const auto& q : p) {
        CHECK(q.is_projection());
        s = s + q;
    }
    CHECK((s - element::unit(A)).norm() == 0);
}

TEST_CASE("element vec/dense round trips and adjoint") {
    rng_t rng(3);
    const algebra A({2, 1});
    const element x = element::random(A, rng);
    CHECK((element::from_vec(A, x.vec()) - x).norm() < 1e-14);
    CHECK((element::from_dense(A, x.dense()) - x).norm() < 1e-14);
    CHECK(numerics::rel_diff(x.adjoint().dense(), x.dense().adjoint()) == 0);
}

TEST_CASE("functional: trace on M2 ⊕ M1 evaluates to Σ Tr") {
    const algebra A({2, 1});
    const functional tr = functional::from_density(element::unit(A));
    CHECK(tr(element::unit(A)).real() == doctest::Approx(3.0));
    CHECK(tr(element::matrix_unit(A, 0, 0, 1)).real() == doctest::Approx(0.0));
    CHECK(tr.is_positive());
    CHECK(tr.l1_norm() == doctest::Approx(3.0));
    rng_t rng(1);
    const functional phi = functional::random_positive(A, rng);
    CHECK(phi.is_positive());
}

TEST_CASE("support of a rank-one density is its range projection") {
    const algebra A({2});
    element rho = element::zero(A);
    rho.blocks[0](0, 0) = 2;
    const functional phi = functional::from_density(rho);
    const element s = phi.support();
    CHECK(std::abs(s.blocks[0](0, 0) - 1.0) < 1e-12);
    CHECK(std::abs(s.blocks[0](1, 1)) < 1e-12);
}

TEST_CASE("canonical embedding ℂ → M3 sends 1 to the identity") {
    const homomorphism f = canonical_embedding(trivial(), algebra({3}), imat::Constant(1, 1, 3));
    const element one = f(element::unit(trivial()));
    CHECK((one - element::unit(algebra({3}))).norm() < 1e-14);
    CHECK(f.injective());
    CHECK(homomorphism_residual(f) < 1e-12);
    CHECK(f.matrix().rows() == 9);
    CHECK(f.matrix().cols() == 1);
}

TEST_CASE("canonical embedding M1 ⊕ M2 → M4 with Λ = [[2],[1]]: x ↦ x₁·1₂ ⊕ x₂") {
    const algebra A({1, 2}), B({4});
    imat lambda(2, 1);
    lambda << 2, 1;
    const homomorphism f = canonical_embedding(A, B, lambda);
    element x = element::zero(A);
    x.blocks[0](0, 0) = 5;
    x.blocks[1](0, 1) = 7;
    const element y = f(x);
    CHECK(y.blocks[0](0, 0) == cplx(5));
    CHECK(y.blocks[0](1, 1) == cplx(5));
    CHECK(y.blocks[0](2, 3) == cplx(7));
    CHECK(homomorphism_residual(f) < 1e-12);
}

TEST_CASE("non-unital multiplicities are rejected") {
    CHECK_THROWS(canonical_embedding(trivial(), algebra({3}), imat::Constant(1, 1, 2)));
}

TEST_CASE("composition multiplies inclusion matrices") {
    rng_t rng(4);
    const algebra A({1, 2});
    const homomorphism f = random_inclusion(A, 2, 4, rng);
    const homomorphism g = random_inclusion(f.target, 2, 8, rng);
    const homomorphism h = compose_hom(f, g);
    CHECK(h.mult == f.mult * g.mult);
    CHECK(homomorphism_residual(h) < 1e-10);
    element x = element::random(A, rng);
    CHECK((h(x) - g(f(x))).norm() < 1e-10);
}

TEST_CASE("ingest_hom recovers Λ of a conjugated embedding") {
    rng_t rng(8);
    const algebra A({1, 2}), B({3, 4});
    imat lambda(2, 2);
    lambda << 1, 2, 1, 1;
    const homomorphism f = random_conjugate(canonical_embedding(A, B, lambda), rng);
    const homomorphism g = ingest_hom(A, B, [&](const element& a) { return f(a); });
    CHECK(g.mult == lambda);
    element x = element::random(A, rng);
    CHECK((g(x) - f(x)).norm() < 1e-9);
}

TEST_CASE("corner of M3 by a rank-two projection is M2") {
    const algebra A({3});
    element p = element::zero(A);
    p.blocks[0](0, 0) = 1;
    p.blocks[0](2, 2) = 1;
    const corner_data c = corner(A, p);
    CHECK(c.alg.blocks() == std::vector<int>{2});
    const element one = c.embed(element::unit(c.alg));
    CHECK((one - p).norm() < 1e-12);
}
