// test_l2.cpp — standard form, square roots of states, inner products

#include "doctest.h"
#include "vnalg/l2.hpp"

using vnalg::cmat;
using vnalg::cplx;
using vnalg::cvec;
using vnalg::error;
using vnalg::imat;
using vnalg::rng_t;
namespace numerics = vnalg::numerics;
using namespace vnalg::l2;
using vnalg::algebra::trivial;

namespace {
functional diag_state(const algebra& A, std::vector<double> d) {
    element rho = element::zero(A);
    int k = 0;
    for (int i = 0; i < A.num_blocks(); ++i)
        for (int a = 0; a < A.block(i); ++a) rho.blocks[i](a, a) = d[k++];
    return functional::from_density(rho);
}
} // namespace

TEST_CASE("on ℂ the inner product of √a and √b is √(ab)") {
    const functional phi = diag_state(trivial(), {4}), psi = diag_state(trivial(), {9});
    CHECK(inner_direct(phi, psi) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(inner_analytic(phi, psi).value == doctest::Approx(6.0).epsilon(1e-10));
}

TEST_CASE("commuting densities on M2 ⊕ M1: Σ √(p_k r_k)") {
    const algebra A({2, 1});
    const functional phi = diag_state(A, {1, 4, 2}), psi = diag_state(A, {9, 1, 8});
    const double expect = 3 + 2 + 4;
    CHECK(inner_direct(phi, psi) == doctest::Approx(expect).epsilon(1e-12));
    const auto an = inner_analytic(phi, psi);
    CHECK(an.value == doctest::Approx(expect).epsilon(1e-10));
    CHECK(std::abs(an.imag) < 1e-10);
}

TEST_CASE("disjoint supports are orthogonal") {
    const algebra A({2});
    const functional phi = diag_state(A, {1, 0}), psi = diag_state(A, {0, 1});
    CHECK(std::abs(inner_direct(phi, psi)) < 1e-14);
    CHECK(std::abs(inner_analytic(phi, psi).value) < 1e-10);
}

TEST_CASE("‖√φ‖² = φ(1), including rank-deficient densities") {
    rng_t rng(12);
    for (int t = 0; t < 20; ++t) {
        const algebra A = vnalg::algebra::random_algebra(3, 4, rng);
        const functional phi = functional::random_positive(A, rng, true);
        const double n = sqrt_state(phi).norm();
        CHECK(n * n == doctest::Approx(phi(element::unit(A)).real()).epsilon(1e-10));
    }
}

TEST_CASE("√φ of the density diag(4, 1) is diag(2, 1)") {
    const l2_vector v = sqrt_state(diag_state(algebra({2}), {4, 1}));
    CHECK(std::abs(v.blocks[0](0, 0) - 2.0) < 1e-12);
    CHECK(std::abs(v.blocks[0](1, 1) - 1.0) < 1e-12);
    CHECK(std::abs(v.blocks[0](0, 1)) < 1e-12);
}

TEST_CASE("actions and J on L²(M2)") {
    const algebra A({2});
    l2_vector xi = l2_vector::zero(A);
    xi.blocks[0](0, 1) = cplx(0, 1);
    const element e10 = element::matrix_unit(A, 0, 1, 0);
    CHECK(xi.left(e10).blocks[0](1, 1) == cplx(0, 1));
    CHECK(xi.right(e10).blocks[0](0, 0) == cplx(0, 1));
    const l2_vector Jxi = modular_conjugation(xi);
    CHECK(Jxi.blocks[0](1, 0) == cplx(0, -1));
    CHECK(std::abs(xi.inner(xi) - 1.0) < 1e-15);
    // left and right operators commute
    rng_t rng(2);
    const element a = element::random(A, rng), b = element::random(A, rng);
    const cmat L = left_operator(a), R = right_operator(b);
    CHECK((L * R - R * L).norm() < 1e-12);
}

TEST_CASE("standard form: all five axioms hold; a linear J breaks the fifth") {
    const algebra A({2, 1, 3});
    const auto ok = check_standard_form(A);
    REQUIRE(ok.axioms.size() == 5u);
    CHECK(ok.all_pass());
    const auto bad = check_standard_form(A, conjugation::transpose);
    REQUIRE(bad.axioms.size() == 5u);
    CHECK(!bad.axioms[4].pass);
    CHECK(!bad.all_pass());
}

TEST_CASE("l2_corner is an isometry onto p L² p") {
    const algebra A({3});
    element p = element::zero(A);
    p.blocks[0](0, 0) = 1;
    p.blocks[0](1, 1) = 1;
    const corner_map c = l2_corner(A, p);
    CHECK(c.matrix.rows() == 9);
    CHECK(c.matrix.cols() == 4);
    CHECK(numerics::isometry_residual(c.matrix) < 1e-12);
    const cmat P = left_operator(p) * right_operator(p);
    CHECK((P * c.matrix - c.matrix).norm() < 1e-12);
}
