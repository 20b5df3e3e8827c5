// test_duality.cpp — duality data, normalization and statistical dimension

#include "doctest.h"
#include "vnalg/duality.hpp"

using vnalg::cmat;
using vnalg::cplx;
using vnalg::cvec;
using vnalg::error;
using vnalg::imat;
using vnalg::rng_t;
namespace numerics = vnalg::numerics;
namespace bmod = vnalg::bimodule;
using namespace vnalg::duality;
using vnalg::algebra::algebra;
using vnalg::algebra::element;

namespace {
imat mat(int r, int c, std::initializer_list<int> v) {
    imat m(r, c);
    int k = 0;
    for (int x : v) m(k / c, k % c) = x, ++k;
    return m;
}
} // namespace

TEST_CASE("canonical duality of a factor bimodule: zig-zags, normalization, dim = m") {
    const bimodule H(algebra({2}), algebra({3}), mat(1, 1, {2}));
    const duality_data D = canonical_duality(H);
    CHECK(D.normalized);
    CHECK(zigzag_residual(D) < 1e-12);
    CHECK(normalization_residual(D) < 1e-12);
    CHECK(identity_residual(zigzag_h(D)) < 1e-12);
    CHECK(identity_residual(zigzag_hbar(D)) < 1e-12);
    const cmat d = statistical_dimension(D);
    REQUIRE(d.rows() == 1);
    CHECK(d(0, 0).real() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("statistical dimension of a multi-block bimodule is its multiplicity matrix") {
    const imat m = mat(2, 2, {1, 2, 0, 3});
    const bimodule H(algebra({1, 2}), algebra({2, 1}), m);
    const cmat d = statistical_dimension(canonical_duality(H));
    CHECK((d - m.cast<cplx>()).norm() < 1e-10);
}

TEST_CASE("dimension of L²(A) over (A, A) is the identity matrix") {
    const cmat d = statistical_dimension(canonical_duality(bmod::l2_bimodule(algebra({1, 3}))));
    CHECK((d - numerics::identity(2)).norm() < 1e-10);
}

TEST_CASE("R*R = S*S = dim on factors") {
    const bimodule H(algebra({2}), algebra({2}), mat(1, 1, {3}));
    const duality_data D = canonical_duality(H);
    const cmat rr = (D.R.adjoint() * D.R).matrix(), ss = (D.S.adjoint() * D.S).matrix();
    CHECK((rr - 3.0 * numerics::identity(rr.rows())).norm() < 1e-10);
    CHECK((ss - 3.0 * numerics::identity(ss.rows())).norm() < 1e-10);
}

TEST_CASE("solve_normalization_element: scalar case x = (b/a)^{1/4}") {
    cmat a(1, 1), b(1, 1);
    a << 2.0;
    b << 32.0;
    CHECK(std::abs(solve_normalization_element(a, b)(0, 0) - 2.0) < 1e-12);
}

TEST_CASE("solve_normalization_element: x a x = x⁻¹ b x⁻¹ on positive matrices") {
    rng_t rng(17);
    for (int t = 0; t < 10; ++t) {
        const cmat a = numerics::random_pd(3, rng), b = numerics::random_pd(3, rng);
        const cmat x = solve_normalization_element(a, b);
        CHECK(numerics::hermitian_eig(x).values(0) > 0);
        const cmat xi = x.inverse();
        CHECK(numerics::rel_diff(x * a * x, xi * b * xi) < 1e-9);
    }
}

TEST_CASE("skewing keeps the zig-zags but breaks normalization; normalize repairs it") {
    rng_t rng(5);
    const bimodule H(algebra({1, 2}), algebra({2}), mat(2, 1, {2, 1}));
    const duality_data D = canonical_duality(H);
    const duality_data Ds = skew(D, bmod::random_invertible_endo(H, rng));
    CHECK(zigzag_residual(Ds) < 1e-10);
    CHECK(normalization_residual(Ds) > 1e-3);
    const auto n = normalize(H, Ds.Hbar, Ds.R, Ds.S);
    CHECK(n.zigzag_residual < 1e-8);
    CHECK(n.normalization_residual < 1e-8);
    CHECK((statistical_dimension(n.D) - H.mult.cast<cplx>()).norm() < 1e-8);
}

TEST_CASE("normalization fails loudly on a non-duality") {
    const bimodule H(algebra({2}), algebra({2}), mat(1, 1, {1}));
    const duality_data D = canonical_duality(H);
    CHECK_THROWS(normalize(H, D.Hbar, D.R * 0.0, D.S));
}

TEST_CASE("bar map: both bends agree, linear and order-reversing") {
    rng_t rng(9);
    const bimodule H(algebra({1, 2}), algebra({2}), mat(2, 1, {1, 2}));
    const duality_data D = canonical_duality(H);
    const bmod::bimodule_map x = bmod::random_bilinear(H, H, rng);
    const auto l = bar_left(D, x), r = bar_right(D, x);
    CHECK(numerics::rel_diff(l.matrix(), r.matrix()) < 1e-10);
    // the bend is linear in x and reverses products
    const bmod::bimodule_map y = bmod::random_bilinear(H, H, rng);
    CHECK(numerics::rel_diff(bar_left(D, x * cplx(0, 1)).matrix(), cplx(0, 1) * l.matrix()) < 1e-10);
    CHECK(numerics::rel_diff(bar_left(D, x * y).matrix(), (bar_left(D, y) * bar_left(D, x)).matrix()) < 1e-10);
    CHECK(numerics::rel_diff(bar_involution(D, x).matrix(), l.matrix()) < 1e-10);
}

TEST_CASE("compare_duals of a duality with itself is the identity") {
    const bimodule H(algebra({2}), algebra({1, 2}), mat(1, 2, {1, 1}));
    const duality_data D = canonical_duality(H);
    CHECK(identity_residual(compare_duals(D, D)) < 1e-10);
}

TEST_CASE("Jones projections: e₁e₂e₁ = e₁/d² for H = ℂ² ⊗ Mat(2,2)") {
    const bimodule H(algebra({2}), algebra({2}), mat(1, 1, {2}));
    const jones_report j = jones_projections(canonical_duality(H));
    CHECK(j.dim_R == doctest::Approx(2.0));
    CHECK(j.e1_residual < 1e-10);
    CHECK(j.e2_residual < 1e-10);
    CHECK(j.relation_residual < 1e-10);
    CHECK(j.holds);
}

TEST_CASE("canonical states: φ_R(x) = ψ_S(x) on End(H)") {
    rng_t rng(13);
    const bimodule H(algebra({1, 2}), algebra({1, 2}), mat(2, 2, {1, 1, 0, 2}));
    const duality_data D = canonical_duality(H);
    const auto x = bmod::random_bilinear(H, H, rng);
    const cmat c = canonical_state(D, x);
    CHECK(c.rows() == 2);
    CHECK(c.cols() == 2);
    // the two central states carry the same total
    CHECK(std::abs(left_state(D, x).sum() - right_state(D, x).sum()) < 1e-10);
}
