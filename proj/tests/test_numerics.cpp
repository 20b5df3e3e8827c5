// test_numerics.cpp — dense kernels against hand-computed values

#include "doctest.h"
#include "vnalg/numerics.hpp"

using namespace vnalg;
using namespace vnalg::numerics;

namespace {
cmat m2(cplx a, cplx b, cplx c, cplx d) {
    cmat m(2, 2);
    m << a, b, c, d;
    return m;
}
} // namespace

TEST_CASE("hermitian_eig: eigenvalues of [[2,1],[1,2]] are 1 and 3") {
    const auto e = hermitian_eig(m2(2, 1, 1, 2));
    CHECK(e.values(0) == doctest::Approx(1.0));
    CHECK(e.values(1) == doctest::Approx(3.0));
    CHECK(unitary_residual(e.vectors) < 1e-12);
    const cmat back = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
    CHECK(rel_diff(back, m2(2, 1, 1, 2)) < 1e-12);
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
    try {
        hermitian_eig(m2(1, 2, 0, 1));
        FAIL("no exception");
    } catch (const error& e) {
        CHECK(e.kind() == "NotHermitian");
    }
}

TEST_CASE("matrix_power: diag(4, 0)^{1/2} = diag(2, 0) with 0^z = 0") {
    const cmat p = matrix_power(m2(4, 0, 0, 0), 0.5);
    CHECK(rel_diff(p, m2(2, 0, 0, 0)) < 1e-12);
    const cmat inv = matrix_power(m2(4, 0, 0, 0), -1.0);
    CHECK(rel_diff(inv, m2(0.25, 0, 0, 0)) < 1e-12);
    // imaginary powers are unitary on the support
    const cmat u = matrix_power(m2(2, 1, 1, 2), cplx(0, 0.7));
    CHECK(unitary_residual(u) < 1e-12);
}

TEST_CASE("polar_decompose: [[0,2],[0,0]] = partial isometry times (m*m)^{1/2}") {
    const cmat m = m2(0, 2, 0, 0);
    const auto p = polar_decompose(m);
    CHECK(rel_diff(p.positive, m2(0, 0, 0, 2)) < 1e-12);
    CHECK(rel_diff(p.isometry, m2(0, 1, 0, 0)) < 1e-12);
    CHECK(rel_diff(p.isometry * p.positive, m) < 1e-12);
}

TEST_CASE("null_space and range_basis of the all-ones 2×2 matrix") {
    const cmat ones = m2(1, 1, 1, 1);
    const cmat k = null_space(ones);
    REQUIRE(k.cols() == 1);
    CHECK(std::abs(k(0, 0) + k(1, 0)) < 1e-12);
    CHECK(std::abs(std::abs(k(0, 0)) - 1 / std::sqrt(2.0)) < 1e-12);
    const cmat r = range_basis(ones);
    REQUIRE(r.cols() == 1);
    CHECK(std::abs(r(0, 0) - r(1, 0)) < 1e-12);
}

TEST_CASE("psd_pinv inverts on the support only") {
    const cmat p = psd_pinv(m2(2, 2, 2, 2));  // 4·(projection onto (1,1)/√2)
    CHECK(rel_diff(p, m2(0.125, 0.125, 0.125, 0.125)) < 1e-12);
}

TEST_CASE("kron and direct_sum on small matrices") {
    const cmat a = m2(1, 2, 3, 4);
    const cmat k = kron(a, identity(2));
    CHECK(k.rows() == 4);
    CHECK(k(0, 2) == cplx(2));
    CHECK(k(3, 1) == cplx(3));
    CHECK(k(0, 1) == cplx(0));
    const cmat d = direct_sum({a, identity(1)});
    CHECK(d.rows() == 3);
    CHECK(d(2, 2) == cplx(1));
    CHECK(d(0, 2) == cplx(0));
}

TEST_CASE("vec is row-major and unvec inverts it") {
    const cmat a = m2(1, 2, 3, 4);
    const cvec v = vec(a);
    CHECK(v(1) == cplx(2));
    CHECK(v(2) == cplx(3));
    CHECK(unvec(v, 2, 2) == a);
}

TEST_CASE("residuals vanish exactly on their model objects") {
    CHECK(hermitian_residual(m2(1, cplx(0, 1), cplx(0, -1), 2)) == 0);
    CHECK(hermitian_residual(m2(1, 1, 0, 1)) > 0.5);
    CHECK(unitary_residual(m2(0, 1, 1, 0)) == 0);
    cmat v(3, 1);
    v << 0, 1, 0;
    CHECK(isometry_residual(v) == 0);
    CHECK(rel_diff(identity(2), identity(2)) == 0);
}

TEST_CASE("random generators are deterministic and well-formed") {
    rng_t r1(5), r2(5);
    const cmat u1 = random_unitary(4, r1), u2 = random_unitary(4, r2);
    CHECK(u1 == u2);
    CHECK(unitary_residual(u1) < 1e-12);
    rng_t rng(9);
    const cmat p = random_psd(4, 2, rng);
    const auto e = hermitian_eig(p);
    CHECK(std::abs(e.values(0)) < 1e-10);
    CHECK(std::abs(e.values(1)) < 1e-10);
    CHECK(e.values(2) > 1e-6);
    CHECK(hermitian_eig(random_pd(3, rng)).values(0) > 0);
    CHECK(std::abs(random_unit_vector(5, rng).norm() - 1) < 1e-12);
    for (int k = 0; k < 50; ++k) {
        const int x = random_int(2, 4, rng);
        CHECK((x >= 2 && x <= 4));
    }
}
