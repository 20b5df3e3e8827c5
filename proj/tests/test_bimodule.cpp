// test_bimodule.cpp — canonical bimodules, maps, fusion, commutants

#include "doctest.h"
#include "vnalg/bimodule.hpp"

using vnalg::cmat;
using vnalg::cplx;
using vnalg::cvec;
using vnalg::error;
using vnalg::imat;
using vnalg::rng_t;
namespace numerics = vnalg::numerics;
using namespace vnalg::bimodule;
using vnalg::algebra::trivial;

namespace {
imat mat(int r, int c, std::initializer_list<int> v) {
    imat m(r, c);
    int k = 0;
    for (int x : v) m(k / c, k % c) = x, ++k;
    return m;
}
} // namespace

TEST_CASE("dimension of ⊕ ℂ^{m_ij} ⊗ Mat(n_i, k_j)") {
    const bimodule H(algebra({2}), algebra({3}), mat(1, 1, {2}));
    CHECK(H.dim() == 12);
    const bimodule K(algebra({1, 2}), algebra({2, 1}), mat(2, 2, {1, 1, 0, 2}));
    CHECK(K.dim() == 1 * 2 + 1 * 1 + 2 * 2 * 1);
    CHECK(K.offset(1, 1) == 3);
    CHECK(K.index(1, 1, 1, 1, 0) == 3 + 2 + 1);
}

TEST_CASE("conjugate, direct sum, external tensor and L²A on multiplicities") {
    const algebra A({1, 2}), B({3});
    const bimodule H(A, B, mat(2, 1, {3, 1}));
    const bimodule Hb = conjugate(H);
    CHECK(Hb.left == B);
    CHECK(Hb.mult == mat(1, 2, {3, 1}));
    CHECK(direct_sum(H, H).mult == mat(2, 1, {6, 2}));
    CHECK(l2_bimodule(A).mult == mat(2, 2, {1, 0, 0, 1}));
    const bimodule T = external_tensor(H, bimodule(trivial(), trivial(), mat(1, 1, {2})));
    CHECK(T.mult == mat(2, 1, {6, 2}));
    CHECK_THROWS(direct_sum(H, l2_bimodule(A)));
}

TEST_CASE("the two actions are representations and commute") {
    rng_t rng(6);
    const algebra A({1, 2}), B({2, 1});
    const bimodule H(A, B, mat(2, 2, {1, 2, 1, 1}));
    const element a = element::random(A, rng), a2 = element::random(A, rng), b = element::random(B, rng);
    CHECK((left_action(H, a * a2) - left_action(H, a) * left_action(H, a2)).norm() < 1e-12);
    CHECK((left_action(H, a.adjoint()) - left_action(H, a).adjoint()).norm() < 1e-12);
    CHECK((right_action(H, b * b) - right_action(H, b) * right_action(H, b)).norm() < 1e-12);
    CHECK((left_action(H, a) * right_action(H, b) - right_action(H, b) * left_action(H, a)).norm() < 1e-12);
    CHECK((left_action(H, element::unit(A)) - numerics::identity(H.dim())).norm() == 0);
}

TEST_CASE("bar: conj(x ξ) = x̄ ξ̄") {
    rng_t rng(3);
    const bimodule H(algebra({2}), algebra({1, 2}), mat(1, 2, {1, 2}));
    const cvec xi = numerics::random_unit_vector(H.dim(), rng);
    const cmat x = right_action(H, element::random(H.right, rng));
    CHECK((bar_operator(H, x) * bar_vector(H, xi) - bar_vector(H, x * xi)).norm() < 1e-12);
    CHECK(numerics::unitary_residual(conjugation_permutation(H)) == 0);
}

TEST_CASE("hom_space dimension is Σ m_ij m'_ij") {
    const algebra A({1, 2}), B({2});
    const bimodule H(A, B, mat(2, 1, {2, 1})), K(A, B, mat(2, 1, {3, 2}));
    const auto basis = hom_space(H, K);
    CHECK(basis.size() == 8u);
    for (const auto& f : basis) {
        CHECK(left_linearity_residual(f) < 1e-12);
        CHECK(right_linearity_residual(f) < 1e-12);
    }
}

TEST_CASE("from_full rejects a matrix that is not bilinear") {
    rng_t rng(1);
    const bimodule H(algebra({2}), algebra({2}), mat(1, 1, {1}));
    const cmat m = numerics::random_matrix(4, 4, rng);
    try {
        from_full(H, H, m, linearity::bilinear);
        FAIL("no exception");
    } catch (const error& e) {
        CHECK(e.kind() == "LinearityViolation");
    }
    CHECK_NOTHROW(from_full(H, H, m, linearity::plain));
}

TEST_CASE("fusion multiplies multiplicity matrices and the Gram model has that dimension") {
    const algebra A({1, 2}), B({2, 3}), C({1});
    const bimodule H(A, B, mat(2, 2, {1, 0, 2, 1})), K(B, C, mat(2, 1, {2, 1}));
    const auto fr = fuse(H, K);
    CHECK(fr.object.mult == mat(2, 1, {2, 5}));
    CHECK(fr.gram_dim == fr.object.dim());
    CHECK(fr.unitarity_residual < 1e-9);
    CHECK(fr.gram_residual < 1e-9);
    CHECK_THROWS(fuse_object(H, H));
}

TEST_CASE("fusion over ℂ is the tensor product of multiplicity spaces") {
    const bimodule H(algebra({2}), trivial(), mat(1, 1, {1})), K(trivial(), algebra({3}), mat(1, 1, {1}));
    const bimodule F = fuse_object(H, K);
    CHECK(F.dim() == 6);
    CHECK(F.mult == mat(1, 1, {1}));
}

TEST_CASE("unitors send 1 ⊗ ξ and ξ ⊗ 1 back to ξ") {
    rng_t rng(4);
    const algebra A({1, 2}), B({2});
    const bimodule H(A, B, mat(2, 1, {1, 1}));
    const cvec xi = numerics::random_unit_vector(H.dim(), rng);
    const cvec one_a = element::unit(A).vec(), one_b = element::unit(B).vec();
    const bimodule_map lu = left_unitor(H), ru = right_unitor(H);
    CHECK((lu.apply(product(l2_bimodule(A), H, one_a, xi)) - xi).norm() < 1e-12);
    CHECK((ru.apply(product(H, l2_bimodule(B), xi, one_b)) - xi).norm() < 1e-12);
    CHECK(numerics::unitary_residual(lu.matrix()) < 1e-12);
}

TEST_CASE("associator sends (ξκ)λ to ξ(κλ)") {
    rng_t rng(5);
    const algebra A({2}), B({1, 2}), C({2}), D({1});
    const bimodule H(A, B, mat(1, 2, {1, 1})), K(B, C, mat(2, 1, {1, 1})), L(C, D, mat(1, 1, {2}));
    const cvec x = numerics::random_unit_vector(H.dim(), rng), k = numerics::random_unit_vector(K.dim(), rng),
               l = numerics::random_unit_vector(L.dim(), rng);
    const bimodule HK = fuse_object(H, K), KL = fuse_object(K, L);
    const cvec lhs = associator(H, K, L).apply(product(HK, L, product(H, K, x, k), l));
    const cvec rhs = product(H, KL, x, product(K, L, k, l));
    CHECK((lhs - rhs).norm() < 1e-12);
    CHECK(numerics::unitary_residual(associator(H, K, L).matrix()) < 1e-12);
}

TEST_CASE("fused maps compose factorwise") {
    rng_t rng(7);
    const algebra A({2}), B({1, 2}), C({1});
    const bimodule H(A, B, mat(1, 2, {1, 2})), K(B, C, mat(2, 1, {2, 1}));
    const bimodule_map f = random_bilinear(H, H, rng), f2 = random_bilinear(H, H, rng);
    const bimodule_map g = random_bilinear(K, K, rng), g2 = random_bilinear(K, K, rng);
    const cmat lhs = fuse_maps(f * f2, g * g2).matrix();
    const cmat rhs = fuse_maps(f, g).matrix() * fuse_maps(f2, g2).matrix();
    CHECK(numerics::rel_diff(lhs, rhs) < 1e-12);
    CHECK(numerics::rel_diff(fused_map(f, g).matrix(), fuse_maps(f, g).matrix()) < 1e-10);
}

TEST_CASE("commutant of the left action of M2 on ℂ² ⊗ Mat(2,3) is M6") {
    const bimodule H(algebra({2}), algebra({3}), mat(1, 1, {2}));
    const auto c = commutant_on(H, side::left);
    CHECK(c.commutant.abs.blocks() == std::vector<int>{6});
    CHECK(c.double_commutant_residual < 1e-9);
}

TEST_CASE("ingest recovers the multiplicities of a rotated canonical bimodule") {
    rng_t rng(11);
    const algebra A({1, 2}), B({2});
    const bimodule H(A, B, mat(2, 1, {2, 1}));
    const cmat U = numerics::random_unitary(H.dim(), rng);
    const auto g = ingest(
        A, B, [&](int i, int a, int b) -> cmat { return U * left_action(H, element::matrix_unit(A, i, a, b)) * U.adjoint(); },
        [&](int j, int c, int d) -> cmat { return U * right_action(H, element::matrix_unit(B, j, c, d)) * U.adjoint(); });
    CHECK(g.H.mult == H.mult);
    CHECK(numerics::unitary_residual(g.U) < 1e-9);
}
