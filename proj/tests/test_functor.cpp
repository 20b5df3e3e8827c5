// test_functor.cpp — L² of homomorphisms, Φ, and functoriality of fusion

#include "doctest.h"
#include "vnalg/functor.hpp"

using vnalg::cmat;
using vnalg::cplx;
using vnalg::cvec;
using vnalg::imat;
using vnalg::rng_t;
namespace numerics = vnalg::numerics;
using namespace vnalg::functor;
using vnalg::algebra::canonical_embedding;
using vnalg::algebra::trivial;

namespace {
homomorphism factor_inclusion(int k, int m) {
    return canonical_embedding(algebra({k}), algebra({k * m}), imat::Constant(1, 1, m));
}
} // namespace

TEST_CASE("L² of ℂ ⊂ M_n sends 1 to √n times a unit vector") {
    const homomorphism f = canonical_embedding(trivial(), algebra({3}), imat::Constant(1, 1, 3));
    const l2_map L = l2_of_hom(f);
    REQUIRE(L.scale.size() == 1u);
    CHECK(L.scale[0] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    // φ = 1 on ℂ pulls back to the unnormalized trace, whose square root is 1₃
    cvec one(1);
    one << 1;
    const cvec image = L(one);
    CHECK((image - vnalg::algebra::element::unit(algebra({3})).vec()).norm() < 1e-12);
}

TEST_CASE("√dim scaling on factor inclusions, with vanishing defect") {
    for (auto [k, m] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
        const l2_map L = l2_of_hom(factor_inclusion(k, m));
        CHECK(L.scale[0] == doctest::Approx(std::sqrt(double(m))).epsilon(1e-12));
        CHECK(L.defect[0] < 1e-9);
        CHECK(L.extension_residual < 1e-9);
    }
}

TEST_CASE("l2_of_hom matches √(φ∘E) on random states") {
    rng_t rng(5);
    imat lambda(2, 1);
    lambda << 1, 2;
    const homomorphism f = vnalg::algebra::random_conjugate(canonical_embedding(algebra({2, 1}), algebra({4}), lambda), rng);
    const l2_map L = l2_of_hom(f);
    for (int t = 0; t < 5; ++t) {
        const functional phi = functional::random_positive(f.source, rng);
        CHECK(sqrt_state_residual(L, f, phi) < 1e-9);
    }
}

TEST_CASE("functoriality: L²(g∘f) = L²(g) L²(f)") {
    rng_t rng(8);
    const homomorphism f = vnalg::algebra::random_inclusion(algebra({1, 2}), 2, 4, rng);
    const homomorphism g = vnalg::algebra::random_inclusion(f.target, 2, 8, rng);
    const cmat lhs = l2_of_hom(vnalg::algebra::compose_hom(f, g)).matrix;
    const cmat rhs = l2_of_hom(g).matrix * l2_of_hom(f).matrix;
    CHECK(numerics::rel_diff(lhs, rhs) < 1e-9);
}

TEST_CASE("l2_iso is an isometry and rejects non-injective maps") {
    rng_t rng(2);
    const homomorphism f = vnalg::algebra::random_inclusion(algebra({1, 2}), 2, 4, rng);
    CHECK(numerics::isometry_residual(l2_iso(f).matrix) < 1e-10);
    imat lambda(2, 1);
    lambda << 0, 1;
    const homomorphism q = canonical_embedding(algebra({1, 2}), algebra({2}), lambda);
    CHECK_THROWS(l2_iso(q));
}

TEST_CASE("center_in_image and restricted functoriality of l2_iso") {
    CHECK(center_in_image(factor_inclusion(2, 2)));
    imat lambda(1, 2);
    lambda << 1, 1;
    CHECK(!center_in_image(canonical_embedding(trivial(), algebra({1, 1}), lambda)));
    rng_t rng(4);
    const homomorphism f = random_central_inclusion(algebra({1, 2}), 2, 4, rng);
    const homomorphism g = random_central_inclusion(f.target, 2, 8, rng);
    CHECK(center_in_image(f));
    CHECK(iso_composition_residual(f, g) < 1e-9);
}

TEST_CASE("a commutative counterexample to unrestricted functoriality of l2_iso exists") {
    const auto c = find_iso_counterexample();
    REQUIRE(c.has_value());
    CHECK(c->residual > 1e-6);
    CHECK(c->f.source.is_trivial());
    for (int n : c->g.target.blocks()) CHECK(n == 1);
}

TEST_CASE("Φ is unitary and completes the square") {
    imat lambda(2, 1);
    lambda << 1, 1;
    for (const homomorphism& f : {factor_inclusion(2, 2), canonical_embedding(algebra({1, 2}), algebra({3}), lambda)}) {
        const phi_result r = phi_identification(f);
        CHECK(r.unitary_residual < 1e-8);
        CHECK(r.square_residual < 1e-8);
    }
}

TEST_CASE("B ≅ hom(L²A_A, L²B_A) round trips") {
    rng_t rng(6);
    const homomorphism f = factor_inclusion(2, 2);
    const b_hom_iso iso = b_to_hom(f);
    CHECK(iso.hom_dim == f.target.dim());
    const element b = element::random(f.target, rng);
    CHECK((iso.inverse(iso(b)) - b).norm() < 1e-9);
}

TEST_CASE("fusion twist of the identity homomorphism is the unit") {
    const algebra A({1, 2});
    const element c = fusion_twist(vnalg::algebra::identity_hom(A));
    CHECK((c - element::unit(A)).norm() < 1e-9);
}

TEST_CASE("fuse_functor: composition law and α = id") {
    rng_t rng(10);
    const algebra A1({1, 2}), X({2}), Y({1});
    const homomorphism a = vnalg::algebra::random_inclusion(A1, 2, 3, rng);
    const homomorphism a2 = vnalg::algebra::random_inclusion(a.target, 2, 4, rng);
    const bm::bimodule H1 = bm::random_bimodule(X, A1, 1, rng), H2 = bm::random_bimodule(X, a.target, 1, rng),
                       H3 = bm::random_bimodule(X, a2.target, 1, rng);
    const bm::bimodule K1 = bm::random_bimodule(A1, Y, 1, rng), K2 = bm::random_bimodule(a.target, Y, 1, rng),
                       K3 = bm::random_bimodule(a2.target, Y, 1, rng);
    const auto h = random_along(H1, H2, a, bm::side::right, rng), h2 = random_along(H2, H3, a2, bm::side::right, rng);
    const auto k = random_along(K1, K2, a, bm::side::left, rng), k2 = random_along(K2, K3, a2, bm::side::left, rng);
    CHECK(along_residual(h, a, bm::side::right) < 1e-10);
    CHECK(along_residual(k, a, bm::side::left) < 1e-10);
    const auto F1 = fuse_functor(h, a, k), F2 = fuse_functor(h2, a2, k2);
    const auto F12 = fuse_functor(h2 * h, vnalg::algebra::compose_hom(a, a2), k2 * k);
    CHECK(numerics::rel_diff(F2.map.matrix() * F1.map.matrix(), F12.map.matrix()) < 1e-8);
    CHECK(F1.balance_residual < 1e-8);

    const auto hid = bm::random_bilinear(H1, H1, rng), kid = bm::random_bilinear(K1, K1, rng);
    const auto Fid = fuse_functor(hid, vnalg::algebra::identity_hom(A1), kid);
    CHECK(numerics::rel_diff(Fid.map.matrix(), bm::fuse_maps(hid, kid).matrix()) < 1e-9);
}
