// functor.cpp — L²(f), l2_iso, Φ, h ⊠_α k and B ≅ hom(L²A_A, L²B_A)

#include "vnalg/functor.hpp"

#include "vnalg/l2.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace vnalg::functor {

using numerics::identity;

namespace {

// Blockwise transpose.
element transpose_blocks(element x) {
    for (auto& b : x.blocks) b = b.transpose().eval();
    return x;
}

// Rank-one projections e_a, (e_a + e_b)/√2, (e_a + i e_b)/√2 in every block: they span A and p = √p.
std::vector<element> projection_family(const algebra& A) {
    std::vector<element> out;
    for (int i = 0; i < A.num_blocks(); ++i) {
        const int n = A.block(i);
        auto push = [&](const cvec& v) {
            element p = element::zero(A);
            p.blocks[i] = v * v.adjoint();
            out.push_back(p);
        };
        for (int a = 0; a < n; ++a) {
            push(cvec::Unit(n, a));
            for (int b = a + 1; b < n; ++b) {
                push((cvec::Unit(n, a) + cvec::Unit(n, b)) / std::sqrt(2.0));
                push((cvec::Unit(n, a) + cplx(0, 1) * cvec::Unit(n, b)) / std::sqrt(2.0));
            }
        }
    }
    return out;
}

cvec sqrt_pullback(const functional& phi, const index::cond_exp& E) {
    return l2::sqrt_state(pullback(phi, E), 1e-12).vec();
}

element block_inverse(const element& x) {
    element out = x;
    for (auto& b : out.blocks) b = b.inverse().eval();
    return out;
}

} // namespace

functional pullback(const functional& phi, const index::cond_exp& E) {
    if (phi.parent != E.inclusion.source) throw error("AlgebraMismatch", "pullback: functional on the wrong algebra");
    // φ(E(b)) = Σ Tr(ρ E(b)) = vec(ρᵀ)·E vec(b)
    const cvec r = transpose_blocks(element{phi.parent, phi.densities}).vec();
    element s = transpose_blocks(element::from_vec(E.inclusion.target, E.map.transpose() * r));
    for (auto& b : s.blocks) b = 0.5 * (b + b.adjoint());
    return functional{s.parent, s.blocks};
}

l2_map make_l2_map(const algebra& A, const algebra& B, const cmat& m) {
    if (m.rows() != B.dim() || m.cols() != A.dim()) throw error("DimensionMismatch", "l2_map: matrix shape");
    l2_map out{A, B, m, {}, {}, 0.0};
    for (int i = 0; i < A.num_blocks(); ++i) {
        const int n2 = A.block(i) * A.block(i);
        Eigen::JacobiSVD<cmat> svd(m.middleCols(A.offset(i), n2));
        const rvec s = svd.singularValues();
        const double mean = s.mean();
        out.scale.push_back(mean);
        out.defect.push_back((s.array() - mean).abs().maxCoeff());
    }
    return out;
}

double sqrt_state_residual(const l2_map& L, const homomorphism& f, const functional& phi) {
    const auto E = index::unscaled_expectation(f);
    return (L.matrix * l2::sqrt_state(phi, 1e-12).vec() - sqrt_pullback(phi, E)).norm();
}

l2_map l2_of_hom(const homomorphism& f, double tol) {
    const algebra& A = f.source;
    const algebra& B = f.target;
    const auto E = index::unscaled_expectation(f);
    const auto family = projection_family(A);
    cmat X(A.dim(), family.size()), Y(B.dim(), family.size());
    for (std::size_t c = 0; c < family.size(); ++c) {
        X.col(c) = family[c].vec();
        Y.col(c) = sqrt_pullback(functional::from_density(family[c]), E);
    }
    // M X = Y  ⇔  X* M* = Y*
    const cmat Mstar = X.adjoint().completeOrthogonalDecomposition().solve(Y.adjoint());
    l2_map out = make_l2_map(A, B, Mstar.adjoint());
    double res = (out.matrix * X - Y).norm();
    rng_t rng(1);
    for (int t = 0; t < 8; ++t) {
        const functional phi = functional::random_positive(A, rng, t % 2 == 1);
        res = std::max(res, (out.matrix * l2::sqrt_state(phi, 1e-12).vec() - sqrt_pullback(phi, E)).norm() /
                                std::max(1.0, phi.l1_norm()));
    }
    out.extension_residual = res;
    if (res > tol)
        throw error("InconsistentExtension", "l2_of_hom: linear extension residual " + std::to_string(res));
    return out;
}

l2_map l2_iso(const homomorphism& f) {
    if (!f.injective()) throw error("NotInjective", "l2_iso: homomorphism has a kernel");
    const l2_map L = l2_of_hom(f);
    l2_map out = make_l2_map(f.source, f.target, numerics::polar_decompose(L.matrix, 1e-10).isometry);
    out.extension_residual = L.extension_residual;
    return out;
}

bool center_in_image(const homomorphism& f) {
    for (int i = 0; i < f.mult.rows(); ++i)
        if ((f.mult.row(i).array() > 0).count() != 1) return false;
    return true;
}

homomorphism random_central_inclusion(const algebra& A, int max_blocks, int max_size, rng_t& rng) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const int s = numerics::random_int(1, std::min(max_blocks, A.num_blocks()), rng);
        imat lambda = imat::Zero(A.num_blocks(), s);
        for (int i = 0; i < lambda.rows(); ++i)
            lambda(i, numerics::random_int(0, s - 1, rng)) = numerics::random_int(1, 2, rng);
        std::vector<int> sizes(s, 0);
        bool ok = true;
        for (int j = 0; j < s && ok; ++j) {
            for (int i = 0; i < lambda.rows(); ++i) sizes[j] += lambda(i, j) * A.block(i);
            ok = sizes[j] > 0 && sizes[j] <= max_size;
        }
        if (ok) return vnalg::algebra::random_conjugate(vnalg::algebra::canonical_embedding(A, algebra(sizes), lambda), rng);
    }
    throw error("DimensionMismatch", "random_central_inclusion: no inclusion of " + A.str() + " fits the size bound");
}

// ------------------------------------------------------------------ Φ

phi_result phi_identification(const homomorphism& iota) {
    const auto H = index::l2_bimodule_of(iota);
    return phi_identification(iota, duality::canonical_duality(H.H));
}

phi_result phi_identification(const homomorphism& iota, const duality::duality_data& D) {
    if (!D.normalized) throw error("NotNormalized", "phi_identification: duality data not normalized");
    const algebra& A = iota.source;
    const algebra& B = iota.target;
    phi_result out;
    out.H = index::l2_bimodule_of(iota);
    if (D.H != out.H.H) throw error("DimensionMismatch", "phi_identification: duality is not for _A L²B _B");
    out.D = D;
    out.K = bm::ingest(B, A,
        [&](int i, int a, int b) { return l2::left_operator(element::matrix_unit(B, i, a, b)); },
        [&](int j, int c, int d) { return l2::right_operator(iota(element::matrix_unit(A, j, c, d))); });
    const cmat L = l2_of_hom(iota).matrix;
    const bm::bimodule LA = bm::l2_bimodule(A), LB = bm::l2_bimodule(B);
    const bm::bimodule_map g = bm::from_full(LA, out.H.H, out.H.U.adjoint() * L, bm::linearity::left);
    const bm::bimodule_map chain = bm::fused_map(bm::identity_map(D.Hbar), g);
    // Φ' : H̄ → L²B (left B-linear), Φ = U_K* Φ'
    const cmat phi_l2 = D.S.adjoint().matrix() * chain.matrix() * duality::inverse_unitor_right(D.Hbar).matrix();
    out.phi = bm::to_bilinear(bm::from_full(D.Hbar, out.K.H, out.K.U.adjoint() * phi_l2, bm::linearity::plain));
    out.unitary_residual = numerics::unitary_residual(out.phi.matrix());
    const bm::bimodule_map phil = bm::from_full(D.Hbar, LB, phi_l2, bm::linearity::left);
    const cmat lhs = bm::right_unitor(out.H.H).matrix() * bm::fused_map(bm::identity_map(out.H.H), phil).matrix() *
                     D.R.matrix();
    const cmat rhs = out.H.U.adjoint() * L;
    out.square_residual = numerics::rel_diff(lhs, rhs);
    return out;
}

// ------------------------------------------------------------ h ⊠_α k

element fusion_twist(const homomorphism& alpha) {
    const algebra& A1 = alpha.source;
    const algebra& A2 = alpha.target;
    const phi_result P = phi_identification(alpha);
    const cvec one = element::unit(A2).vec();
    const cvec w = bm::product(P.K.H, P.H.H, P.K.U.adjoint() * one, P.H.U.adjoint() * one);
    const cvec v = bm::apply_fused(P.phi.adjoint(), bm::identity_map(P.H.H), w);
    const element z = element::from_vec(A2, P.D.S.adjoint().apply(v));
    const element eta = element::from_vec(A2, l2_of_hom(alpha).matrix * element::unit(A1).vec());
    return z * eta * z;
}

double along_residual(const bm::bimodule_map& m, const homomorphism& alpha, bm::side s) {
    const cmat M = m.matrix();
    double r = 0;
    for (const auto& a : vnalg::algebra::generators(alpha.source)) {
        const element b = alpha(a);
        const cmat d = s == bm::side::right
            ? cmat(M * bm::right_action(m.source, a) - bm::right_action(m.target, b) * M)
            : cmat(M * bm::left_action(m.source, a) - bm::left_action(m.target, b) * M);
        r = std::max(r, d.norm());
    }
    return r;
}

functor_map fuse_functor(const bm::bimodule_map& h, const homomorphism& alpha, const bm::bimodule_map& k, double tol) {
    const bm::bimodule &H1 = h.source, &H2 = h.target, &K1 = k.source, &K2 = k.target;
    if (H1.right != alpha.source || K1.left != alpha.source || H2.right != alpha.target || K2.left != alpha.target)
        throw error("AlgebraMismatch", "fuse_functor: middle algebras do not match the homomorphism");
    if (along_residual(h, alpha, bm::side::right) > tol)
        throw error("LinearityViolation", "fuse_functor: h is not right-linear along the homomorphism");
    if (along_residual(k, alpha, bm::side::left) > tol)
        throw error("LinearityViolation", "fuse_functor: k is not left-linear along the homomorphism");
    functor_map out;
    out.c = fusion_twist(alpha);
    const bm::bimodule F1 = bm::fuse_object(H1, K1), F2 = bm::fuse_object(H2, K2);
    const cmat hm = bm::right_action(H2, out.c) * h.matrix();
    const cmat km = k.matrix();
    cmat M = cmat::Zero(F2.dim(), F1.dim());
    for (int i = 0; i < H1.left.num_blocks(); ++i)
        for (int l = 0; l < K1.right.num_blocks(); ++l)
            for (int j = 0; j < H1.right.num_blocks(); ++j)
                for (int al = 0; al < H1.mult(i, j); ++al)
                    for (int be = 0; be < K1.mult(j, l); ++be) {
                        const int slot = bm::fused_slot(H1, K1, i, l, j, al, be);
                        for (int a = 0; a < H1.left.block(i); ++a)
                            for (int d = 0; d < K1.right.block(l); ++d) {
                                const int col = F1.index(i, l, slot, a, d);
                                M.col(col) = bm::product(H2, K2, hm.col(H1.index(i, j, al, a, 0)),
                                                         km.col(K1.index(j, l, be, 0, d)));
                                for (int b = 1; b < H1.right.block(j); ++b) {
                                    const cvec alt = bm::product(H2, K2, hm.col(H1.index(i, j, al, a, b)),
                                                                 km.col(K1.index(j, l, be, b, d)));
                                    out.balance_residual = std::max(out.balance_residual, (alt - M.col(col)).norm());
                                }
                            }
                    }
    out.map = bm::bimodule_map{F1, F2, bm::linearity::plain, {}, M};
    return out;
}

namespace {

// Random map S → T commuting with the right actions (both canonical, same right algebra).
cmat random_right_linear(const bm::bimodule& S, const bm::bimodule& T, rng_t& rng) {
    cmat M = cmat::Zero(T.dim(), S.dim());
    for (int j = 0; j < S.right.num_blocks(); ++j) {
        const int k = S.right.block(j);
        std::vector<int> rows, cols;  // (i, α, a) starts with c = 0
        for (int i = 0; i < T.left.num_blocks(); ++i)
            for (int al = 0; al < T.mult(i, j); ++al)
                for (int a = 0; a < T.left.block(i); ++a) rows.push_back(T.index(i, j, al, a, 0));
        for (int i = 0; i < S.left.num_blocks(); ++i)
            for (int al = 0; al < S.mult(i, j); ++al)
                for (int a = 0; a < S.left.block(i); ++a) cols.push_back(S.index(i, j, al, a, 0));
        const cmat G = numerics::random_matrix(rows.size(), cols.size(), rng);
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < cols.size(); ++c)
                for (int e = 0; e < k; ++e) M(rows[r] + e, cols[c] + e) = G(r, c);
    }
    return M;
}

// Same for left actions: identity on the row index a, arbitrary across (l, β, d).
cmat random_left_linear(const bm::bimodule& S, const bm::bimodule& T, rng_t& rng) {
    cmat M = cmat::Zero(T.dim(), S.dim());
    for (int i = 0; i < S.left.num_blocks(); ++i) {
        const int n = S.left.block(i);
        std::vector<std::pair<int, int>> rows, cols;  // (first index with a = 0, column count)
        for (int l = 0; l < T.right.num_blocks(); ++l)
            for (int be = 0; be < T.mult(i, l); ++be)
                for (int d = 0; d < T.right.block(l); ++d) rows.push_back({T.index(i, l, be, 0, d), T.right.block(l)});
        for (int l = 0; l < S.right.num_blocks(); ++l)
            for (int be = 0; be < S.mult(i, l); ++be)
                for (int d = 0; d < S.right.block(l); ++d) cols.push_back({S.index(i, l, be, 0, d), S.right.block(l)});
        const cmat G = numerics::random_matrix(rows.size(), cols.size(), rng);
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < cols.size(); ++c)
                for (int a = 0; a < n; ++a)
                    M(rows[r].first + a * rows[r].second, cols[c].first + a * cols[c].second) = G(r, c);
    }
    return M;
}

} // namespace

bm::bimodule_map random_along(const bm::bimodule& H1, const bm::bimodule& H2, const homomorphism& alpha,
                              bm::side s, rng_t& rng) {
    if (s == bm::side::right) {
        if (H1.right != alpha.source || H2.right != alpha.target)
            throw error("AlgebraMismatch", "random_along: right algebras do not match the homomorphism");
        const auto R = bm::ingest(H2.left, alpha.source,
            [&](int i, int a, int b) { return bm::left_action(H2, element::matrix_unit(H2.left, i, a, b)); },
            [&](int j, int c, int d) { return bm::right_action(H2, alpha(element::matrix_unit(alpha.source, j, c, d))); });
        return bm::bimodule_map{H1, H2, bm::linearity::plain, {}, R.U * random_right_linear(H1, R.H, rng)};
    }
    if (H1.left != alpha.source || H2.left != alpha.target)
        throw error("AlgebraMismatch", "random_along: left algebras do not match the homomorphism");
    const auto R = bm::ingest(alpha.source, H2.right,
        [&](int i, int a, int b) { return bm::left_action(H2, alpha(element::matrix_unit(alpha.source, i, a, b))); },
        [&](int j, int c, int d) { return bm::right_action(H2, element::matrix_unit(H2.right, j, c, d)); });
    return bm::bimodule_map{H1, H2, bm::linearity::plain, {}, R.U * random_left_linear(H1, R.H, rng)};
}

// ------------------------------------------------ B ≅ hom(L²A_A, L²B_A)

cmat b_hom_iso::operator()(const element& b) const {
    if (b.parent != iota.target) throw error("AlgebraMismatch", "b_to_hom: element of the wrong algebra");
    return l2::left_operator(b) * L.matrix;
}

element b_hom_iso::inverse(const cmat& T) const {
    return element::from_vec(iota.target, T * element::unit(iota.source).vec()) * eta_inv;
}

b_hom_iso b_to_hom(const homomorphism& iota) {
    const algebra& A = iota.source;
    const algebra& B = iota.target;
    b_hom_iso out{iota, l2_of_hom(iota), {}, 0};
    out.eta_inv = block_inverse(element::from_vec(B, out.L.matrix * element::unit(A).vec()));
    // T R_A(a) = R_B(ι(a)) T on generators, T row-major vectorised
    const auto gens = vnalg::algebra::generators(A);
    const int nA = A.dim(), nB = B.dim();
    cmat C(gens.size() * nA * nB, nA * nB);
    int row = 0;
    for (const auto& a : gens) {
        const cmat RA = l2::right_operator(a), RB = l2::right_operator(iota(a));
        C.middleRows(row, nA * nB) = numerics::kron(identity(nB), RA.transpose()) - numerics::kron(RB, identity(nA));
        row += nA * nB;
    }
    // absolute threshold: C may vanish up to rounding
    const rvec sv = Eigen::JacobiSVD<cmat>(C).singularValues();
    out.hom_dim = nA * nB - static_cast<int>((sv.array() > 1e-9 * std::max(1.0, sv.size() ? sv(0) : 0.0)).count());
    return out;
}

// ---------------------------------------------- l2_iso counterexample

double iso_composition_residual(const homomorphism& f, const homomorphism& g) {
    const cmat direct = l2_iso(vnalg::algebra::compose_hom(f, g)).matrix;
    const cmat composite = l2_iso(g).matrix * l2_iso(f).matrix;
    return (direct - composite).norm();
}

std::optional<iso_counterexample> find_iso_counterexample(int max_size, double tol) {
    const algebra C = vnalg::algebra::trivial();
    // ℂ ⊂ ℂ^a ⊂ ⊕ M_{k_j}, targets ordered by number of blocks and total size
    // commutative targets first
    for (int commutative = 1; commutative >= 0; --commutative)
    for (int a = 2; a <= 3; ++a) {
        const algebra Ba(std::vector<int>(a, 1));
        const homomorphism f = vnalg::algebra::canonical_embedding(C, Ba, imat::Ones(1, a));
        for (int s = 1; s <= 3; ++s) {
            const int cells = a * s;
            std::vector<int> lam(cells, 0);
            for (;;) {
                int carry = 0;
                while (carry < cells && ++lam[carry] > max_size) lam[carry++] = 0;
                if (carry == cells) break;
                imat L(a, s);
                for (int c = 0; c < cells; ++c) L(c / s, c % s) = lam[c];
                std::vector<int> sizes(s, 0);
                bool ok = true;
                for (int i = 0; i < a; ++i) ok = ok && L.row(i).sum() > 0;
                for (int j = 0; j < s && ok; ++j) {
                    sizes[j] = L.col(j).sum();
                    ok = sizes[j] > 0 && sizes[j] <= max_size && (!commutative || sizes[j] == 1);
                }
                if (!ok) continue;
                const homomorphism g = vnalg::algebra::canonical_embedding(Ba, algebra(sizes), L);
                const double r = iso_composition_residual(f, g);
                if (r > tol) return iso_counterexample{f, g, r};
            }
        }
    }
    return std::nullopt;
}

} // namespace vnalg::functor
