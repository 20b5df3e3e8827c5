// bimodule.cpp — canonical bimodules, fusion, ingestion and commutants

#include "vnalg/bimodule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vnalg::bimodule {

using numerics::identity;
using numerics::kron;
using rmat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using cmap = Eigen::Map<const rmat>;
using mmap = Eigen::Map<rmat>;

bimodule::bimodule(algebra l, algebra r, imat m) : left(std::move(l)), right(std::move(r)), mult(std::move(m)) {
    if (mult.rows() != left.num_blocks() || mult.cols() != right.num_blocks())
        throw error("DimensionMismatch", "bimodule: multiplicity matrix has wrong shape");
    if (mult.size() && mult.minCoeff() < 0) throw error("DimensionMismatch", "bimodule: negative multiplicity");
}

int bimodule::dim() const {
    int d = 0;
    for (int i = 0; i < left.num_blocks(); ++i)
        for (int j = 0; j < right.num_blocks(); ++j) d += mult(i, j) * block_dim(i, j);
    return d;
}

int bimodule::offset(int i, int j) const {
    int d = 0;
    for (int p = 0; p < left.num_blocks(); ++p)
        for (int q = 0; q < right.num_blocks(); ++q) {
            if (p == i && q == j) return d;
            d += mult(p, q) * block_dim(p, q);
        }
    return d;
}

std::string bimodule::str() const {
    std::ostringstream os;
    os << left.str() << "|" << right.str() << "|[";
    for (int i = 0; i < mult.rows(); ++i) {
        if (i) os << ";";
        for (int j = 0; j < mult.cols(); ++j) os << (j ? "," : "") << mult(i, j);
    }
    os << "]";
    return os.str();
}

bimodule l2_bimodule(const algebra& A) {
    return bimodule(A, A, imat::Identity(A.num_blocks(), A.num_blocks()));
}

bimodule conjugate(const bimodule& H) { return bimodule(H.right, H.left, H.mult.transpose()); }

bimodule direct_sum(const bimodule& H, const bimodule& K) {
    if (H.left != K.left || H.right != K.right) throw error("AlgebraMismatch", "direct_sum: algebras differ");
    return bimodule(H.left, H.right, H.mult + K.mult);
}

bimodule external_tensor(const bimodule& H, const bimodule& K) {
    const algebra L = vnalg::algebra::tensor(H.left, K.left), R = vnalg::algebra::tensor(H.right, K.right);
    imat m(L.num_blocks(), R.num_blocks());
    const int rK = K.left.num_blocks(), sK = K.right.num_blocks();
    for (int i = 0; i < H.mult.rows(); ++i)
        for (int i2 = 0; i2 < rK; ++i2)
            for (int j = 0; j < H.mult.cols(); ++j)
                for (int j2 = 0; j2 < sK; ++j2) m(i * rK + i2, j * sK + j2) = H.mult(i, j) * K.mult(i2, j2);
    return bimodule(L, R, m);
}

bimodule fuse_object(const bimodule& H, const bimodule& K) {
    if (H.right != K.left) throw error("AlgebraMismatch", "fusion: middle algebras differ (" + H.right.str() + " vs " + K.left.str() + ")");
    return bimodule(H.left, K.right, H.mult * K.mult);
}

bimodule random_bimodule(const algebra& A, const algebra& B, int max_mult, rng_t& rng, bool nonzero) {
    imat m(A.num_blocks(), B.num_blocks());
    do {
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) m(i, j) = numerics::random_int(0, max_mult, rng);
    } while (nonzero && m.sum() == 0);
    return bimodule(A, B, m);
}

cmat left_action(const bimodule& H, const element& a) {
    if (a.parent != H.left) throw error("AlgebraMismatch", "left_action: element of wrong algebra");
    std::vector<cmat> parts;
    for (int i = 0; i < H.left.num_blocks(); ++i)
        for (int j = 0; j < H.right.num_blocks(); ++j)
            if (H.mult(i, j) > 0)
                parts.push_back(kron(identity(H.mult(i, j)), kron(a.blocks[i], identity(H.right.block(j)))));
    return numerics::direct_sum(parts);
}

cmat right_action(const bimodule& H, const element& b) {
    if (b.parent != H.right) throw error("AlgebraMismatch", "right_action: element of wrong algebra");
    std::vector<cmat> parts;
    for (int i = 0; i < H.left.num_blocks(); ++i)
        for (int j = 0; j < H.right.num_blocks(); ++j)
            if (H.mult(i, j) > 0)
                parts.push_back(kron(identity(H.mult(i, j)), kron(identity(H.left.block(i)), b.blocks[j].transpose())));
    return numerics::direct_sum(parts);
}

cmat conjugation_permutation(const bimodule& H) {
    const bimodule Hb = conjugate(H);
    cmat P = cmat::Zero(Hb.dim(), H.dim());
    for (int i = 0; i < H.left.num_blocks(); ++i)
        for (int j = 0; j < H.right.num_blocks(); ++j)
            for (int al = 0; al < H.mult(i, j); ++al)
                for (int a = 0; a < H.left.block(i); ++a)
                    for (int c = 0; c < H.right.block(j); ++c) P(Hb.index(j, i, al, c, a), H.index(i, j, al, a, c)) = 1.0;
    return P;
}

cvec bar_vector(const bimodule& H, const cvec& v) { return conjugation_permutation(H) * v.conjugate(); }

cmat bar_operator(const bimodule& H, const cmat& x) {
    const cmat P = conjugation_permutation(H);
    return P * x.conjugate() * P.transpose();
}

int fused_slot(const bimodule& H, const bimodule& K, int i, int l, int j, int alpha, int beta) {
    int s = 0;
    for (int q = 0; q < j; ++q) s += H.mult(i, q) * K.mult(q, l);
    return s + alpha * K.mult(j, l) + beta;
}

// ------------------------------------------------------------------- maps

std::string to_string(linearity l) {
    switch (l) {
        case linearity::bilinear: return "bilinear";
        case linearity::left: return "left";
        case linearity::right: return "right";
        case linearity::plain: return "plain";
    }
    return "plain";
}

bool is_left_linear(linearity l) { return l == linearity::bilinear || l == linearity::left; }
bool is_right_linear(linearity l) { return l == linearity::bilinear || l == linearity::right; }

namespace {

linearity meet(linearity a, linearity b) {
    const bool L = is_left_linear(a) && is_left_linear(b);
    const bool R = is_right_linear(a) && is_right_linear(b);
    if (L && R) return linearity::bilinear;
    if (L) return linearity::left;
    if (R) return linearity::right;
    return linearity::plain;
}

int block_id(const bimodule& H, int i, int j) { return i * H.right.num_blocks() + j; }

} // namespace

cmat bimodule_map::matrix() const {
    if (!bilinear()) return full;
    cmat M = cmat::Zero(target.dim(), source.dim());
    for (int i = 0; i < source.left.num_blocks(); ++i)
        for (int j = 0; j < source.right.num_blocks(); ++j) {
            const cmat& f = blocks[block_id(source, i, j)];
            if (f.size() == 0) continue;
            const int bd = source.block_dim(i, j);
            M.block(target.offset(i, j), source.offset(i, j), f.rows() * bd, f.cols() * bd) = kron(f, identity(bd));
        }
    return M;
}

bimodule_map bimodule_map::adjoint() const {
    bimodule_map out{target, source, lin, {}, {}};
    if (bilinear())
        for (const auto& b : blocks) out.blocks.push_back(b.adjoint());
    else
        out.full = full.adjoint();
    return out;
}

bimodule_map bimodule_map::operator*(const bimodule_map& o) const {
    if (o.target != source) throw error("DimensionMismatch", "composition: target/source mismatch (" + o.target.str() + " vs " + source.str() + ")");
    bimodule_map out{o.source, target, meet(lin, o.lin), {}, {}};
    if (bilinear() && o.bilinear()) {
        for (std::size_t k = 0; k < blocks.size(); ++k) out.blocks.push_back(blocks[k] * o.blocks[k]);
    } else {
        out.full = matrix() * o.matrix();
    }
    return out;
}

bimodule_map bimodule_map::operator+(const bimodule_map& o) const {
    if (o.source != source || o.target != target) throw error("DimensionMismatch", "sum of maps with different boundaries");
    bimodule_map out{source, target, meet(lin, o.lin), {}, {}};
    if (bilinear() && o.bilinear()) {
        for (std::size_t k = 0; k < blocks.size(); ++k) out.blocks.push_back(blocks[k] + o.blocks[k]);
    } else {
        out.full = matrix() + o.matrix();
    }
    return out;
}

bimodule_map bimodule_map::operator*(cplx s) const {
    bimodule_map out = *this;
    for (auto& b : out.blocks) b *= s;
    if (!bilinear()) out.full *= s;
    return out;
}

cvec bimodule_map::apply(const cvec& v) const {
    if (!bilinear()) return full * v;
    cvec out = cvec::Zero(target.dim());
    for (int i = 0; i < source.left.num_blocks(); ++i)
        for (int j = 0; j < source.right.num_blocks(); ++j) {
            const cmat& f = blocks[block_id(source, i, j)];
            if (f.size() == 0) continue;
            const int bd = source.block_dim(i, j);
            // X ↦ f X viewing the block as (mult × bd)
            cmap X(v.data() + source.offset(i, j), f.cols(), bd);
            rmat Y = f * X;
            for (Eigen::Index r = 0; r < Y.rows(); ++r)
                for (Eigen::Index c = 0; c < bd; ++c) out(target.offset(i, j) + r * bd + c) = Y(r, c);
        }
    return out;
}

bimodule_map identity_map(const bimodule& H) {
    bimodule_map f{H, H, linearity::bilinear, {}, {}};
    for (int i = 0; i < H.left.num_blocks(); ++i)
        for (int j = 0; j < H.right.num_blocks(); ++j) f.blocks.push_back(identity(H.mult(i, j)));
    return f;
}

bimodule_map zero_map(const bimodule& H, const bimodule& K) {
    if (H.left != K.left || H.right != K.right) throw error("AlgebraMismatch", "zero_map: algebras differ");
    bimodule_map f{H, K, linearity::bilinear, {}, {}};
    for (int i = 0; i < H.left.num_blocks(); ++i)
        for (int j = 0; j < H.right.num_blocks(); ++j) f.blocks.push_back(cmat::Zero(K.mult(i, j), H.mult(i, j)));
    return f;
}

bimodule_map from_blocks(const bimodule& H, const bimodule& K, std::vector<cmat> blocks) {
    if (H.left != K.left || H.right != K.right) throw error("AlgebraMismatch", "from_blocks: algebras differ");
    if (static_cast<int>(blocks.size()) != H.left.num_blocks() * H.right.num_blocks())
        throw error("DimensionMismatch", "from_blocks: wrong number of blocks");
    for (int i = 0; i < H.left.num_blocks(); ++i)
        for (int j = 0; j < H.right.num_blocks(); ++j) {
            const cmat& b = blocks[block_id(H, i, j)];
            if (b.rows() != K.mult(i, j) || b.cols() != H.mult(i, j))
                throw error("DimensionMismatch", "from_blocks: block shape mismatch");
        }
    return bimodule_map{H, K, linearity::bilinear, std::move(blocks), {}};
}

double left_linearity_residual(const bimodule_map& f) {
    const cmat M = f.matrix();
    double r = 0;
    for (const auto& g : vnalg::algebra::generators(f.source.left))
        r = std::max(r, (M * left_action(f.source, g) - left_action(f.target, g) * M).norm());
    return r / (1.0 + M.norm());
}

double right_linearity_residual(const bimodule_map& f) {
    const cmat M = f.matrix();
    double r = 0;
    for (const auto& g : vnalg::algebra::generators(f.source.right))
        r = std::max(r, (M * right_action(f.source, g) - right_action(f.target, g) * M).norm());
    return r / (1.0 + M.norm());
}

bimodule_map from_full(const bimodule& H, const bimodule& K, const cmat& m, linearity lin, double tol) {
    if (m.rows() != K.dim() || m.cols() != H.dim()) throw error("DimensionMismatch", "from_full: matrix shape mismatch");
    bimodule_map f{H, K, lin == linearity::bilinear ? linearity::plain : lin, {}, m};
    if (is_left_linear(lin)) {
        if (H.left != K.left) throw error("AlgebraMismatch", "from_full: left algebras differ");
        if (left_linearity_residual(f) > tol) throw error("LinearityViolation", "map does not commute with the left action");
    }
    if (is_right_linear(lin)) {
        if (H.right != K.right) throw error("AlgebraMismatch", "from_full: right algebras differ");
        if (right_linearity_residual(f) > tol) throw error("LinearityViolation", "map does not commute with the right action");
    }
    if (lin == linearity::bilinear) {
        f.lin = linearity::bilinear;
        f.full = cmat();
        for (int i = 0; i < H.left.num_blocks(); ++i)
            for (int j = 0; j < H.right.num_blocks(); ++j) {
                cmat b(K.mult(i, j), H.mult(i, j));
                for (int p = 0; p < K.mult(i, j); ++p)
                    for (int q = 0; q < H.mult(i, j); ++q) b(p, q) = m(K.index(i, j, p, 0, 0), H.index(i, j, q, 0, 0));
                f.blocks.push_back(b);
            }
        if (numerics::rel_diff(f.matrix(), m) > tol) throw error("LinearityViolation", "bilinear reconstruction mismatch");
    }
    return f;
}

bimodule_map to_bilinear(const bimodule_map& f, double tol) {
    if (f.bilinear()) return f;
    return from_full(f.source, f.target, f.full, linearity::bilinear, tol);
}

bimodule_map random_bilinear(const bimodule& H, const bimodule& K, rng_t& rng) {
    std::vector<cmat> b;
    for (int i = 0; i < H.left.num_blocks(); ++i)
        for (int j = 0; j < H.right.num_blocks(); ++j) b.push_back(numerics::random_matrix(K.mult(i, j), H.mult(i, j), rng));
    return from_blocks(H, K, b);
}

bimodule_map random_invertible_endo(const bimodule& H, rng_t& rng) {
    std::vector<cmat> b;
    for (int i = 0; i < H.left.num_blocks(); ++i)
        for (int j = 0; j < H.right.num_blocks(); ++j) {
            const int m = H.mult(i, j);
            b.push_back(identity(m) + 0.4 * numerics::random_matrix(m, m, rng) / std::sqrt(std::max(m, 1)));
        }
    return from_blocks(H, H, b);
}

std::vector<bimodule_map> hom_space(const bimodule& H, const bimodule& K) {
    if (H.left != K.left || H.right != K.right) throw error("AlgebraMismatch", "hom_space: algebras differ");
    std::vector<bimodule_map> out;
    const bimodule_map z = zero_map(H, K);
    for (int i = 0; i < H.left.num_blocks(); ++i)
        for (int j = 0; j < H.right.num_blocks(); ++j)
            for (int p = 0; p < K.mult(i, j); ++p)
                for (int q = 0; q < H.mult(i, j); ++q) {
                    bimodule_map f = z;
                    f.blocks[block_id(H, i, j)](p, q) = 1.0 / std::sqrt(double(H.block_dim(i, j)));
                    out.push_back(f);
                }
    return out;
}

// ----------------------------------------------------------------- fusion

cvec product(const bimodule& H, const bimodule& K, const cvec& xi, const cvec& kappa) {
    const bimodule F = fuse_object(H, K);
    if (xi.size() != H.dim() || kappa.size() != K.dim()) throw error("DimensionMismatch", "product: vector sizes");
    cvec out = cvec::Zero(F.dim());
    for (int i = 0; i < H.left.num_blocks(); ++i)
        for (int l = 0; l < K.right.num_blocks(); ++l) {
            const int ni = H.left.block(i), cl = K.right.block(l);
            for (int j = 0; j < H.right.num_blocks(); ++j) {
                const int kj = H.right.block(j);
                for (int al = 0; al < H.mult(i, j); ++al) {
                    cmap X(xi.data() + H.index(i, j, al, 0, 0), ni, kj);
                    if (X.squaredNorm() == 0) continue;
                    for (int be = 0; be < K.mult(j, l); ++be) {
                        cmap Y(kappa.data() + K.index(j, l, be, 0, 0), kj, cl);
                        mmap Z(out.data() + F.index(i, l, fused_slot(H, K, i, l, j, al, be), 0, 0), ni, cl);
                        Z.noalias() += X * Y;
                    }
                }
            }
        }
    return out;
}

element right_pairing(const bimodule& K, const cvec& k1, const cvec& k2) {
    element b = element::zero(K.left);
    for (int j = 0; j < K.left.num_blocks(); ++j)
        for (int l = 0; l < K.right.num_blocks(); ++l)
            for (int be = 0; be < K.mult(j, l); ++be) {
                cmap Y1(k1.data() + K.index(j, l, be, 0, 0), K.left.block(j), K.right.block(l));
                cmap Y2(k2.data() + K.index(j, l, be, 0, 0), K.left.block(j), K.right.block(l));
                b.blocks[j] += Y1 * Y2.adjoint();
            }
    return b;
}

fusion_result fuse(const bimodule& H, const bimodule& K, double tol) {
    fusion_result res;
    res.object = fuse_object(H, K);
    const bimodule& F = res.object;
    const int r = H.left.num_blocks(), s = H.right.num_blocks(), t = K.right.num_blocks();
    res.from_gram = cmat::Zero(F.dim(), F.dim());
    int col = 0;
    double unit_res = 0;
    for (int i = 0; i < r; ++i)
        for (int l = 0; l < t; ++l) {
            const int ni = H.left.block(i), cl = K.right.block(l);
            const int row0 = F.offset(i, l), rows = F.mult(i, l) * ni * cl;
            const int col_start = col;
            for (int j = 0; j < s; ++j) {
                const int mH = H.mult(i, j), mK = K.mult(j, l), kj = H.right.block(j);
                if (mH == 0 || mK == 0) continue;
                // generators e^α_{ab} ⊗ e^β_{bd}; pairs with mismatched inner index are null
                struct gen { int al, be, a, b, d; };
                std::vector<gen> gens;
                for (int al = 0; al < mH; ++al)
                    for (int be = 0; be < mK; ++be)
                        for (int a = 0; a < ni; ++a)
                            for (int b = 0; b < kj; ++b)
                                for (int d = 0; d < cl; ++d) gens.push_back({al, be, a, b, d});
                const int G = static_cast<int>(gens.size());
                res.generators += G;
                // local matrices of ξ (per α) and κ (per β)
                auto X = [&](const gen& g, int al) {
                    rmat m = rmat::Zero(ni, kj);
                    if (al == g.al) m(g.a, g.b) = 1.0;
                    return m;
                };
                auto Y = [&](const gen& g, int be) {
                    rmat m = rmat::Zero(kj, cl);
                    if (be == g.be) m(g.b, g.d) = 1.0;
                    return m;
                };
                cmat gram(G, G);
                for (int p = 0; p < G; ++p)
                    for (int q = 0; q < G; ++q) {
                        // b = κ_p κ_q* ∈ B_j, entry ⟨ξ_p b, ξ_q⟩
                        rmat b = rmat::Zero(kj, kj);
                        for (int be = 0; be < mK; ++be) b += Y(gens[p], be) * Y(gens[q], be).adjoint();
                        cplx v = 0;
                        for (int al = 0; al < mH; ++al) v += ((X(gens[p], al) * b).adjoint() * X(gens[q], al)).trace();
                        gram(p, q) = v;
                    }
                // product map T on generators, restricted to block (i,l)
                cmat T = cmat::Zero(rows, G);
                for (int p = 0; p < G; ++p) {
                    const auto& g = gens[p];
                    const int slot = fused_slot(H, K, i, l, j, g.al, g.be);
                    T(slot * ni * cl + g.a * cl + g.d, p) = 1.0;
                }
                res.gram_residual = std::max(res.gram_residual, (T.adjoint() * T - gram).norm());
                Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (gram + gram.adjoint()));
                const rvec& ev = es.eigenvalues();
                const double lmax = ev.maxCoeff();
                for (int k = G - 1; k >= 0; --k) {
                    if (ev(k) <= tol * lmax) continue;
                    if (col >= F.dim()) throw error("NumericalFailure", "fuse: Gram rank exceeds canonical dimension");
                    res.from_gram.block(row0, col, rows, 1) = T * es.eigenvectors().col(k) / std::sqrt(ev(k));
                    ++col;
                }
            }
            const cmat sub = res.from_gram.block(row0, col_start, rows, col - col_start);
            if (sub.cols() != rows) unit_res = std::numeric_limits<double>::infinity();
            else unit_res = std::max(unit_res, numerics::unitary_residual(sub));
        }
    res.gram_dim = col;
    if (col != F.dim()) unit_res = std::numeric_limits<double>::infinity();
    res.from_gram.conservativeResize(F.dim(), col);
    res.unitarity_residual = unit_res;
    return res;
}

bimodule_map fuse_maps(const bimodule_map& f, const bimodule_map& g) {
    if (!f.bilinear() || !g.bilinear()) throw error("LinearityMismatch", "fuse_maps needs bilinear maps");
    if (f.source.right != g.source.left) throw error("AlgebraMismatch", "fuse_maps: middle algebras differ");
    const bimodule S = fuse_object(f.source, g.source), T = fuse_object(f.target, g.target);
    std::vector<cmat> blocks;
    for (int i = 0; i < S.left.num_blocks(); ++i)
        for (int l = 0; l < S.right.num_blocks(); ++l) {
            std::vector<cmat> parts;
            for (int j = 0; j < f.source.right.num_blocks(); ++j) {
                const cmat& a = f.blocks[block_id(f.source, i, j)];
                const cmat& b = g.blocks[block_id(g.source, j, l)];
                parts.push_back(kron(a, b));
            }
            blocks.push_back(numerics::direct_sum(parts));
        }
    return from_blocks(S, T, blocks);
}

namespace {

void check_fusable(const bimodule_map& f, const bimodule_map& g) {
    if (f.source.right != g.source.left || f.target.right != g.target.left)
        throw error("AlgebraMismatch", "fused map: middle algebras differ");
    const bool trivial = f.source.right.is_trivial();
    if (!trivial && !is_right_linear(f.lin))
        throw error("LinearityViolation", "fused map: left factor is not right-linear over a nontrivial algebra");
    if (!trivial && !is_left_linear(g.lin))
        throw error("LinearityViolation", "fused map: right factor is not left-linear over a nontrivial algebra");
}

linearity fused_linearity(const bimodule_map& f, const bimodule_map& g) {
    const bool L = is_left_linear(f.lin), R = is_right_linear(g.lin);
    if (L && R) return linearity::bilinear;
    if (L) return linearity::left;
    if (R) return linearity::right;
    return linearity::plain;
}

} // namespace

cvec apply_fused(const bimodule_map& f, const bimodule_map& g, const cvec& v) {
    check_fusable(f, g);
    const bimodule& H = f.source;
    const bimodule& K = g.source;
    const bimodule S = fuse_object(H, K);
    const bimodule T = fuse_object(f.target, g.target);
    if (v.size() != S.dim()) throw error("DimensionMismatch", "apply_fused: vector size");
    const cmat fm = f.matrix(), gm = g.matrix();
    cvec out = cvec::Zero(T.dim());
    for (int i = 0; i < S.left.num_blocks(); ++i)
        for (int l = 0; l < S.right.num_blocks(); ++l)
            for (int j = 0; j < H.right.num_blocks(); ++j)
                for (int al = 0; al < H.mult(i, j); ++al)
                    for (int be = 0; be < K.mult(j, l); ++be) {
                        const int slot = fused_slot(H, K, i, l, j, al, be);
                        for (int a = 0; a < S.left.block(i); ++a)
                            for (int d = 0; d < S.right.block(l); ++d) {
                                const cplx c = v(S.index(i, l, slot, a, d));
                                if (c == cplx(0)) continue;
                                const cvec x = fm.col(H.index(i, j, al, a, 0));
                                const cvec y = gm.col(K.index(j, l, be, 0, d));
                                out += c * product(f.target, g.target, x, y);
                            }
                    }
    return out;
}

bimodule_map fused_map(const bimodule_map& f, const bimodule_map& g, double tol) {
    if (f.bilinear() && g.bilinear()) return fuse_maps(f, g);
    check_fusable(f, g);
    const bimodule S = fuse_object(f.source, g.source);
    const bimodule T = fuse_object(f.target, g.target);
    cmat M(T.dim(), S.dim());
    for (int c = 0; c < S.dim(); ++c) M.col(c) = apply_fused(f, g, cvec::Unit(S.dim(), c));
    const linearity lin = fused_linearity(f, g);
    if (lin == linearity::bilinear) return from_full(S, T, M, lin, tol);
    return bimodule_map{S, T, lin, {}, M};
}

bimodule_map left_unitor(const bimodule& H) {
    const bimodule S = fuse_object(l2_bimodule(H.left), H);
    return from_blocks(S, H, identity_map(H).blocks);
}

bimodule_map right_unitor(const bimodule& H) {
    const bimodule S = fuse_object(H, l2_bimodule(H.right));
    return from_blocks(S, H, identity_map(H).blocks);
}

bimodule_map associator(const bimodule& H, const bimodule& K, const bimodule& L) {
    const bimodule HK = fuse_object(H, K), KL = fuse_object(K, L);
    const bimodule S = fuse_object(HK, L), T = fuse_object(H, KL);
    std::vector<cmat> blocks;
    for (int i = 0; i < S.left.num_blocks(); ++i)
        for (int m = 0; m < S.right.num_blocks(); ++m) {
            cmat P = cmat::Zero(T.mult(i, m), S.mult(i, m));
            for (int j = 0; j < H.right.num_blocks(); ++j)
                for (int l = 0; l < K.right.num_blocks(); ++l)
                    for (int al = 0; al < H.mult(i, j); ++al)
                        for (int be = 0; be < K.mult(j, l); ++be)
                            for (int ga = 0; ga < L.mult(l, m); ++ga) {
                                const int src = fused_slot(HK, L, i, m, l, fused_slot(H, K, i, l, j, al, be), ga);
                                const int dst = fused_slot(H, KL, i, m, j, al, fused_slot(K, L, j, m, l, be, ga));
                                P(dst, src) = 1.0;
                            }
            blocks.push_back(P);
        }
    return from_blocks(S, T, blocks);
}

// -------------------------------------------------------------- ingestion

ingested ingest(const algebra& A, const algebra& B,
                const std::function<cmat(int, int, int)>& lambda,
                const std::function<cmat(int, int, int)>& rho, double tol) {
    imat m(A.num_blocks(), B.num_blocks());
    std::vector<cmat> ranges;
    Eigen::Index D = lambda(0, 0, 0).rows();
    for (int i = 0; i < A.num_blocks(); ++i)
        for (int j = 0; j < B.num_blocks(); ++j) {
            const cmat w = numerics::range_basis(lambda(i, 0, 0) * rho(j, 0, 0), tol);
            m(i, j) = static_cast<int>(w.cols());
            ranges.push_back(w);
        }
    ingested out{bimodule(A, B, m), cmat(D, 0)};
    const bimodule& H = out.H;
    out.U.resize(D, H.dim());
    for (int i = 0; i < A.num_blocks(); ++i)
        for (int j = 0; j < B.num_blocks(); ++j) {
            const cmat& w = ranges[i * B.num_blocks() + j];
            for (int a = 0; a < A.block(i); ++a) {
                const cmat La = lambda(i, a, 0);
                for (int c = 0; c < B.block(j); ++c) {
                    const cmat Rc = rho(j, 0, c);
                    const cmat v = La * Rc * w;
                    for (int al = 0; al < m(i, j); ++al) out.U.col(H.index(i, j, al, a, c)) = v.col(al);
                }
            }
        }
    if (H.dim() != D || numerics::unitary_residual(out.U) > 1e-8)
        throw error("IngestionFailure", "ingest: actions are not unital commuting representations (dim " +
                    std::to_string(H.dim()) + " of " + std::to_string(D) + ", unitary residual " +
                    std::to_string(numerics::unitary_residual(out.U)) + ")");
    return out;
}

// ------------------------------------------------------ concrete algebras

cmat concrete_algebra::rep(const element& x) const {
    std::vector<cmat> parts;
    for (int i = 0; i < abs.num_blocks(); ++i)
        if (mult[i] > 0) parts.push_back(kron(x.blocks[i], identity(mult[i])));
    return W * numerics::direct_sum(parts) * W.adjoint();
}

element concrete_algebra::pullback(const cmat& X) const {
    const cmat Y = W.adjoint() * X * W;
    element e = element::zero(abs);
    int off = 0;
    for (int i = 0; i < abs.num_blocks(); ++i) {
        const int n = abs.block(i), mu = mult[i];
        if (mu > 0)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) e.blocks[i](a, b) = Y(off + a * mu, off + b * mu);
        off += n * mu;
    }
    return e;
}

std::vector<cmat> concrete_algebra::generator_images() const {
    std::vector<cmat> out;
    for (const auto& g : vnalg::algebra::generators(abs)) out.push_back(rep(g));
    return out;
}

concrete_algebra concrete_from_rep(const algebra& A, const std::function<cmat(int, int, int)>& image, double tol) {
    const auto rd = vnalg::algebra::decompose_rep(A, image, tol);
    if (rd.W.cols() != rd.W.rows() || numerics::unitary_residual(rd.W) > 1e-8)
        throw error("NotUnital", "concrete algebra: representation is not unital");
    return concrete_algebra{A, rd.mult, rd.W};
}

concrete_algebra commutant(const concrete_algebra& X) {
    std::vector<int> blocks, mult, src;
    for (int i = 0; i < X.abs.num_blocks(); ++i)
        if (X.mult[i] > 0) {
            blocks.push_back(X.mult[i]);
            mult.push_back(X.abs.block(i));
            src.push_back(i);
        }
    concrete_algebra C{algebra(blocks), mult, cmat(X.W.rows(), X.W.cols())};
    int off = 0, dst = 0;
    for (int i = 0; i < X.abs.num_blocks(); ++i) {
        const int n = X.abs.block(i), mu = X.mult[i];
        for (int al = 0; al < mu; ++al)
            for (int a = 0; a < n; ++a) C.W.col(dst + al * n + a) = X.W.col(off + a * mu + al);
        off += n * mu;
        dst += n * mu;
    }
    return C;
}

namespace {

element combo(const std::vector<element>& span, const algebra& A, rng_t& rng, bool hermitian) {
    element x = element::zero(A);
    std::normal_distribution<double> g(0.0, 1.0);
    for (const auto& s : span) {
        const double re = g(rng), im = g(rng);
        x = x + s * cplx(re, im);
    }
    if (hermitian) x = (x + x.adjoint()) * cplx(0.5);
    return x;
}

cmat null_space_normal(const std::vector<cmat>& cols_per_constraint, Eigen::Index ncols, double tol) {
    cmat N = cmat::Zero(ncols, ncols);
    for (const auto& C : cols_per_constraint) N += C.adjoint() * C;
    Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (N + N.adjoint()));
    const rvec& ev = es.eigenvalues();
    const double lmax = std::max(ev.maxCoeff(), 1.0);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < ev.size(); ++k)
        if (ev(k) <= tol * lmax) keep.push_back(k);
    cmat out(ncols, keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) out.col(k) = es.eigenvectors().col(keep[k]);
    return out;
}

} // namespace

concrete_algebra subalgebra(const concrete_algebra& X, const std::vector<element>& span, std::uint64_t seed, double tol) {
    rng_t rng(seed);
    const algebra& A = X.abs;
    if (span.empty()) throw error("ConfigurationInvalid", "subalgebra: empty span");
    const element h1 = combo(span, A, rng, true), h2 = combo(span, A, rng, true);
    // center: elements of the span commuting with two generic self-adjoint elements
    const Eigen::Index K = span.size();
    cmat C1(A.dim(), K), C2(A.dim(), K), basis(A.dim(), K);
    for (Eigen::Index k = 0; k < K; ++k) {
        C1.col(k) = (span[k] * h1 - h1 * span[k]).vec();
        C2.col(k) = (span[k] * h2 - h2 * span[k]).vec();
        basis.col(k) = span[k].vec();
    }
    const cmat ns = null_space_normal({C1, C2}, K, tol);
    std::vector<element> center;
    for (Eigen::Index k = 0; k < ns.cols(); ++k) center.push_back(element::from_vec(A, basis * ns.col(k)));
    if (center.empty()) throw error("NumericalFailure", "subalgebra: empty center");
    const element z = combo(center, A, rng, true);
    // minimal central projections: spectral projections of z across all blocks of A
    struct piece { int blk; cvec v; double val; };
    std::vector<piece> pieces;
    for (int i = 0; i < A.num_blocks(); ++i) {
        Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (z.blocks[i] + z.blocks[i].adjoint()));
        for (int k = 0; k < A.block(i); ++k) pieces.push_back({i, es.eigenvectors().col(k), es.eigenvalues()(k)});
    }
    std::sort(pieces.begin(), pieces.end(), [](const piece& a, const piece& b) { return a.val < b.val; });
    double spread = 1.0;
    for (const auto& p : pieces) spread = std::max(spread, std::abs(p.val));
    std::vector<element> central;
    for (std::size_t k = 0; k < pieces.size();) {
        element P = element::zero(A);
        std::size_t e = k;
        while (e < pieces.size() && (e == k || pieces[e].val - pieces[e - 1].val <= 1e-6 * spread)) {
            P.blocks[pieces[e].blk] += pieces[e].v * pieces[e].v.adjoint();
            ++e;
        }
        central.push_back(P);
        k = e;
    }
    // matrix units within each central summand
    std::vector<int> sizes;
    std::vector<std::vector<element>> units;  // e_{a0}
    for (const auto& P : central) {
        const element h = P * h1 * P;
        // eigen-decompose h restricted to the range of P (per block), cluster globally
        std::vector<piece> ps;
        for (int i = 0; i < A.num_blocks(); ++i) {
            const cmat V = numerics::range_basis(P.blocks[i], 1e-6);
            if (V.cols() == 0) continue;
            Eigen::SelfAdjointEigenSolver<cmat> es(V.adjoint() * h.blocks[i] * V);
            for (Eigen::Index k = 0; k < V.cols(); ++k) ps.push_back({i, V * es.eigenvectors().col(k), es.eigenvalues()(k)});
        }
        std::sort(ps.begin(), ps.end(), [](const piece& a, const piece& b) { return a.val < b.val; });
        double sp = 1.0;
        for (const auto& p : ps) sp = std::max(sp, std::abs(p.val));
        std::vector<element> E;
        for (std::size_t k = 0; k < ps.size();) {
            element Q = element::zero(A);
            std::size_t e = k;
            while (e < ps.size() && (e == k || ps[e].val - ps[e - 1].val <= 1e-6 * sp)) {
                Q.blocks[ps[e].blk] += ps[e].v * ps[e].v.adjoint();
                ++e;
            }
            E.push_back(Q);
            k = e;
        }
        std::vector<element> col0{E[0]};
        for (std::size_t a = 1; a < E.size(); ++a) {
            element x;
            double nrm = 0;
            for (int attempt = 0; attempt < 20 && nrm < 1e-3; ++attempt) {
                x = E[a] * combo(span, A, rng, false) * E[0];
                const element xx = x.adjoint() * x;
                nrm = 0;
                for (const auto& b : xx.blocks)
                    if (b.size()) {
                        Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (b + b.adjoint()), Eigen::EigenvaluesOnly);
                        nrm = std::max(nrm, es.eigenvalues().maxCoeff());
                    }
                nrm = std::sqrt(std::max(nrm, 0.0));
            }
            if (nrm < 1e-3) throw error("NumericalFailure", "subalgebra: could not build matrix units");
            col0.push_back(x * cplx(1.0 / nrm));
        }
        sizes.push_back(static_cast<int>(E.size()));
        units.push_back(col0);
    }
    const algebra S(sizes);
    return concrete_from_rep(S, [&](int i, int a, int b) {
        return X.rep(units[i][a] * units[i][b].adjoint());
    }, 1e-7);
}

concrete_algebra relative_commutant(const concrete_algebra& X, const std::vector<cmat>& S, std::uint64_t seed, double tol) {
    const algebra& A = X.abs;
    const auto units = vnalg::algebra::matrix_units(A);
    std::vector<cmat> constraints;
    for (const auto& s : S) {
        const cmat sp = X.W.adjoint() * s * X.W;
        cmat C(sp.size(), units.size());
        for (std::size_t k = 0; k < units.size(); ++k) {
            cmat E = cmat::Zero(sp.rows(), sp.cols());
            // embed e^i_{ab} ⊗ 1_μ
            int off = 0;
            for (int i = 0; i < A.num_blocks(); ++i) {
                const int n = A.block(i), mu = X.mult[i];
                if (units[k].blocks[i].norm() > 0) {
                    Eigen::Index a, b;
                    units[k].blocks[i].cwiseAbs().maxCoeff(&a, &b);
                    for (int al = 0; al < mu; ++al) E(off + a * mu + al, off + b * mu + al) = 1.0;
                }
                off += n * mu;
            }
            const cmat com = E * sp - sp * E;
            C.col(k) = Eigen::Map<const cvec>(com.data(), com.size());
        }
        constraints.push_back(C);
    }
    const cmat ns = null_space_normal(constraints, units.size(), tol);
    std::vector<element> span;
    for (Eigen::Index k = 0; k < ns.cols(); ++k) {
        element x = element::zero(A);
        for (std::size_t u = 0; u < units.size(); ++u) x = x + units[u] * ns(u, k);
        span.push_back(x);
    }
    return subalgebra(X, span, seed);
}

namespace {

std::vector<cmat> generic_pair(const concrete_algebra& Y, std::uint64_t seed) {
    rng_t rng(seed ^ 0x9e3779b97f4a7c15ULL);
    const element y = element::random(Y.abs, rng);
    const cmat r = Y.rep(y);
    return {r, r.adjoint()};
}

} // namespace

concrete_algebra intersection(const concrete_algebra& X, const concrete_algebra& Y, std::uint64_t seed) {
    return relative_commutant(X, generic_pair(commutant(Y), seed), seed);
}

concrete_algebra join(const concrete_algebra& X, const concrete_algebra& Y, std::uint64_t seed) {
    return commutant(intersection(commutant(X), commutant(Y), seed));
}

vnalg::algebra::homomorphism inclusion(const concrete_algebra& X, const concrete_algebra& Y) {
    return vnalg::algebra::ingest_hom(X.abs, Y.abs, [&](const element& x) { return Y.pullback(X.rep(x)); }, 1e-7);
}

concrete_algebra action_algebra(const bimodule& H, side s) {
    if (s == side::left)
        return concrete_from_rep(H.left, [&](int i, int a, int b) {
            return left_action(H, element::matrix_unit(H.left, i, a, b));
        });
    return concrete_from_rep(H.right, [&](int j, int c, int d) {
        return right_action(H, element::matrix_unit(H.right, j, d, c));
    });
}

commutant_result commutant_on(const bimodule& H, side s) {
    const concrete_algebra X = action_algebra(H, s);
    for (int m : X.mult)
        if (m == 0) throw error("NotFaithful", "commutant_on: action is not faithful");
    commutant_result out{commutant(X), 0};
    const concrete_algebra XX = commutant(out.commutant);
    double r = std::abs(XX.abs.dim() - X.abs.dim());
    for (const auto& g : out.commutant.generator_images())
        for (const auto& h : X.generator_images()) r = std::max(r, (g * h - h * g).norm());
    out.double_commutant_residual = r;
    return out;
}

} // namespace vnalg::bimodule
