// duality.cpp — canonical duality, normalization, bends and Jones projections

#include "vnalg/duality.hpp"

#include <cmath>

namespace vnalg::duality {

using bm::associator;
using bm::fuse_maps;
using bm::fused_slot;
using bm::identity_map;
using bm::l2_bimodule;
using bm::left_unitor;
using bm::right_unitor;

namespace {

int block_id(const bimodule& H, int i, int j) { return i * H.right.num_blocks() + j; }

// coevaluation L²A → H ⊠ K with ones on the diagonal slots (j, α, α); K must be conjugate to H
bimodule_map coevaluation(const bimodule& H, const bimodule& K) {
    const bimodule L = l2_bimodule(H.left);
    const bimodule F = bm::fuse_object(H, K);
    std::vector<cmat> blocks;
    for (int i = 0; i < L.left.num_blocks(); ++i)
        for (int i2 = 0; i2 < L.right.num_blocks(); ++i2) {
            cmat b = cmat::Zero(F.mult(i, i2), L.mult(i, i2));
            if (i == i2)
                for (int j = 0; j < H.right.num_blocks(); ++j)
                    for (int al = 0; al < H.mult(i, j); ++al) b(fused_slot(H, K, i, i, j, al, al), 0) = 1.0;
            blocks.push_back(b);
        }
    return bm::from_blocks(L, F, blocks);
}

// bilinear map supported on block (i,j) only
bimodule_map compress(const bimodule_map& x, int i, int j) {
    bimodule_map y = x;
    for (int p = 0; p < x.source.left.num_blocks(); ++p)
        for (int q = 0; q < x.source.right.num_blocks(); ++q)
            if (p != i || q != j) y.blocks[block_id(x.source, p, q)].setZero();
    return y;
}

bimodule_map matrix_unit_map(const bimodule& H, int i, int j, int a, int b) {
    bimodule_map e = bm::zero_map(H, H);
    e.blocks[block_id(H, i, j)](a, b) = 1.0;
    return e;
}

bimodule_map require_bilinear(const bimodule_map& f, const char* what) {
    if (!f.bilinear()) throw error("LinearityViolation", std::string(what) + " must be bilinear");
    return f;
}

// per-block positive matrices a (from R) and b (from S) with φ = Tr(a ·), ψ = Tr(b ·)
void state_matrices(const duality_data& D, int i, int j, cmat& a, cmat& b) {
    const int m = D.H.mult(i, j);
    a.resize(m, m);
    b.resize(m, m);
    for (int al = 0; al < m; ++al)
        for (int be = 0; be < m; ++be) {
            const bimodule_map E = matrix_unit_map(D.H, i, j, be, al);
            a(al, be) = left_state(D, E)(i);
            b(al, be) = right_state(D, E)(j);
        }
}

} // namespace

bimodule_map inverse_unitor_left(const bimodule& H) { return left_unitor(H).adjoint(); }
bimodule_map inverse_unitor_right(const bimodule& H) { return right_unitor(H).adjoint(); }

double identity_residual(const bimodule_map& f) {
    if (f.source != f.target) return std::numeric_limits<double>::infinity();
    if (!f.bilinear()) return numerics::rel_diff(f.full, numerics::identity(f.full.rows()));
    double r = 0;
    for (const auto& b : f.blocks) r = std::max(r, numerics::rel_diff(b, numerics::identity(b.rows())));
    return r;
}

duality_data canonical_duality(const bimodule& H) {
    duality_data D;
    D.H = H;
    D.Hbar = bm::conjugate(H);
    D.R = coevaluation(H, D.Hbar);
    D.S = coevaluation(D.Hbar, H);
    D.normalized = true;
    return D;
}

duality_data dual_of(const duality_data& D) { return duality_data{D.Hbar, D.H, D.S, D.R, D.normalized}; }

bimodule_map zigzag_h(const duality_data& D) {
    const bimodule& H = D.H;
    const bimodule_map step1 = fuse_maps(identity_map(H), D.S) * inverse_unitor_right(H);
    const bimodule_map step2 = associator(H, D.Hbar, H).adjoint() * step1;
    return left_unitor(H) * fuse_maps(D.R.adjoint(), identity_map(H)) * step2;
}

bimodule_map zigzag_hbar(const duality_data& D) {
    const bimodule& Hb = D.Hbar;
    const bimodule_map step1 = fuse_maps(identity_map(Hb), D.R) * inverse_unitor_right(Hb);
    const bimodule_map step2 = associator(Hb, D.H, Hb).adjoint() * step1;
    return left_unitor(Hb) * fuse_maps(D.S.adjoint(), identity_map(Hb)) * step2;
}

double zigzag_residual(const duality_data& D) {
    return std::max(identity_residual(zigzag_h(D)), identity_residual(zigzag_hbar(D)));
}

cvec left_state(const duality_data& D, const bimodule_map& x) {
    const bimodule_map v = D.R.adjoint() * fuse_maps(require_bilinear(x, "state argument"), identity_map(D.Hbar)) * D.R;
    cvec out(D.H.left.num_blocks());
    for (int i = 0; i < out.size(); ++i) out(i) = v.blocks[block_id(v.source, i, i)](0, 0);
    return out;
}

cvec right_state(const duality_data& D, const bimodule_map& x) {
    const bimodule_map v = D.S.adjoint() * fuse_maps(identity_map(D.Hbar), require_bilinear(x, "state argument")) * D.S;
    cvec out(D.H.right.num_blocks());
    for (int j = 0; j < out.size(); ++j) out(j) = v.blocks[block_id(v.source, j, j)](0, 0);
    return out;
}

cmat canonical_state(const duality_data& D, const bimodule_map& x) {
    cmat out(D.H.left.num_blocks(), D.H.right.num_blocks());
    for (int i = 0; i < out.rows(); ++i)
        for (int j = 0; j < out.cols(); ++j) out(i, j) = left_state(D, compress(x, i, j))(i);
    return out;
}

double normalization_residual(const duality_data& D) {
    double r = 0;
    for (int i = 0; i < D.H.left.num_blocks(); ++i)
        for (int j = 0; j < D.H.right.num_blocks(); ++j)
            for (int a = 0; a < D.H.mult(i, j); ++a)
                for (int b = 0; b < D.H.mult(i, j); ++b) {
                    const bimodule_map E = matrix_unit_map(D.H, i, j, a, b);
                    r = std::max(r, std::abs(left_state(D, E)(i) - right_state(D, E)(j)));
                }
    return r;
}

cmat solve_normalization_element(const cmat& a, const cmat& b) {
    if (a.rows() != b.rows() || a.rows() != a.cols() || b.rows() != b.cols())
        throw error("DimensionMismatch", "normalization element: shapes differ");
    if (a.size() == 0) return cmat(0, 0);
    const double ta = 1e-12 * std::max(1.0, a.norm()), tb = 1e-12 * std::max(1.0, b.norm());
    if (numerics::hermitian_residual(a) > 1e-8 * (1 + a.norm()) || numerics::hermitian_residual(b) > 1e-8 * (1 + b.norm()))
        throw error("NotPositiveDefinite", "normalization element: inputs are not Hermitian");
    Eigen::SelfAdjointEigenSolver<cmat> ea(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly), eb(0.5 * (b + b.adjoint()), Eigen::EigenvaluesOnly);
    if ((ea.eigenvalues().minCoeff() <= ta || eb.eigenvalues().minCoeff() <= tb))
        throw error("NotPositiveDefinite", "normalization element: inputs are not positive definite");
    const cmat sa = numerics::matrix_power(a, 0.5, 0.0), isa = numerics::matrix_power(a, -0.5, 0.0);
    const cmat mid = numerics::matrix_power(sa * b * sa, 0.5, 0.0);
    const cmat y = isa * mid * isa;
    return numerics::matrix_power(0.5 * (y + y.adjoint()), 0.5, 0.0);
}

normalize_result normalize(const bimodule& H, const bimodule& Hbar, const bimodule_map& R, const bimodule_map& S, double tol) {
    if (Hbar != bm::conjugate(H)) throw error("DimensionMismatch", "normalize: Hbar is not conjugate to H");
    duality_data D{H, Hbar, require_bilinear(R, "R"), require_bilinear(S, "S"), false};
    if (zigzag_residual(D) > tol) throw error("ZigzagViolation", "normalize: input fails the duality equations");
    std::vector<cmat> xb, xinv;
    for (int i = 0; i < H.left.num_blocks(); ++i)
        for (int j = 0; j < H.right.num_blocks(); ++j) {
            cmat a, b;
            state_matrices(D, i, j, a, b);
            cmat x;
            try {
                x = solve_normalization_element(0.5 * (a + a.adjoint()), 0.5 * (b + b.adjoint()));
            } catch (const error&) {
                throw error("SingularState", "normalize: R or S is degenerate on a block");
            }
            xb.push_back(x);
            xinv.push_back(x.size() ? cmat(x.inverse()) : x);
        }
    normalize_result out;
    out.x = bm::from_blocks(H, H, xb);
    const bimodule_map xi = bm::from_blocks(H, H, xinv);
    out.D = duality_data{H, Hbar, fuse_maps(out.x, identity_map(Hbar)) * R, fuse_maps(identity_map(Hbar), xi) * S, false};
    out.zigzag_residual = zigzag_residual(out.D);
    out.normalization_residual = normalization_residual(out.D);
    out.D.normalized = out.zigzag_residual <= tol && out.normalization_residual <= tol;
    return out;
}

duality_data skew(const duality_data& D, const bimodule_map& g) {
    std::vector<cmat> ginv;
    for (const auto& b : require_bilinear(g, "skew").blocks) ginv.push_back(b.size() ? cmat(b.inverse().adjoint()) : b);
    const bimodule_map gi = bm::from_blocks(D.H, D.H, ginv);
    return duality_data{D.H, D.Hbar, fuse_maps(g, identity_map(D.Hbar)) * D.R, fuse_maps(identity_map(D.Hbar), gi) * D.S, false};
}

cmat statistical_dimension(const duality_data& D, double tol) {
    if (!D.normalized || normalization_residual(D) > tol) throw error("NotNormalized", "statistical dimension needs normalized duality");
    const bimodule_map one = identity_map(D.H);
    cmat out(D.H.left.num_blocks(), D.H.right.num_blocks());
    for (int i = 0; i < out.rows(); ++i)
        for (int j = 0; j < out.cols(); ++j) {
            const bimodule_map p = compress(one, i, j);
            const cplx l = left_state(D, p)(i), r = right_state(D, p)(j);
            if (std::abs(l - r) > tol) throw error("NotNormalized", "left and right dimensions differ");
            out(i, j) = l;
        }
    return out;
}

bimodule_map bar_left(const duality_data& D, const bimodule_map& x) {
    const bimodule& H = D.H;
    const bimodule& Hb = D.Hbar;
    require_bilinear(x, "bar argument");
    bimodule_map f = fuse_maps(D.S, identity_map(Hb)) * inverse_unitor_left(Hb);
    f = associator(Hb, H, Hb) * f;
    f = fuse_maps(identity_map(Hb), fuse_maps(x, identity_map(Hb))) * f;
    f = fuse_maps(identity_map(Hb), D.R.adjoint()) * f;
    return right_unitor(Hb) * f;
}

bimodule_map bar_right(const duality_data& D, const bimodule_map& x) {
    const bimodule& H = D.H;
    const bimodule& Hb = D.Hbar;
    require_bilinear(x, "bar argument");
    bimodule_map f = fuse_maps(identity_map(Hb), D.R) * inverse_unitor_right(Hb);
    f = fuse_maps(identity_map(Hb), fuse_maps(x, identity_map(Hb))) * f;
    f = associator(Hb, H, Hb).adjoint() * f;
    f = fuse_maps(D.S.adjoint(), identity_map(Hb)) * f;
    return left_unitor(Hb) * f;
}

bimodule_map bar_involution(const duality_data& D, const bimodule_map& x, double tol) {
    if (!D.normalized) throw error("NotNormalized", "bar involution needs normalized duality");
    const bimodule_map l = bar_left(D, x), r = bar_right(D, x);
    double d = 0;
    for (std::size_t k = 0; k < l.blocks.size(); ++k) d = std::max(d, numerics::rel_diff(l.blocks[k], r.blocks[k]));
    if (d > tol) throw error("NumericalFailure", "left and right bends disagree");
    return l;
}

bimodule_map compare_duals(const duality_data& D1, const duality_data& D2) {
    if (!D1.normalized || !D2.normalized) throw error("NotNormalized", "compare_duals needs normalized dualities");
    if (D1.H != D2.H) throw error("DimensionMismatch", "compare_duals: different bimodules");
    const bimodule& Hb1 = D1.Hbar;
    bimodule_map f = fuse_maps(identity_map(Hb1), D2.R) * inverse_unitor_right(Hb1);
    f = associator(Hb1, D1.H, D2.Hbar).adjoint() * f;
    f = fuse_maps(D1.S.adjoint(), identity_map(D2.Hbar)) * f;
    return left_unitor(D2.Hbar) * f;
}

jones_report jones_projections(const duality_data& D) {
    const bimodule& H = D.H;
    const bimodule& Hb = D.Hbar;
    if (H.dim() == 0) throw error("ZeroModule", "Jones projections need a nonzero bimodule");
    if (!H.left.is_factor() || !H.right.is_factor()) throw error("NotFactor", "Jones projections need factor endpoints");
    jones_report rep;
    rep.dim_R = (D.R.adjoint() * D.R).blocks[0](0, 0).real();
    rep.dim_S = (D.S.adjoint() * D.S).blocks[0](0, 0).real();
    rep.product = rep.dim_R * rep.dim_S;
    const bimodule_map a = associator(H, Hb, H);
    rep.e1 = a * fuse_maps(D.R * D.R.adjoint() * cplx(1.0 / rep.dim_R), identity_map(H)) * a.adjoint();
    rep.e2 = fuse_maps(identity_map(H), D.S * D.S.adjoint() * cplx(1.0 / rep.dim_S));
    auto proj_res = [](const bimodule_map& e) {
        double r = 0;
        for (const auto& b : e.blocks) r = std::max(r, (b * b - b).norm() + (b - b.adjoint()).norm());
        return r;
    };
    rep.e1_residual = proj_res(rep.e1);
    rep.e2_residual = proj_res(rep.e2);
    const bimodule_map t = rep.e1 * rep.e2 * rep.e1;
    double rel = 0, gap = 1;
    for (std::size_t k = 0; k < t.blocks.size(); ++k) {
        if (t.blocks[k].size() == 0) continue;
        rel = std::max(rel, (t.blocks[k] - rep.e1.blocks[k] / rep.product).norm());
        const cmat d = rep.e1.blocks[k] - t.blocks[k];
        Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
        gap = std::min(gap, es.eigenvalues().minCoeff());
    }
    rep.relation_residual = rel;
    rep.order_gap = gap;
    rep.holds = rep.product >= 1 - tol::kernel && gap >= -tol::kernel && rep.e1_residual <= tol::kernel && rep.e2_residual <= tol::kernel;
    return rep;
}

} // namespace vnalg::duality
