// algebra.cpp — multi-matrix algebras and canonical homomorphisms

#include "vnalg/algebra.hpp"

#include <sstream>

namespace vnalg::algebra {

using numerics::identity;
using numerics::kron;

algebra::algebra(std::vector<int> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw error("InvalidAlgebra", "algebra needs at least one block");
    for (int n : blocks_)
        if (n < 1) throw error("InvalidAlgebra", "block sizes must be positive");
}

int algebra::dim() const {
    int d = 0;
    for (int n : blocks_) d += n * n;
    return d;
}

int algebra::total() const {
    int d = 0;
    for (int n : blocks_) d += n;
    return d;
}

int algebra::offset(int i) const {
    int d = 0;
    for (int k = 0; k < i; ++k) d += blocks_[k] * blocks_[k];
    return d;
}

int algebra::diag_offset(int i) const {
    int d = 0;
    for (int k = 0; k < i; ++k) d += blocks_[k];
    return d;
}

std::string algebra::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (i) os << "+";
        os << "M" << blocks_[i];
    }
    return os.str();
}

algebra trivial() { return algebra({1}); }

algebra tensor(const algebra& a, const algebra& b) {
    std::vector<int> out;
    for (int n : a.blocks())
        for (int m : b.blocks()) out.push_back(n * m);
    return algebra(out);
}

algebra sum(const algebra& a, const algebra& b) {
    std::vector<int> out = a.blocks();
    out.insert(out.end(), b.blocks().begin(), b.blocks().end());
    return algebra(out);
}

algebra random_algebra(int max_blocks, int max_size, rng_t& rng) {
    const int r = numerics::random_int(1, max_blocks, rng);
    std::vector<int> b(r);
    for (int& n : b) n = numerics::random_int(1, max_size, rng);
    return algebra(b);
}

// ---------------------------------------------------------------- element

element element::zero(const algebra& A) {
    element e{A, {}};
    for (int n : A.blocks()) e.blocks.push_back(cmat::Zero(n, n));
    return e;
}

element element::unit(const algebra& A) {
    element e{A, {}};
    for (int n : A.blocks()) e.blocks.push_back(identity(n));
    return e;
}

element element::matrix_unit(const algebra& A, int i, int a, int b) {
    element e = zero(A);
    e.blocks.at(i)(a, b) = 1.0;
    return e;
}

element element::random(const algebra& A, rng_t& rng) {
    element e{A, {}};
    for (int n : A.blocks()) e.blocks.push_back(numerics::random_matrix(n, n, rng));
    return e;
}

element element::random_hermitian(const algebra& A, rng_t& rng) {
    element e{A, {}};
    for (int n : A.blocks()) e.blocks.push_back(numerics::random_hermitian(n, rng));
    return e;
}

element element::from_vec(const algebra& A, const cvec& v) {
    if (v.size() != A.dim()) throw error("DimensionMismatch", "element::from_vec: size mismatch");
    element e{A, {}};
    for (int i = 0; i < A.num_blocks(); ++i) {
        const int n = A.block(i);
        e.blocks.push_back(numerics::unvec(v.segment(A.offset(i), n * n), n, n));
    }
    return e;
}

element element::from_dense(const algebra& A, const cmat& m) {
    if (m.rows() != A.total() || m.cols() != A.total())
        throw error("DimensionMismatch", "element::from_dense: size mismatch");
    element e{A, {}};
    for (int i = 0; i < A.num_blocks(); ++i) {
        const int n = A.block(i), o = A.diag_offset(i);
        e.blocks.push_back(m.block(o, o, n, n));
    }
    return e;
}

cvec element::vec() const {
    cvec v(parent.dim());
    for (int i = 0; i < parent.num_blocks(); ++i) {
        const int n = parent.block(i);
        v.segment(parent.offset(i), n * n) = numerics::vec(blocks[i]);
    }
    return v;
}

cmat element::dense() const { return numerics::direct_sum(blocks); }

element element::adjoint() const {
    element e{parent, {}};
    for (const auto& b : blocks) e.blocks.push_back(b.adjoint());
    return e;
}

bool element::is_projection(double tol) const {
    for (const auto& b : blocks) {
        const double s = std::max(1.0, b.norm());
        if ((b - b.adjoint()).norm() > tol * s || (b * b - b).norm() > tol * s) return false;
    }
    return true;
}

bool element::is_positive(double tol) const {
    for (const auto& b : blocks) {
        const double s = std::max(1.0, b.norm());
        if ((b - b.adjoint()).norm() > tol * s) return false;
        Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (b + b.adjoint()), Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -tol * s) return false;
    }
    return true;
}

double element::norm() const {
    double s = 0;
    for (const auto& b : blocks) s += b.squaredNorm();
    return std::sqrt(s);
}

element element::operator*(const element& o) const {
    if (parent != o.parent) throw error("AlgebraMismatch", "element product across algebras");
    element e{parent, {}};
    for (std::size_t i = 0; i < blocks.size(); ++i) e.blocks.push_back(blocks[i] * o.blocks[i]);
    return e;
}

element element::operator+(const element& o) const {
    if (parent != o.parent) throw error("AlgebraMismatch", "element sum across algebras");
    element e{parent, {}};
    for (std::size_t i = 0; i < blocks.size(); ++i) e.blocks.push_back(blocks[i] + o.blocks[i]);
    return e;
}

element element::operator-(const element& o) const { return *this + o * cplx(-1.0); }

element element::operator*(cplx s) const {
    element e{parent, {}};
    for (const auto& b : blocks) e.blocks.push_back(s * b);
    return e;
}

std::vector<element> minimal_central_projections(const algebra& A) {
    std::vector<element> out;
    for (int i = 0; i < A.num_blocks(); ++i) {
        element p = element::zero(A);
        p.blocks[i] = identity(A.block(i));
        out.push_back(p);
    }
    return out;
}

std::vector<element> matrix_units(const algebra& A) {
    std::vector<element> out;
    for (int i = 0; i < A.num_blocks(); ++i)
        for (int a = 0; a < A.block(i); ++a)
            for (int b = 0; b < A.block(i); ++b) out.push_back(element::matrix_unit(A, i, a, b));
    return out;
}

std::vector<element> generators(const algebra& A) {
    std::vector<element> out;
    for (int i = 0; i < A.num_blocks(); ++i) {
        out.push_back(element::matrix_unit(A, i, 0, 0));
        for (int a = 0; a + 1 < A.block(i); ++a) {
            out.push_back(element::matrix_unit(A, i, a, a + 1));
            out.push_back(element::matrix_unit(A, i, a + 1, a));
        }
    }
    return out;
}

// ------------------------------------------------------------- functional

cplx functional::operator()(const element& a) const {
    if (a.parent != parent) throw error("AlgebraMismatch", "functional applied across algebras");
    cplx s = 0;
    for (std::size_t i = 0; i < densities.size(); ++i) s += (densities[i] * a.blocks[i]).trace();
    return s;
}

bool functional::is_positive(double tol) const {
    return element{parent, densities}.is_positive(tol);
}

double functional::l1_norm() const {
    double s = 0;
    for (const auto& d : densities) {
        Eigen::JacobiSVD<cmat> svd(d);
        s += svd.singularValues().sum();
    }
    return s;
}

element functional::support(double tol) const {
    element p = element::zero(parent);
    for (std::size_t i = 0; i < densities.size(); ++i) {
        const cmat r = numerics::range_basis(densities[i], tol);
        p.blocks[i] = r * r.adjoint();
    }
    return p;
}

functional functional::from_density(const element& rho) { return functional{rho.parent, rho.blocks}; }

functional functional::random_positive(const algebra& A, rng_t& rng, bool allow_rank_deficient) {
    functional f{A, {}};
    for (int n : A.blocks()) {
        int rank = n;
        if (allow_rank_deficient) rank = numerics::random_int(0, n, rng);
        f.densities.push_back(rank == 0 ? cmat(cmat::Zero(n, n)) : numerics::random_psd(n, rank, rng));
    }
    return f;
}

// ----------------------------------------------------------- homomorphism

element homomorphism::operator()(const element& a) const {
    if (a.parent != source) throw error("AlgebraMismatch", "homomorphism applied to foreign element");
    element out{target, {}};
    for (int j = 0; j < target.num_blocks(); ++j) {
        std::vector<cmat> parts;
        for (int i = 0; i < source.num_blocks(); ++i)
            if (mult(i, j) > 0) parts.push_back(kron(a.blocks[i], identity(mult(i, j))));
        const cmat d = numerics::direct_sum(parts);
        out.blocks.push_back(unitaries[j] * d * unitaries[j].adjoint());
    }
    return out;
}

cmat homomorphism::matrix() const {
    cmat m(target.dim(), source.dim());
    int c = 0;
    for (const auto& e : matrix_units(source)) m.col(c++) = (*this)(e).vec();
    return m;
}

bool homomorphism::injective() const {
    for (int i = 0; i < source.num_blocks(); ++i) {
        int s = 0;
        for (int j = 0; j < target.num_blocks(); ++j) s += mult(i, j);
        if (s == 0) return false;
    }
    return true;
}

homomorphism canonical_embedding(const algebra& A, const algebra& B, const imat& lambda) {
    if (lambda.rows() != A.num_blocks() || lambda.cols() != B.num_blocks())
        throw error("DimensionMismatch", "canonical_embedding: multiplicity matrix has wrong shape");
    for (int j = 0; j < B.num_blocks(); ++j) {
        int s = 0;
        for (int i = 0; i < A.num_blocks(); ++i) {
            if (lambda(i, j) < 0) throw error("DimensionMismatch", "canonical_embedding: negative multiplicity");
            s += lambda(i, j) * A.block(i);
        }
        if (s != B.block(j))
            throw error("DimensionMismatch", "canonical_embedding: Σ_i Λ_ij n_i != k_j for block " + std::to_string(j));
    }
    homomorphism f{A, B, lambda, {}};
    for (int k : B.blocks()) f.unitaries.push_back(identity(k));
    return f;
}

homomorphism identity_hom(const algebra& A) {
    return canonical_embedding(A, A, imat::Identity(A.num_blocks(), A.num_blocks()));
}

homomorphism compose_hom(const homomorphism& f, const homomorphism& g) {
    if (f.target != g.source) throw error("AlgebraMismatch", "compose_hom: target of f != source of g");
    homomorphism h = ingest_hom(f.source, g.target, [&](const element& a) { return g(f(a)); });
    if (h.mult != f.mult * g.mult) throw error("NumericalFailure", "compose_hom: multiplicities do not multiply");
    return h;
}

homomorphism random_conjugate(const homomorphism& f, rng_t& rng) {
    homomorphism g = f;
    for (auto& u : g.unitaries) u = numerics::random_unitary(u.rows(), rng);
    return g;
}

homomorphism random_inclusion(const algebra& A, int max_blocks, int max_size, rng_t& rng, int max_mult) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const int s = numerics::random_int(1, max_blocks, rng);
        imat lambda(A.num_blocks(), s);
        for (int i = 0; i < lambda.rows(); ++i)
            for (int j = 0; j < s; ++j) lambda(i, j) = numerics::random_int(0, max_mult, rng);
        std::vector<int> sizes(s, 0);
        bool ok = true;
        for (int i = 0; i < lambda.rows(); ++i) ok = ok && lambda.row(i).sum() > 0;
        for (int j = 0; j < s && ok; ++j) {
            for (int i = 0; i < lambda.rows(); ++i) sizes[j] += lambda(i, j) * A.block(i);
            ok = sizes[j] > 0 && sizes[j] <= max_size;
        }
        if (ok) return random_conjugate(canonical_embedding(A, algebra(sizes), lambda), rng);
    }
    throw error("DimensionMismatch", "random_inclusion: no inclusion of " + A.str() + " fits the size bound");
}

double homomorphism_residual(const homomorphism& f) {
    double r = 0;
    const auto units = matrix_units(f.source);
    for (const auto& x : units)
        for (const auto& y : units) r = std::max(r, (f(x * y) - f(x) * f(y)).norm());
    for (const auto& x : units) r = std::max(r, (f(x.adjoint()) - f(x).adjoint()).norm());
    r = std::max(r, (f(element::unit(f.source)) - element::unit(f.target)).norm());
    return r;
}

rep_decomposition decompose_rep(const algebra& A, const std::function<cmat(int, int, int)>& image, double tol) {
    rep_decomposition out;
    std::vector<cmat> cols;
    Eigen::Index D = -1;
    for (int i = 0; i < A.num_blocks(); ++i) {
        const cmat f00 = image(i, 0, 0);
        D = f00.rows();
        const cmat w = numerics::range_basis(f00, tol);
        out.mult.push_back(static_cast<int>(w.cols()));
        for (int a = 0; a < A.block(i); ++a) {
            const cmat fa0 = (a == 0) ? f00 : image(i, a, 0);
            cols.push_back(fa0 * w);
        }
    }
    Eigen::Index c = 0;
    for (const auto& m : cols) c += m.cols();
    out.W.resize(D, c);
    c = 0;
    for (const auto& m : cols) {
        out.W.middleCols(c, m.cols()) = m;
        c += m.cols();
    }
    return out;
}

homomorphism ingest_hom(const algebra& A, const algebra& B,
                        const std::function<element(const element&)>& f, double tol) {
    homomorphism h{A, B, imat::Zero(A.num_blocks(), B.num_blocks()), {}};
    // cache images e^i_{a0}
    std::vector<std::vector<element>> col0(A.num_blocks());
    for (int i = 0; i < A.num_blocks(); ++i)
        for (int a = 0; a < A.block(i); ++a) col0[i].push_back(f(element::matrix_unit(A, i, a, 0)));
    for (int j = 0; j < B.num_blocks(); ++j) {
        const auto rd = decompose_rep(A, [&](int i, int a, int b) -> cmat {
            if (b != 0) return f(element::matrix_unit(A, i, a, b)).blocks[j];
            return col0[i][a].blocks[j];
        }, tol);
        if (rd.W.cols() != B.block(j))
            throw error("NotUnital", "ingest_hom: image of 1 is not the unit of block " + std::to_string(j));
        for (int i = 0; i < A.num_blocks(); ++i) h.mult(i, j) = rd.mult[i];
        h.unitaries.push_back(rd.W);
    }
    if (homomorphism_residual(h) > 1e-8) throw error("NotHomomorphism", "ingest_hom: map is not a *-homomorphism");
    // check the canonical form reproduces f
    for (const auto& e : generators(A))
        if ((h(e) - f(e)).norm() > 1e-8) throw error("NotHomomorphism", "ingest_hom: canonical form mismatch");
    return h;
}

// ----------------------------------------------------------------- corner

element corner_data::compress(const element& a) const {
    element out = element::zero(alg);
    for (int c = 0; c < alg.num_blocks(); ++c) {
        const cmat& V = isometries[block_of[c]];
        out.blocks[c] = V.adjoint() * a.blocks[block_of[c]] * V;
    }
    return out;
}

element corner_data::embed(const element& c) const {
    algebra parent_alg;
    std::vector<int> sizes;
    for (const auto& V : isometries) sizes.push_back(static_cast<int>(V.rows()));
    parent_alg = algebra(sizes);
    element out = element::zero(parent_alg);
    for (int k = 0; k < alg.num_blocks(); ++k) {
        const cmat& V = isometries[block_of[k]];
        out.blocks[block_of[k]] = V * c.blocks[k] * V.adjoint();
    }
    return out;
}

corner_data corner(const algebra& A, const element& p, double tol) {
    if (p.parent != A) throw error("AlgebraMismatch", "corner: projection from another algebra");
    if (!p.is_projection(std::max(tol, 1e-9))) throw error("NotProjection", "corner: p is not a projection");
    corner_data out;
    std::vector<int> sizes;
    for (int i = 0; i < A.num_blocks(); ++i) {
        const cmat V = numerics::range_basis(p.blocks[i], 1e-6);
        out.isometries.push_back(V);
        if (V.cols() > 0) {
            sizes.push_back(static_cast<int>(V.cols()));
            out.block_of.push_back(i);
        }
    }
    if (sizes.empty()) throw error("NotProjection", "corner: p = 0");
    out.alg = algebra(sizes);
    return out;
}

} // namespace vnalg::algebra
