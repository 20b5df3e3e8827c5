// l2.cpp — square roots of states, inner products, modular conjugation

#include "vnalg/l2.hpp"

#include <cmath>

namespace vnalg::l2 {

using numerics::identity;
using numerics::kron;

l2_vector l2_vector::zero(const algebra& A) {
    return l2_vector{A, element::zero(A).blocks};
}

l2_vector l2_vector::from_vec(const algebra& A, const cvec& v) {
    return l2_vector{A, element::from_vec(A, v).blocks};
}

l2_vector l2_vector::random(const algebra& A, rng_t& rng) {
    return l2_vector{A, element::random(A, rng).blocks};
}

cvec l2_vector::vec() const { return element{parent, blocks}.vec(); }

cplx l2_vector::inner(const l2_vector& o) const {
    if (parent != o.parent) throw error("AlgebraMismatch", "inner product across algebras");
    cplx s = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i) s += (blocks[i].adjoint() * o.blocks[i]).trace();
    return s;
}

double l2_vector::norm() const { return std::sqrt(std::max(0.0, inner(*this).real())); }

l2_vector l2_vector::left(const element& a) const {
    l2_vector out{parent, {}};
    for (std::size_t i = 0; i < blocks.size(); ++i) out.blocks.push_back(a.blocks[i] * blocks[i]);
    return out;
}

l2_vector l2_vector::right(const element& a) const {
    l2_vector out{parent, {}};
    for (std::size_t i = 0; i < blocks.size(); ++i) out.blocks.push_back(blocks[i] * a.blocks[i]);
    return out;
}

namespace {

void require_positive(const functional& f, double tol) {
    if (!f.is_positive(std::max(tol, 1e-9))) throw error("NotPositive", "functional is not positive");
}

} // namespace

l2_vector sqrt_state(const functional& phi, double tol) {
    require_positive(phi, tol);
    l2_vector out{phi.parent, {}};
    for (const auto& rho : phi.densities) out.blocks.push_back(numerics::matrix_power(rho, 0.5, tol));
    return out;
}

double inner_direct(const functional& phi, const functional& psi, double tol) {
    if (phi.parent != psi.parent) throw error("AlgebraMismatch", "inner_direct across algebras");
    require_positive(phi, tol);
    require_positive(psi, tol);
    double s = 0;
    for (std::size_t i = 0; i < phi.densities.size(); ++i) {
        const cmat a = numerics::matrix_power(phi.densities[i], 0.5, tol);
        const cmat b = numerics::matrix_power(psi.densities[i], 0.5, tol);
        s += (a * b).trace().real();
    }
    return s;
}

namespace {

cplx analytic_f(const functional& phi, const functional& psi, cplx t, double tol) {
    const cplx I(0.0, 1.0);
    cplx s = 0;
    for (std::size_t i = 0; i < phi.densities.size(); ++i) {
        const cmat a = numerics::matrix_power(phi.densities[i], 1.0 + I * t, tol);
        const cmat b = numerics::matrix_power(psi.densities[i], -I * t, tol);
        s += (a * b).trace();
    }
    return s;
}

} // namespace

analytic_report inner_analytic(const functional& phi, const functional& psi,
                               const std::vector<cplx>& t_samples, double tol) {
    if (phi.parent != psi.parent) throw error("AlgebraMismatch", "inner_analytic across algebras");
    require_positive(phi, tol);
    require_positive(psi, tol);
    analytic_report rep;
    const cplx v = analytic_f(phi, psi, cplx(0.0, 0.5), tol);
    rep.value = v.real();
    rep.imag = v.imag();
    for (const cplx& t : t_samples) rep.samples.emplace_back(t, analytic_f(phi, psi, t, tol));
    return rep;
}

l2_vector modular_conjugation(const l2_vector& xi) {
    l2_vector out{xi.parent, {}};
    for (const auto& b : xi.blocks) out.blocks.push_back(b.adjoint());
    return out;
}

cmat left_operator(const element& a) {
    const algebra& A = a.parent;
    std::vector<cmat> parts;
    for (int i = 0; i < A.num_blocks(); ++i) parts.push_back(kron(a.blocks[i], identity(A.block(i))));
    return numerics::direct_sum(parts);
}

cmat right_operator(const element& a) {
    const algebra& A = a.parent;
    std::vector<cmat> parts;
    for (int i = 0; i < A.num_blocks(); ++i)
        parts.push_back(kron(identity(A.block(i)), a.blocks[i].transpose()));
    return numerics::direct_sum(parts);
}

bool standard_form_report::all_pass() const {
    for (const auto& a : axioms)
        if (!a.pass) return false;
    return axioms.size() == 5;
}

namespace {

// permutation implementing the blockwise transpose on L² coordinates
cmat transpose_permutation(const algebra& A) {
    cmat P = cmat::Zero(A.dim(), A.dim());
    for (int i = 0; i < A.num_blocks(); ++i) {
        const int n = A.block(i), o = A.offset(i);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) P(o + b * n + a, o + a * n + b) = 1.0;
    }
    return P;
}

struct conj_op {
    cmat P;
    bool antilinear;
    cvec apply(const cvec& v) const { return antilinear ? cvec(P * v.conjugate()) : cvec(P * v); }
    // J X J for a linear operator X
    cmat sandwich(const cmat& X) const { return antilinear ? cmat(P * X.conjugate() * P) : cmat(P * X * P); }
};

} // namespace

standard_form_report check_standard_form(const algebra& A, conjugation Jk, std::uint64_t seed, double tol) {
    rng_t rng(seed);
    const conj_op J{transpose_permutation(A), Jk == conjugation::adjoint};
    standard_form_report rep;
    const auto gens = vnalg::algebra::generators(A);
    const auto units = vnalg::algebra::matrix_units(A);

    // (1) J A J = A' : J λ(A) J commutes with λ(A) and has the dimension of the commutant.
    {
        double r = 0;
        std::vector<cmat> left_gens;
        for (const auto& g : gens) left_gens.push_back(left_operator(g));
        cmat span(A.dim() * A.dim(), units.size());
        for (std::size_t k = 0; k < units.size(); ++k) {
            const cmat jxj = J.sandwich(left_operator(units[k]));
            span.col(k) = numerics::vec(jxj);
            for (const auto& L : left_gens) r = std::max(r, (jxj * L - L * jxj).norm());
        }
        const auto rd = vnalg::algebra::decompose_rep(A, [&](int i, int a, int b) {
            return left_operator(element::matrix_unit(A, i, a, b));
        });
        int comm_dim = 0;
        for (int m : rd.mult) comm_dim += m * m;
        const int span_dim = static_cast<int>(numerics::range_basis(span, 1e-9).cols());
        r += std::abs(comm_dim - span_dim);
        rep.axioms.push_back({"JAJ = A'", r <= tol * 10, r});
    }
    // (2) J c J = c* for central c.
    {
        double r = 0;
        for (int trial = 0; trial < 3; ++trial) {
            element c = element::zero(A);
            for (int i = 0; i < A.num_blocks(); ++i) {
                const cplx z(numerics::random_real(-1, 1, rng), numerics::random_real(-1, 1, rng));
                c.blocks[i] = z * identity(A.block(i));
            }
            r = std::max(r, (J.sandwich(left_operator(c)) - left_operator(c.adjoint())).norm());
        }
        rep.axioms.push_back({"JcJ = c* on the center", r <= tol * 10, r});
    }
    // (3) J ξ = ξ on the positive cone.
    {
        double r = 0;
        for (int trial = 0; trial < 5; ++trial) {
            const auto phi = functional::random_positive(A, rng);
            const cvec xi = sqrt_state(phi).vec();
            r = std::max(r, (J.apply(xi) - xi).norm() / (1 + xi.norm()));
        }
        rep.axioms.push_back({"J xi = xi on the cone", r <= tol * 10, r});
    }
    // (4) a J a J (P) ⊆ P.
    {
        double r = 0;
        for (int trial = 0; trial < 5; ++trial) {
            const element a = element::random(A, rng);
            const cvec xi = sqrt_state(functional::random_positive(A, rng)).vec();
            const cmat La = left_operator(a);
            const cvec img = La * J.apply(La * J.apply(xi));
            const element e = element::from_vec(A, img);
            for (const auto& b : e.blocks) {
                const double s = 1 + b.norm();
                r = std::max(r, (b - b.adjoint()).norm() / s);
                Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (b + b.adjoint()), Eigen::EigenvaluesOnly);
                r = std::max(r, std::max(0.0, -es.eigenvalues().minCoeff()) / s);
            }
        }
        rep.axioms.push_back({"aJaJ(P) in P", r <= tol * 10, r});
    }
    // (5) ξ a = J a* J ξ.
    {
        double r = 0;
        for (int trial = 0; trial < 5; ++trial) {
            const element a = element::random(A, rng);
            const cvec xi = l2_vector::random(A, rng).vec();
            const cvec lhs = right_operator(a) * xi;
            const cvec rhs = J.apply(left_operator(a.adjoint()) * J.apply(xi));
            r = std::max(r, (lhs - rhs).norm() / (1 + lhs.norm()));
        }
        rep.axioms.push_back({"xi a = J a* J xi", r <= tol * 10, r});
    }
    return rep;
}

corner_map l2_corner(const algebra& A, const element& p, double tol) {
    corner_map out{vnalg::algebra::corner(A, p, tol), {}};
    const algebra& C = out.corner.alg;
    out.matrix = cmat::Zero(A.dim(), C.dim());
    int col = 0;
    for (const auto& e : vnalg::algebra::matrix_units(C)) out.matrix.col(col++) = out.corner.embed(e).vec();
    return out;
}

} // namespace vnalg::l2
