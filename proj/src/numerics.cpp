// numerics.cpp — spectral calculus, polar decomposition, null spaces

#include "vnalg/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>

namespace vnalg::numerics {

namespace {

void require_finite(const cmat& m, const char* where) {
    if (!m.allFinite()) throw error("NonFinite", std::string(where) + ": matrix has NaN/Inf entries");
}

} // namespace

eig_decomposition hermitian_eig(const cmat& m, double tol) {
    if (m.rows() != m.cols()) throw error("NotHermitian", "hermitian_eig: matrix not square");
    require_finite(m, "hermitian_eig");
    const double nrm = m.norm();
    if ((m - m.adjoint()).norm() > tol * std::max(nrm, 1e-300) && nrm > 0)
        throw error("NotHermitian", "hermitian_eig: |m - m*| exceeds tolerance");
    eig_decomposition out;
    if (m.rows() == 0) return out;
    const cmat h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<cmat> es(h);
    if (es.info() != Eigen::Success) throw error("NoConvergence", "hermitian_eig: eigen solver failed");
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
    return out;
}

cmat matrix_power(const cmat& m, cplx z, double tol) {
    const auto ed = hermitian_eig(m, std::max(tol, 1e-12));
    const Eigen::Index n = m.rows();
    if (n == 0) return m;
    const double lmax = std::max(ed.values.maxCoeff(), 0.0);
    const double cut = tol * std::max(lmax, 1e-300);
    if (ed.values.minCoeff() < -tol * std::max(lmax, 1.0))
        throw error("NotPSD", "matrix_power: negative eigenvalue " + std::to_string(ed.values.minCoeff()));
    cvec d(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double l = ed.values(k);
        if (l <= cut || lmax == 0.0) d(k) = (z == cplx(0.0) && l > cut) ? 1.0 : 0.0;
        else d(k) = std::exp(z * std::log(l));
    }
    return ed.vectors * d.asDiagonal() * ed.vectors.adjoint();
}

polar_result polar_decompose(const cmat& m, double tol) {
    require_finite(m, "polar_decompose");
    polar_result out;
    const Eigen::Index r = m.rows(), c = m.cols();
    if (r == 0 || c == 0) {
        out.isometry = cmat::Zero(r, c);
        out.positive = cmat::Zero(c, c);
        return out;
    }
    Eigen::JacobiSVD<cmat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const rvec s = svd.singularValues();
    const double smax = s.size() ? s(0) : 0.0;
    const cmat& U = svd.matrixU();
    const cmat& V = svd.matrixV();
    out.positive = cmat::Zero(c, c);
    out.isometry = cmat::Zero(r, c);
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        out.positive += s(k) * V.col(k) * V.col(k).adjoint();
        if (s(k) > tol * smax) out.isometry += U.col(k) * V.col(k).adjoint();
    }
    return out;
}

cmat null_space(const cmat& m, double tol) {
    require_finite(m, "null_space");
    const Eigen::Index c = m.cols();
    if (c == 0) return cmat(0, 0);
    if (m.rows() == 0) return identity(c);
    Eigen::JacobiSVD<cmat> svd(m, Eigen::ComputeFullV);  // BDCSVD in Eigen 3.4.0 misreports ranks
    const rvec s = svd.singularValues();
    const double smax = s.size() ? s(0) : 0.0;
    if (smax == 0.0) return identity(c);
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) > tol * smax) ++rank;
    return svd.matrixV().rightCols(c - rank);
}

cmat range_basis(const cmat& m, double tol) {
    const Eigen::Index r = m.rows();
    if (r == 0 || m.cols() == 0) return cmat(r, 0);
    Eigen::JacobiSVD<cmat> svd(m, Eigen::ComputeThinU);
    const rvec s = svd.singularValues();
    const double smax = s.size() ? s(0) : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) > tol * smax) ++rank;
    if (smax == 0.0) rank = 0;
    return svd.matrixU().leftCols(rank);
}

cmat psd_pinv(const cmat& m, double tol) {
    return matrix_power(m, cplx(-1.0), tol);
}

double hermitian_residual(const cmat& m) { return (m - m.adjoint()).norm(); }

double unitary_residual(const cmat& u) {
    if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
    const cmat I = identity(u.rows());
    return (u.adjoint() * u - I).norm() + (u * u.adjoint() - I).norm();
}

double isometry_residual(const cmat& v) {
    return (v.adjoint() * v - identity(v.cols())).norm();
}

double rel_diff(const cmat& a, const cmat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return std::numeric_limits<double>::infinity();
    return (a - b).norm() / (1.0 + b.norm());
}

cmat kron(const cmat& a, const cmat& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

cmat direct_sum(const std::vector<cmat>& blocks) {
    Eigen::Index r = 0, c = 0;
    for (const auto& b : blocks) { r += b.rows(); c += b.cols(); }
    cmat out = cmat::Zero(r, c);
    r = c = 0;
    for (const auto& b : blocks) {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows(); c += b.cols();
    }
    return out;
}

cmat identity(Eigen::Index n) { return cmat::Identity(n, n); }

cvec vec(const cmat& m) {
    cvec v(m.size());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
    return v;
}

cmat unvec(const cvec& v, Eigen::Index rows, Eigen::Index cols) {
    if (v.size() != rows * cols) throw error("DimensionMismatch", "unvec: size mismatch");
    cmat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = v(i * cols + j);
    return m;
}

cmat random_matrix(Eigen::Index rows, Eigen::Index cols, rng_t& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    cmat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
            const double re = g(rng), im = g(rng);
            m(i, j) = cplx(re, im);
        }
    return m;
}

cmat random_hermitian(Eigen::Index n, rng_t& rng) {
    const cmat a = random_matrix(n, n, rng);
    return 0.5 * (a + a.adjoint());
}

cmat random_psd(Eigen::Index n, Eigen::Index rank, rng_t& rng) {
    const cmat a = random_matrix(n, rank, rng);
    return a * a.adjoint();
}

cmat random_pd(Eigen::Index n, rng_t& rng) {
    return random_psd(n, n, rng) + 0.1 * identity(n);
}

cmat random_unitary(Eigen::Index n, rng_t& rng) {
    if (n == 0) return cmat(0, 0);
    const cmat a = random_matrix(n, n, rng);
    Eigen::HouseholderQR<cmat> qr(a);
    cmat q = qr.householderQ();
    const cmat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < n; ++k) {
        const cplx d = r(k, k);
        if (std::abs(d) > 0) q.col(k) *= d / std::abs(d);
    }
    return q;
}

cvec random_unit_vector(Eigen::Index n, rng_t& rng) {
    cvec v = random_matrix(n, 1, rng).col(0);
    return v / v.norm();
}

int random_int(int lo, int hi, rng_t& rng) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(rng);
}

double random_real(double lo, double hi, rng_t& rng) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng);
}

} // namespace vnalg::numerics
