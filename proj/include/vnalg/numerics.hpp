// numerics.hpp — dense complex linear algebra kernels (Eigen backed)

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace vnalg {

using cplx = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rvec = Eigen::VectorXd;
using imat = Eigen::MatrixXi;
using rng_t = std::mt19937_64;

// Library error: `kind` is the spec-level error name (NotHermitian, TypeError, ...).
class error : public std::runtime_error {
public:
    error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }
private:
    std::string kind_;
};

namespace tol {
constexpr double kernel = 1e-9;          // PSD / unitarity / equation residuals
constexpr double normalization = 1e-8;   // duality normalization residuals
constexpr double inner = 1e-8;           // inner-product equivalence
}

} // namespace vnalg

namespace vnalg::numerics {

struct eig_decomposition {
    rvec values;   // ascending
    cmat vectors;  // unitary, columns are eigenvectors
};

// Eigen-decomposition of a Hermitian matrix. Throws NotHermitian / NoConvergence.
eig_decomposition hermitian_eig(const cmat& m, double tol = tol::kernel);

// m^z on the support of a PSD matrix (eigenvalues <= tol*lambda_max treated as 0, 0^z := 0).
cmat matrix_power(const cmat& m, cplx z, double tol = tol::kernel);

struct polar_result {
    cmat isometry;  // partial isometry, initial space = support of positive part
    cmat positive;  // (m* m)^{1/2}
};
polar_result polar_decompose(const cmat& m, double tol = tol::kernel);

// Orthonormal basis (columns) of {v : |m v| <= tol |m|}.
cmat null_space(const cmat& m, double tol = tol::kernel);

// Orthonormal basis (columns) of the range of m.
cmat range_basis(const cmat& m, double tol = tol::kernel);

// Moore-Penrose pseudo-inverse of a Hermitian PSD matrix on its support.
cmat psd_pinv(const cmat& m, double tol = tol::kernel);

// Residuals.
double hermitian_residual(const cmat& m);
double unitary_residual(const cmat& u);   // |u* u - 1| + |u u* - 1|
double isometry_residual(const cmat& v);  // |v* v - 1|
double rel_diff(const cmat& a, const cmat& b);  // |a-b| / (1 + |b|)

cmat kron(const cmat& a, const cmat& b);
cmat direct_sum(const std::vector<cmat>& blocks);
cmat identity(Eigen::Index n);

// Row-major vectorisation of a matrix and its inverse.
cvec vec(const cmat& m);
cmat unvec(const cvec& v, Eigen::Index rows, Eigen::Index cols);

// Random generation (Gaussian entries, deterministic given the engine).
cmat random_matrix(Eigen::Index rows, Eigen::Index cols, rng_t& rng);
cmat random_hermitian(Eigen::Index n, rng_t& rng);
cmat random_psd(Eigen::Index n, Eigen::Index rank, rng_t& rng);
cmat random_pd(Eigen::Index n, rng_t& rng);
cmat random_unitary(Eigen::Index n, rng_t& rng);
cvec random_unit_vector(Eigen::Index n, rng_t& rng);
int random_int(int lo, int hi, rng_t& rng);  // inclusive
double random_real(double lo, double hi, rng_t& rng);

} // namespace vnalg::numerics
