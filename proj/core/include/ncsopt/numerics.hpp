#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ncsopt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace numerics {

/// Tolerances used by the dense kernels. Defaults are the module constants;
/// tests may override them.
struct Tolerances {
  /// Max |S(i,j) - S(j,i)| accepted by sym_eig, relative to max(1, max|S|).
  double symmetry = 1e-12;
  /// Francis QR iterations allowed per eigenvalue before giving up.
  int qr_iterations_per_eigenvalue = 60;
  /// Cyclic Jacobi sweeps allowed before giving up.
  int jacobi_max_sweeps = 100;
};

/// Throws DomainError if any entry is NaN or infinite, or if the matrix is empty.
void require_finite(const Matrix& m, std::string_view what);

/// exp(A t) by scaling and squaring with a degree-13 Pade approximant.
Matrix mat_exp(const Matrix& a, double t);

/// All eigenvalues of a real square matrix (Householder Hessenberg reduction
/// followed by Francis double-shift QR). Complex pairs are returned adjacent.
std::vector<std::complex<double>> eigenvalues(const Matrix& a, const Tolerances& tol = {});

/// max |lambda| over the spectrum of `a`.
double spectral_radius(const Matrix& a, const Tolerances& tol = {});

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // column i pairs with values(i); orthonormal
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
SymmetricEigen sym_eig(const Matrix& s, const Tolerances& tol = {});

/// Smallest and largest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Matrix& s, const Tolerances& tol = {});
double max_eigenvalue(const Matrix& s, const Tolerances& tol = {});

/// Clamp the spectrum of a symmetric matrix into [lo, hi] and reconstruct.
/// This is the Frobenius projection onto {X : lo I <= X <= hi I}.
Matrix clamp_spectrum(const Matrix& s, double lo, double hi, const Tolerances& tol = {});

/// Nearest positive-semidefinite matrix in the Frobenius norm.
Matrix psd_project(const Matrix& s, const Tolerances& tol = {});

}  // namespace numerics
}  // namespace ncsopt
