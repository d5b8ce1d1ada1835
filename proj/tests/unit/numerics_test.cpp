#include <cmath>
#include <random>

#include <gtest/gtest.h>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "ncsopt/error.hpp"
#include "ncsopt/numerics.hpp"

namespace {

using ncsopt::Matrix;
using ncsopt::Vector;
namespace nm = ncsopt::numerics;

Matrix random_matrix(std::mt19937_64& gen, int n, double scale) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = scale * u(gen);
  return m;
}

double rel_err(const Matrix& a, const Matrix& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

TEST(MatExp, ZeroGivesIdentity) {
  EXPECT_TRUE(nm::mat_exp(Matrix::Zero(2, 2), 1.0).isApprox(Matrix::Identity(2, 2), 1e-15));
}

TEST(MatExp, DiagonalExponentiatesEntries) {
  Matrix a = Eigen::Vector2d(1.0, -2.0).asDiagonal();
  const Matrix e = nm::mat_exp(a, 1.0);
  EXPECT_NEAR(e(0, 0), std::exp(1.0), 1e-14);
  EXPECT_NEAR(e(1, 1), std::exp(-2.0), 1e-15);
  EXPECT_EQ(e(0, 1), 0.0);
  EXPECT_EQ(e(1, 0), 0.0);
}

TEST(MatExp, NilpotentSeriesTruncates) {
  Matrix a(2, 2);
  a << 0, 1, 0, 0;
  Matrix want(2, 2);
  want << 1, 0.3, 0, 1;
  EXPECT_LT((nm::mat_exp(a, 0.3) - want).norm(), 1e-15);
}

TEST(MatExp, MatchesEigenReferenceUpToNorm100) {
  std::mt19937_64 gen(11);
  for (double scale : {0.01, 0.5, 3.0, 10.0, 25.0}) {
    for (int trial = 0; trial < 10; ++trial) {
      const Matrix a = random_matrix(gen, 4, scale);
      if ((a).lpNorm<1>() > 100.0) continue;
      const Matrix want = a.exp();
      EXPECT_LT(rel_err(nm::mat_exp(a, 1.0), want), 1e-10) << "scale " << scale;
    }
  }
}

TEST(MatExp, RejectsBadInput) {
  EXPECT_THROW(nm::mat_exp(Matrix::Zero(2, 3), 1.0), ncsopt::DimensionError);
  Matrix nan = Matrix::Zero(2, 2);
  nan(0, 1) = std::nan("");
  EXPECT_THROW(nm::mat_exp(nan, 1.0), ncsopt::DomainError);
  EXPECT_THROW(nm::mat_exp(Matrix::Zero(2, 2), INFINITY), ncsopt::DomainError);
}

TEST(SpectralRadius, SmallCases) {
  EXPECT_NEAR(nm::spectral_radius(Matrix::Identity(3, 3)), 1.0, 1e-15);
  Matrix nil(2, 2);
  nil << 0, 1, 0, 0;
  EXPECT_NEAR(nm::spectral_radius(nil), 0.0, 1e-15);
  Matrix rot(2, 2);
  rot << 0.5, -0.5, 0.5, 0.5;
  EXPECT_NEAR(nm::spectral_radius(rot), 0.70710678118654752, 1e-12);
}

TEST(Eigenvalues, CompanionMatrixRoots) {
  // x^3 - 6x^2 + 11x - 6 = (x-1)(x-2)(x-3)
  Matrix c(3, 3);
  c << 6, -11, 6, 1, 0, 0, 0, 1, 0;
  auto ev = nm::eigenvalues(c);
  std::vector<double> re;
  for (auto z : ev) {
    EXPECT_NEAR(z.imag(), 0.0, 1e-10);
    re.push_back(z.real());
  }
  std::sort(re.begin(), re.end());
  EXPECT_NEAR(re[0], 1.0, 1e-9);
  EXPECT_NEAR(re[1], 2.0, 1e-9);
  EXPECT_NEAR(re[2], 3.0, 1e-9);
}

TEST(Eigenvalues, MatchEigenSolverOnRandomMatrices) {
  std::mt19937_64 gen(5);
  for (int n : {1, 2, 3, 6, 12, 32}) {
    for (int trial = 0; trial < 5; ++trial) {
      const Matrix a = random_matrix(gen, n, 1.0);
      Eigen::EigenSolver<Matrix> ref(a, false);
      const double want = ref.eigenvalues().cwiseAbs().maxCoeff();
      EXPECT_NEAR(nm::spectral_radius(a), want, 1e-8 * want) << "n = " << n;
      EXPECT_EQ(nm::eigenvalues(a).size(), static_cast<std::size_t>(n));
    }
  }
}

TEST(Eigenvalues, IterationCapRaisesNumericalFailure) {
  std::mt19937_64 gen(1);
  nm::Tolerances tol;
  tol.qr_iterations_per_eigenvalue = 0;
  EXPECT_THROW(nm::eigenvalues(random_matrix(gen, 6, 1.0), tol), ncsopt::NumericalFailure);
}

TEST(SymEig, SmallCases) {
  auto id = nm::sym_eig(Matrix::Identity(2, 2));
  EXPECT_NEAR(id.values(0), 1.0, 1e-15);
  EXPECT_NEAR(id.values(1), 1.0, 1e-15);
  Matrix d = Eigen::Vector2d(-3.0, 5.0).asDiagonal();
  auto dd = nm::sym_eig(d);
  EXPECT_NEAR(dd.values(0), -3.0, 1e-15);
  EXPECT_NEAR(dd.values(1), 5.0, 1e-15);
  Matrix s(2, 2);
  s << 2, 1, 1, 2;
  auto ss = nm::sym_eig(s);
  EXPECT_NEAR(ss.values(0), 1.0, 1e-14);
  EXPECT_NEAR(ss.values(1), 3.0, 1e-14);
}

TEST(SymEig, MatchesSelfAdjointSolverAndReconstructs) {
  std::mt19937_64 gen(9);
  for (int n : {1, 2, 5, 6, 16, 64}) {
    Matrix a = random_matrix(gen, n, 2.0);
    a = 0.5 * (a + a.transpose()).eval();
    const auto eig = nm::sym_eig(a);
    Eigen::SelfAdjointEigenSolver<Matrix> ref(a);
    EXPECT_LT((eig.values - ref.eigenvalues()).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, a.norm()));
    for (int i = 1; i < n; ++i) EXPECT_LE(eig.values(i - 1), eig.values(i));
    const Matrix back = eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose();
    EXPECT_LT((back - a).norm(), 1e-9 * a.norm());
    EXPECT_LT((eig.vectors.transpose() * eig.vectors - Matrix::Identity(n, n)).norm(), 1e-9);
  }
}

TEST(SymEig, RejectsAsymmetricInput) {
  Matrix a(2, 2);
  a << 1, 2, 2.001, 1;
  EXPECT_THROW(nm::sym_eig(a), ncsopt::DomainError);
  nm::Tolerances loose;
  loose.symmetry = 1e-2;
  EXPECT_NO_THROW(nm::sym_eig(a, loose));
}

TEST(SymEig, SweepCapRaisesNumericalFailure) {
  Matrix s(2, 2);
  s << 2, 1, 1, 2;
  nm::Tolerances tol;
  tol.jacobi_max_sweeps = 0;
  EXPECT_THROW(nm::sym_eig(s, tol), ncsopt::NumericalFailure);
}

TEST(PsdProject, Cases) {
  Matrix psd(2, 2);
  psd << 2, 1, 1, 2;
  EXPECT_LT((nm::psd_project(psd) - psd).norm(), 1e-12);
  Matrix d = Eigen::Vector2d(1.0, -2.0).asDiagonal();
  Matrix want = Eigen::Vector2d(1.0, 0.0).asDiagonal();
  EXPECT_LT((nm::psd_project(d) - want).norm(), 1e-12);
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  Matrix half = Matrix::Constant(2, 2, 0.5);
  EXPECT_LT((nm::psd_project(x) - half).norm(), 1e-12);
}

TEST(ClampSpectrum, BoundsEigenvalues) {
  std::mt19937_64 gen(3);
  Matrix a = random_matrix(gen, 6, 3.0);
  a = 0.5 * (a + a.transpose()).eval();
  const auto c = nm::clamp_spectrum(a, 0.1, 1.0);
  Eigen::SelfAdjointEigenSolver<Matrix> ref(c);
  EXPECT_GE(ref.eigenvalues().minCoeff(), 0.1 - 1e-12);
  EXPECT_LE(ref.eigenvalues().maxCoeff(), 1.0 + 1e-12);
}

}  // namespace
