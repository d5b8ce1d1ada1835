#include "ncsopt/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ncsopt/error.hpp"

namespace ncsopt::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_square(const Matrix& a, std::string_view what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

double sign_of(double magnitude, double reference) {
  return reference >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude);
}

// Householder reduction to upper Hessenberg form, in place.
void reduce_to_hessenberg(Matrix& h) {
  const Eigen::Index n = h.rows();
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index len = n - k - 1;
    Vector v = h.block(k + 1, k, len, 1);
    const double norm = v.norm();
    if (norm == 0.0) continue;
    const double alpha = -sign_of(norm, v(0));
    v(0) -= alpha;
    const double vnorm = v.norm();
    if (vnorm == 0.0) continue;
    v /= vnorm;
    // H <- (I - 2 v v^T) H (I - 2 v v^T) restricted to the trailing block.
    auto rows = h.bottomRows(len);
    rows.noalias() -= 2.0 * v * (v.transpose() * rows);
    auto cols = h.rightCols(len);
    cols.noalias() -= 2.0 * (cols * v) * v.transpose();
    h.block(k + 2, k, len - 1, 1).setZero();
  }
}

// Francis double-shift QR on an upper Hessenberg matrix (EISPACK hqr layout).
std::vector<std::complex<double>> hessenberg_eigenvalues(Matrix a, int max_its) {
  const int n = static_cast<int>(a.rows());
  std::vector<std::complex<double>> w(static_cast<std::size_t>(n));
  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));

  int nn = n - 1;
  double t = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l = 0;
    do {
      for (l = nn; l > 0; --l) {
        double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) <= kEps * s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      double x = a(nn, nn);
      if (l == nn) {
        w[static_cast<std::size_t>(nn)] = x + t;
        --nn;
      } else {
        double y = a(nn - 1, nn - 1);
        double ww = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {
          const double p = 0.5 * (y - x);
          const double q = p * p + ww;
          double z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + sign_of(z, p);
            w[static_cast<std::size_t>(nn - 1)] = w[static_cast<std::size_t>(nn)] = x + z;
            if (z != 0.0) w[static_cast<std::size_t>(nn)] = x - ww / z;
          } else {
            w[static_cast<std::size_t>(nn)] = {x + p, -z};
            w[static_cast<std::size_t>(nn - 1)] = {x + p, z};
          }
          nn -= 2;
        } else {
          if (its >= max_its) {
            throw NumericalFailure("eigenvalues: QR iteration did not converge");
          }
          if (its > 0 && its % 10 == 0) {
            // Exceptional shift.
            t += x;
            for (int i = 0; i <= nn; ++i) a(i, i) -= x;
            const double s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
            y = x = 0.75 * s;
            ww = -0.4375 * s * s;
          }
          ++its;
          int m = nn - 2;
          double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
          for (; m >= l; --m) {
            z = a(m, m);
            r = x - z;
            double s = y - z;
            p = (r * s - ww) / a(m + 1, m) + a(m, m + 1);
            q = a(m + 1, m + 1) - z - r - s;
            r = a(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v =
                std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
            if (u <= kEps * v) break;
          }
          for (int i = m; i < nn - 1; ++i) {
            a(i + 2, i) = 0.0;
            if (i != m) a(i + 2, i - 1) = 0.0;
          }
          for (int k = m; k < nn; ++k) {
            if (k != m) {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = (k + 1 != nn) ? a(k + 2, k - 1) : 0.0;
              x = std::abs(p) + std::abs(q) + std::abs(r);
              if (x != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            const double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
            if (s == 0.0) continue;
            if (k == m) {
              if (l != m) a(k, k - 1) = -a(k, k - 1);
            } else {
              a(k, k - 1) = -s * x;
            }
            p += s;
            x = p / s;
            y = q / s;
            z = r / s;
            q /= p;
            r /= p;
            for (int j = k; j <= nn; ++j) {
              p = a(k, j) + q * a(k + 1, j);
              if (k + 1 != nn) {
                p += r * a(k + 2, j);
                a(k + 2, j) -= p * z;
              }
              a(k + 1, j) -= p * y;
              a(k, j) -= p * x;
            }
            const int mmin = nn < k + 3 ? nn : k + 3;
            for (int i = l; i <= mmin; ++i) {
              p = x * a(i, k) + y * a(i, k + 1);
              if (k + 1 != nn) {
                p += z * a(i, k + 2);
                a(i, k + 2) -= p * r;
              }
              a(i, k + 1) -= p * q;
              a(i, k) -= p;
            }
          }
        }
      }
    } while (l + 1 < nn);
  }
  return w;
}

Matrix symmetrized_checked(const Matrix& s, const Tolerances& tol) {
  require_square(s, "sym_eig");
  require_finite(s, "sym_eig");
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  const double asym = (s - s.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol.symmetry * scale) {
    throw DomainError("sym_eig: matrix is not symmetric (max asymmetry " + std::to_string(asym) +
                      ")");
  }
  return 0.5 * (s + s.transpose());
}

}  // namespace

void require_finite(const Matrix& m, std::string_view what) {
  if (m.size() == 0) throw DimensionError(std::string(what) + ": empty matrix");
  if (!m.allFinite()) throw DomainError(std::string(what) + ": non-finite entry");
}

Matrix mat_exp(const Matrix& a, double t) {
  require_square(a, "mat_exp");
  if (!std::isfinite(t)) throw DomainError("mat_exp: non-finite time");
  require_finite(a, "mat_exp");

  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  Matrix x = a * t;
  const double norm1 = x.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    x /= std::ldexp(1.0, squarings);
  }

  const Eigen::Index n = x.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix x2 = x * x;
  const Matrix x4 = x2 * x2;
  const Matrix x6 = x4 * x2;
  const Matrix u_inner = x6 * (b[13] * x6 + b[11] * x4 + b[9] * x2) + b[7] * x6 + b[5] * x4 +
                         b[3] * x2 + b[1] * id;
  const Matrix u = x * u_inner;
  const Matrix v = x6 * (b[12] * x6 + b[10] * x4 + b[8] * x2) + b[6] * x6 + b[4] * x4 +
                   b[2] * x2 + b[0] * id;
  Matrix r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) r = r * r;
  if (!r.allFinite()) throw NumericalFailure("mat_exp: overflow");
  return r;
}

std::vector<std::complex<double>> eigenvalues(const Matrix& a, const Tolerances& tol) {
  require_square(a, "eigenvalues");
  require_finite(a, "eigenvalues");
  if (a.rows() == 1) return {a(0, 0)};
  Matrix h = a;
  reduce_to_hessenberg(h);
  return hessenberg_eigenvalues(std::move(h),
                                tol.qr_iterations_per_eigenvalue * static_cast<int>(a.rows()));
}

double spectral_radius(const Matrix& a, const Tolerances& tol) {
  double rho = 0.0;
  for (const auto& lambda : eigenvalues(a, tol)) rho = std::max(rho, std::abs(lambda));
  return rho;
}

SymmetricEigen sym_eig(const Matrix& s, const Tolerances& tol) {
  Matrix a = symmetrized_checked(s, tol);
  const Eigen::Index n = a.rows();
  Matrix v = Matrix::Identity(n, n);

  const double total = a.squaredNorm();
  bool converged = (n == 1);
  for (int sweep = 0; sweep < tol.jacobi_max_sweeps && !converged; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off <= kEps * kEps * total) {
      converged = true;
      break;
    }
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double tt =
            (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(tt * tt + 1.0);
        const double sn = tt * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }
  if (!converged) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    // Accept tiny residual coupling; otherwise report failure.
    if (off > 1e-20 * total) {
      throw NumericalFailure("sym_eig: Jacobi sweeps did not converge");
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });
  SymmetricEigen out{Vector(n), Matrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index src = order[static_cast<std::size_t>(i)];
    out.values(i) = a(src, src);
    out.vectors.col(i) = v.col(src);
  }
  return out;
}

double min_eigenvalue(const Matrix& s, const Tolerances& tol) {
  return sym_eig(s, tol).values(0);
}

double max_eigenvalue(const Matrix& s, const Tolerances& tol) {
  const auto e = sym_eig(s, tol);
  return e.values(e.values.size() - 1);
}

Matrix clamp_spectrum(const Matrix& s, double lo, double hi, const Tolerances& tol) {
  const auto e = sym_eig(s, tol);
  const Vector clamped = e.values.cwiseMax(lo).cwiseMin(hi);
  Matrix out = e.vectors * clamped.asDiagonal() * e.vectors.transpose();
  return 0.5 * (out + out.transpose());
}

Matrix psd_project(const Matrix& s, const Tolerances& tol) {
  return clamp_spectrum(s, 0.0, std::numeric_limits<double>::infinity(), tol);
}

}  // namespace ncsopt::numerics
