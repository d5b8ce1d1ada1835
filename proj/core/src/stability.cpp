#include "ncsopt/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ncsopt/error.hpp"

namespace ncsopt {

namespace {

constexpr double kVerifySlack = 1e-6;

Matrix symmetric_part(const Matrix& m) { return 0.5 * (m + m.transpose()); }

Matrix decrease_matrix(const Matrix& phi_i, const Matrix& p_j, const Matrix& p_i) {
  return symmetric_part(phi_i.transpose() * p_j * phi_i - p_i);
}

// Isometric half-vectorization: off-diagonal entries carry a sqrt(2) factor so
// that Frobenius inner products are preserved.
class SymmetricCoordinates {
 public:
  explicit SymmetricCoordinates(Eigen::Index n) : n_(n), dim_(n * (n + 1) / 2) {}

  Eigen::Index dim() const { return dim_; }

  void pack(const Matrix& s, Eigen::Ref<Vector> out) const {
    Eigen::Index k = 0;
    for (Eigen::Index a = 0; a < n_; ++a) {
      out(k++) = s(a, a);
      for (Eigen::Index b = a + 1; b < n_; ++b) out(k++) = kSqrt2 * s(a, b);
    }
  }

  Matrix unpack(const Eigen::Ref<const Vector>& v) const {
    Matrix s(n_, n_);
    Eigen::Index k = 0;
    for (Eigen::Index a = 0; a < n_; ++a) {
      s(a, a) = v(k++);
      for (Eigen::Index b = a + 1; b < n_; ++b) s(a, b) = s(b, a) = v(k++) / kSqrt2;
    }
    return s;
  }

 private:
  static constexpr double kSqrt2 = 1.4142135623730950488;
  Eigen::Index n_;
  Eigen::Index dim_;
};

// Coupling operator L(P)_ij = P_i - Phi_i^T P_j Phi_i and its adjoint.
class CouplingOperator {
 public:
  explicit CouplingOperator(const SwitchedClosedLoop& loop)
      : phis_(loop.phis), m_(phis_.size()) {}

  std::vector<Matrix> apply(const std::vector<Matrix>& p) const {
    std::vector<Matrix> s;
    s.reserve(m_ * m_);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < m_; ++j)
        s.push_back(symmetric_part(p[i] - phis_[i].transpose() * p[j] * phis_[i]));
    return s;
  }

  std::vector<Matrix> adjoint(const std::vector<Matrix>& s) const {
    const Eigen::Index n = phis_.front().rows();
    std::vector<Matrix> p(m_, Matrix::Zero(n, n));
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < m_; ++j) {
        const Matrix& sij = s[i * m_ + j];
        p[i] += sij;
        p[j] -= phis_[i] * sij * phis_[i].transpose();
      }
    }
    for (auto& pk : p) pk = symmetric_part(pk);
    return p;
  }

  std::size_t modes() const { return m_; }

 private:
  const std::vector<Matrix>& phis_;
  std::size_t m_;
};

struct Iterate {
  std::vector<Matrix> p;  // M blocks
  std::vector<Matrix> s;  // M*M blocks, row-major (i, j)
};

Iterate affine_combination(double a, const Iterate& x, double b, const Iterate& y) {
  Iterate out;
  out.p.reserve(x.p.size());
  out.s.reserve(x.s.size());
  for (std::size_t k = 0; k < x.p.size(); ++k) out.p.push_back(a * x.p[k] + b * y.p[k]);
  for (std::size_t k = 0; k < x.s.size(); ++k) out.s.push_back(a * x.s[k] + b * y.s[k]);
  return out;
}

// Projection onto {S = L(P) - delta I}: minimize |P - P0|^2 + |S - S0|^2, which
// reduces to (I + L^T L) P = P0 + L^T (S0 + delta I).
class AffineProjector {
 public:
  AffineProjector(const CouplingOperator& op, Eigen::Index n, double delta)
      : op_(op), coords_(n), n_(n), delta_(delta) {
    const std::size_t m = op_.modes();
    const Eigen::Index d = coords_.dim();
    const Eigen::Index total = d * static_cast<Eigen::Index>(m);
    Matrix h(total, total);
    Vector unit = Vector::Zero(total);
    for (Eigen::Index col = 0; col < total; ++col) {
      unit.setZero();
      unit(col) = 1.0;
      const Vector image = pack_p(op_.adjoint(op_.apply(unpack_p(unit))));
      h.col(col) = image + unit;
    }
    factor_.compute(0.5 * (h + h.transpose()));
    if (factor_.info() != Eigen::Success) {
      throw NumericalFailure("certify: coupling normal matrix is not positive definite");
    }
  }

  Iterate project(const Iterate& x) const {
    const Matrix shift = delta_ * Matrix::Identity(n_, n_);
    std::vector<Matrix> s_shifted;
    s_shifted.reserve(x.s.size());
    for (const auto& s : x.s) s_shifted.push_back(s + shift);
    const std::vector<Matrix> back = op_.adjoint(s_shifted);
    std::vector<Matrix> rhs;
    rhs.reserve(x.p.size());
    for (std::size_t k = 0; k < x.p.size(); ++k) rhs.push_back(x.p[k] + back[k]);
    const Vector sol = factor_.solve(pack_p(rhs));

    Iterate out;
    out.p = unpack_p(sol);
    out.s = op_.apply(out.p);
    for (auto& s : out.s) s -= shift;
    return out;
  }

 private:
  Vector pack_p(const std::vector<Matrix>& p) const {
    const Eigen::Index d = coords_.dim();
    Vector v(d * static_cast<Eigen::Index>(p.size()));
    for (std::size_t k = 0; k < p.size(); ++k)
      coords_.pack(p[k], v.segment(static_cast<Eigen::Index>(k) * d, d));
    return v;
  }

  std::vector<Matrix> unpack_p(const Vector& v) const {
    const Eigen::Index d = coords_.dim();
    std::vector<Matrix> p;
    p.reserve(op_.modes());
    for (std::size_t k = 0; k < op_.modes(); ++k)
      p.push_back(coords_.unpack(v.segment(static_cast<Eigen::Index>(k) * d, d)));
    return p;
  }

  const CouplingOperator& op_;
  SymmetricCoordinates coords_;
  Eigen::Index n_;
  double delta_;
  Eigen::LLT<Matrix> factor_;
};

Iterate project_cones(const Iterate& x, double delta) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  Iterate out;
  out.p.reserve(x.p.size());
  out.s.reserve(x.s.size());
  for (const auto& p : x.p) out.p.push_back(numerics::clamp_spectrum(p, delta, 1.0));
  for (const auto& s : x.s) out.s.push_back(numerics::clamp_spectrum(s, 0.0, kInf));
  return out;
}

double worst_margin(const CertificateMargins& m) {
  double worst = *std::min_element(m.p_min.begin(), m.p_min.end());
  return std::min(worst, -m.decrease_max.maxCoeff());
}

}  // namespace

SwitchedClosedLoop build_switched(const DiscretePlant& plant, const GainSchedule& gains) {
  plant.validate();
  if (gains.order() != plant.order() || gains.inputs() != plant.inputs()) {
    throw ConfigError("build_switched: gain dimensions (" + std::to_string(gains.inputs()) + "x" +
                      std::to_string(gains.order()) + ") do not match the plant (" +
                      std::to_string(plant.inputs()) + "x" + std::to_string(plant.order()) + ")");
  }
  const Eigen::Index n = plant.order();
  const int depth = gains.max_drop();
  const Eigen::Index size = n * depth;

  SwitchedClosedLoop loop;
  loop.order = n;
  loop.max_drop = depth;
  for (int z = 1; z <= depth; ++z) {
    Matrix phi = Matrix::Zero(size, size);
    if (z == 1) {
      phi.topLeftCorner(n, n) = plant.f + plant.g * gains.gain(1);
    } else {
      phi.topLeftCorner(n, n) = plant.f;
      phi.block(0, (z - 1) * n, n, n) = plant.g * gains.gain(z);
    }
    for (int b = 1; b < depth; ++b) phi.block(b * n, (b - 1) * n, n, n).setIdentity();
    loop.phis.push_back(std::move(phi));
  }
  return loop;
}

std::vector<double> spectral_radii(const SwitchedClosedLoop& loop) {
  std::vector<double> out;
  out.reserve(loop.phis.size());
  for (const auto& phi : loop.phis) out.push_back(numerics::spectral_radius(phi));
  return out;
}

bool schur_precheck(const SwitchedClosedLoop& loop) {
  for (const auto& phi : loop.phis) {
    if (!(numerics::spectral_radius(phi) < 1.0)) return false;
  }
  return true;
}

double switching_radius_bound(const SwitchedClosedLoop& loop, int max_length) {
  if (loop.phis.empty()) throw ConfigError("switching_radius_bound: empty switched system");
  if (max_length < 1) throw ConfigError("switching_radius_bound: max_length must be >= 1");
  double bound = 0.0;
  std::vector<Matrix> level = loop.phis;
  for (int len = 1;; ++len) {
    for (const auto& prod : level) {
      bound = std::max(bound, std::pow(numerics::spectral_radius(prod), 1.0 / len));
    }
    if (len == max_length) break;
    std::vector<Matrix> next;
    next.reserve(level.size() * loop.phis.size());
    for (const auto& prod : level)
      for (const auto& phi : loop.phis) next.push_back(phi * prod);
    level = std::move(next);
  }
  return bound;
}

CertificateMargins certificate_margins(const SwitchedClosedLoop& loop,
                                       const std::vector<Matrix>& p) {
  const std::size_t m = loop.phis.size();
  CertificateMargins out;
  out.decrease_max.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    out.p_min.push_back(numerics::min_eigenvalue(symmetric_part(p[i])));
    for (std::size_t j = 0; j < m; ++j) {
      out.decrease_max(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          numerics::max_eigenvalue(decrease_matrix(loop.phis[i], p[j], p[i]));
    }
  }
  return out;
}

bool verify_certificate(const SwitchedClosedLoop& loop, const LyapunovCertificate& cert) {
  if (cert.p.size() != loop.phis.size() || loop.phis.empty()) return false;
  if (!(cert.margin > 0.0) || !std::isfinite(cert.margin)) return false;
  for (const auto& p : cert.p) {
    if (p.rows() != loop.size() || p.cols() != loop.size() || !p.allFinite()) return false;
  }
  try {
    for (const auto& p : cert.p) {
      // Asymmetric candidates are rejected by sym_eig.
      (void)numerics::sym_eig(p);
    }
    const CertificateMargins m = certificate_margins(loop, cert.p);
    const double need = cert.margin * (1.0 - kVerifySlack);
    for (double v : m.p_min)
      if (v < need) return false;
    return m.decrease_max.maxCoeff() <= -need;
  } catch (const Error&) {
    return false;
  }
}

CertifyResult certify(const SwitchedClosedLoop& loop, const CertifyOptions& options) {
  if (!(options.margin > 0.0)) throw ConfigError("certify: margin must be > 0");
  if (options.budget < 1) throw ConfigError("certify: budget must be >= 1");
  if (!(options.upper_bound > options.margin)) {
    throw ConfigError("certify: upper bound must exceed the margin");
  }
  if (!(options.working_margin > 0.0 && options.working_margin < 1.0)) {
    throw ConfigError("certify: working margin must be in (0, 1)");
  }
  if (loop.phis.empty()) throw ConfigError("certify: empty switched system");

  CertifyResult result;
  if (!schur_precheck(loop)) {
    result.schur_rejected = true;
    return result;
  }
  if (options.product_length > 1 && !(switching_radius_bound(loop, options.product_length) < 1.0)) {
    result.switching_rejected = true;
    return result;
  }

  const Eigen::Index n = loop.size();
  const std::size_t m = loop.phis.size();
  const double delta = options.working_margin;
  const CouplingOperator op(loop);
  const AffineProjector affine(op, n, delta);

  Iterate z;
  z.p.assign(m, 0.5 * Matrix::Identity(n, n));
  z.s = op.apply(z.p);
  for (auto& s : z.s) s -= delta * Matrix::Identity(n, n);

  const int interval = std::max(1, options.check_interval);
  for (int it = 1; it <= options.budget; ++it) {
    const Iterate cone = project_cones(z, delta);
    const Iterate reflected = affine_combination(2.0, cone, -1.0, z);
    const Iterate aff = affine.project(reflected);
    for (std::size_t k = 0; k < m; ++k) z.p[k] += aff.p[k] - cone.p[k];
    for (std::size_t k = 0; k < z.s.size(); ++k) z.s[k] += aff.s[k] - cone.s[k];

    if (it % interval != 0 && it != options.budget) continue;

    std::vector<Matrix> candidate;
    candidate.reserve(m);
    for (const auto& p : aff.p) candidate.push_back(symmetric_part(p));
    const double found = worst_margin(certificate_margins(loop, candidate));
    if (!(found > 0.0)) continue;

    // The constraints are homogeneous in P: rescale so the requested margin
    // holds with room to spare, then respect the upper bound.
    const double scale = std::max(1.0, 2.0 * options.margin / found);
    double top = 0.0;
    for (auto& p : candidate) {
      p *= scale;
      top = std::max(top, numerics::max_eigenvalue(p));
    }
    if (top > options.upper_bound) continue;

    LyapunovCertificate cert{std::move(candidate), options.margin, it};
    if (verify_certificate(loop, cert)) {
      result.iterations = it;
      result.certificate = std::move(cert);
      return result;
    }
  }
  result.iterations = options.budget;
  return result;
}

}  // namespace ncsopt
