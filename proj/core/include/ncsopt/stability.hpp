#pragma once

#include <optional>
#include <vector>

#include "ncsopt/gain_schedule.hpp"
#include "ncsopt/plant.hpp"

namespace ncsopt {

/// Gamma(k+1) = Phi_sigma Gamma(k), Gamma = [x(k); x(k-1); ...; x(k-M+1)].
///
/// Phi_1 has F + G K_1 in block (1,1). Phi_z for z >= 2 has F in block (1,1)
/// and G K_z in block (1,z). Every Phi carries identity blocks on the first
/// block sub-diagonal, which shift the state history down.
struct SwitchedClosedLoop {
  std::vector<Matrix> phis;
  Eigen::Index order = 0;
  int max_drop = 0;

  Eigen::Index size() const { return order * max_drop; }
};

SwitchedClosedLoop build_switched(const DiscretePlant& plant, const GainSchedule& gains);

std::vector<double> spectral_radii(const SwitchedClosedLoop& loop);

/// True iff every Phi_i is Schur (spectral radius < 1). Necessary for the
/// coupled LMIs (take i = j).
bool schur_precheck(const SwitchedClosedLoop& loop);

/// max over every mode product Phi_{i_L} ... Phi_{i_1} of length 1..max_length
/// of rho(product)^(1/L). A lower bound on the joint spectral radius: when it
/// reaches 1 some switching sequence diverges and no certificate exists.
double switching_radius_bound(const SwitchedClosedLoop& loop, int max_length = 3);

/// P_1..P_M with lambda_min(P_i) >= margin and
/// lambda_max(Phi_i^T P_j Phi_i - P_i) <= -margin for every (i, j).
struct LyapunovCertificate {
  std::vector<Matrix> p;
  double margin = 0.0;
  int iterations = 0;
};

struct CertifyOptions {
  double margin = 1e-6;       // epsilon in the certificate
  int budget = 5000;          // Douglas-Rachford iterations
  double upper_bound = 1e6;   // tau: P_i <= tau I in the returned certificate
  double working_margin = 1e-4;  // margin targeted inside the normalized search (P_i <= I)
  int check_interval = 5;     // iterations between candidate verifications
  int product_length = 3;     // longest mode product in the necessary-condition precheck
};

struct CertifyResult {
  std::optional<LyapunovCertificate> certificate;
  int iterations = 0;
  bool schur_rejected = false;
  /// Some mode is Schur but a short mode product is not (see switching_radius_bound).
  bool switching_rejected = false;

  bool certified() const { return certificate.has_value(); }
};

/// Searches for a certificate by Douglas-Rachford splitting between the cone
/// set {delta I <= P_i <= I, S_ij >= 0} and the affine coupling set
/// {S_ij = P_i - Phi_i^T P_j Phi_i - delta I}. Any returned certificate has
/// passed verify_certificate; budget exhaustion yields no certificate.
CertifyResult certify(const SwitchedClosedLoop& loop, const CertifyOptions& options = {});

/// Independent check by direct symmetric eigenvalue computation, with relative
/// slack 1e-6 on the margin. Returns false on any shape mismatch.
bool verify_certificate(const SwitchedClosedLoop& loop, const LyapunovCertificate& cert);

struct CertificateMargins {
  std::vector<double> p_min;  // lambda_min(P_i)
  Matrix decrease_max;        // (i, j) -> lambda_max(Phi_i^T P_j Phi_i - P_i)
};

CertificateMargins certificate_margins(const SwitchedClosedLoop& loop,
                                       const std::vector<Matrix>& p);

}  // namespace ncsopt
