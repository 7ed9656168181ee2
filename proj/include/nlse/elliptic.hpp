#pragma once

#include <vector>

namespace nlse {

/**
 * Parameter of the Jacobi elliptic functions and complete integrals.
 *
 * Convention: this is the PARAMETER m (as in cn(u | m)), not the modulus
 * k = sqrt(m). Every routine in this header uses that convention.
 *
 * The complementary parameter mc = 1 - m is stored alongside m. Callers
 * that can compute mc without cancellation (m very close to 1) should use
 * from_complement(); the value is then carried exactly into the AGM.
 */
class EllipticParameter {
 public:
  /// Throws DomainError unless 0 <= m <= 1.
  explicit EllipticParameter(double m);

  /// Builds from mc = 1 - m. Throws DomainError unless 0 <= mc <= 1.
  static EllipticParameter from_complement(double mc);

  double m() const noexcept { return m_; }
  double complement() const noexcept { return mc_; }

 private:
  EllipticParameter(double m, double mc) : m_(m), mc_(mc) {}

  double m_;
  double mc_;
};

/// Complete elliptic integral of the first kind via the AGM.
/// Throws DivergenceError at m = 1.
double complete_elliptic_K(EllipticParameter p);
double complete_elliptic_K(double m);

struct JacobiValues {
  double sn;
  double cn;
  double dn;
};

/// sn, cn, dn from one descending-Landen (AGM) sweep.
/// Throws DomainError for non-finite u.
JacobiValues jacobi_elliptic(double u, EllipticParameter p);
JacobiValues jacobi_elliptic(double u, double m);

double jacobi_cn(double u, EllipticParameter p);
double jacobi_cn(double u, double m);

/// First n positive zeros of cn(., m): (2k+1) K(m), k = 0..n-1.
/// Throws DivergenceError at m = 1 (cn = sech has no zeros).
std::vector<double> cn_zeros(EllipticParameter p, int n);

}  // namespace nlse
