#pragma once

#include "ffp/numerics.hpp"

#include <algorithm>
#include <utility>

namespace ffp {

/// A closed subspace of the coordinate space C^n, stored as an orthonormal
/// basis in the columns of an n x k matrix. k = 0 is the zero subspace.
/// Two values with equal column spans are interchangeable everywhere.
class Subspace {
 public:
  static Subspace zero(Index ambient) { return Subspace(ambient, Mat::Zero(ambient, 0)); }

  static Subspace full_space(Index ambient) {
    return Subspace(ambient, Mat::Identity(ambient, ambient));
  }

  /// Wraps a matrix that is already orthonormal; validated to 1e-12.
  static Subspace from_orthonormal(Mat basis) {
    const Index n = basis.rows();
    const Index k = basis.cols();
    if (k > n) throw std::invalid_argument("basis has more columns than ambient dimension");
    ensure_finite(basis, "subspace basis");
    if (k > 0) {
      const double residual =
          (basis.adjoint() * basis - Mat::Identity(k, k)).cwiseAbs().maxCoeff();
      if (residual > 1e-12) {
        throw std::invalid_argument("basis columns are not orthonormal");
      }
    }
    return Subspace(n, std::move(basis));
  }

  Index ambient_dim() const { return ambient_; }
  Index dim() const { return basis_.cols(); }
  bool is_zero() const { return basis_.cols() == 0; }
  const Mat& basis() const { return basis_; }

 private:
  Subspace(Index ambient, Mat basis) : ambient_(ambient), basis_(std::move(basis)) {}

  Index ambient_;
  Mat basis_;

  friend Subspace from_generators(const Mat&, const ToleranceConfig&);
  friend Subspace complement(const Subspace&);
};

/// Orthonormal basis of the column span, rank decided by the shared policy.
inline Subspace from_generators(const Mat& cols, const ToleranceConfig& tol = {}) {
  const Index n = cols.rows();
  if (cols.cols() == 0) return Subspace::zero(n);
  const SvdResult dec = svd(cols);
  const Index r =
      rank_from_singular_values(dec.sigma, rank_cutoff(dec.sigma, n, cols.cols(), tol));
  return Subspace(n, dec.u.leftCols(r));
}

inline Mat projector(const Subspace& w) {
  if (w.is_zero()) return Mat::Zero(w.ambient_dim(), w.ambient_dim());
  return w.basis() * w.basis().adjoint();
}

inline Subspace complement(const Subspace& w) {
  const Index n = w.ambient_dim();
  const Index k = w.dim();
  if (k == 0) return Subspace::full_space(n);
  if (k == n) return Subspace::zero(n);
  Eigen::HouseholderQR<Mat> qr(w.basis());
  Mat q = qr.householderQ();
  return Subspace(n, q.rightCols(n - k));
}

/// Null space of a matrix, as a subspace of its domain.
inline Subspace null_space(const Mat& m, const ToleranceConfig& tol = {}) {
  const Index n = m.cols();
  if (m.rows() == 0 || n == 0) return Subspace::full_space(n);
  const SvdResult dec = svd(m, /*full=*/true);
  const Index r =
      rank_from_singular_values(dec.sigma, rank_cutoff(dec.sigma, m.rows(), n, tol));
  return Subspace::from_orthonormal(dec.v.rightCols(n - r));
}

/// Intersection via principal angles: directions whose principal cosine is
/// within intersection_tol of 1 are taken to lie in both subspaces.
inline Subspace intersect(const Subspace& m, const Subspace& n, const ToleranceConfig& tol = {}) {
  if (m.ambient_dim() != n.ambient_dim()) {
    throw std::invalid_argument("intersect: ambient dimensions differ");
  }
  if (m.is_zero() || n.is_zero()) return Subspace::zero(m.ambient_dim());
  const SvdResult dec = svd(m.basis().adjoint() * n.basis());
  Index count = 0;
  while (count < dec.sigma.size() && dec.sigma(count) >= 1.0 - tol.intersection_tol) ++count;
  if (count == 0) return Subspace::zero(m.ambient_dim());
  return Subspace::from_orthonormal(m.basis() * dec.u.leftCols(count));
}

/// M ominus N = M cap (M cap N)^perp, the part of M orthogonal to the intersection.
inline Subspace ominus(const Subspace& m, const Subspace& n, const ToleranceConfig& tol = {}) {
  const Subspace inter = intersect(m, n, tol);
  if (inter.is_zero()) return m;
  if (inter.dim() == m.dim()) return Subspace::zero(m.ambient_dim());
  Mat deflated = m.basis() - inter.basis() * (inter.basis().adjoint() * m.basis());
  // Directions of M outside the detected intersection keep deflated length
  // >= sqrt(2 * intersection_tol); anything below that is deflation roundoff.
  const SvdResult dec = svd(deflated);
  const Index r = rank_from_singular_values(
      dec.sigma, std::max(rank_cutoff(dec.sigma, deflated.rows(), deflated.cols(), tol),
                          tol.intersection_tol));
  return r == 0 ? Subspace::zero(m.ambient_dim())
                : Subspace::from_orthonormal(dec.u.leftCols(r));
}

inline Subspace image(const Mat& t, const Subspace& w, const ToleranceConfig& tol = {}) {
  if (t.cols() != w.ambient_dim()) {
    throw std::invalid_argument("image: operator domain does not match subspace");
  }
  if (w.is_zero()) return Subspace::zero(t.rows());
  return from_generators(t * w.basis(), tol);
}

/// {x : Ax in W^perp}, computed as the null space of P_W * A.
inline Subspace preimage_of_complement(const Mat& a, const Subspace& w,
                                       const ToleranceConfig& tol = {}) {
  if (a.rows() != w.ambient_dim() || a.cols() != w.ambient_dim()) {
    throw std::invalid_argument("preimage_of_complement: operator must be square of ambient dim");
  }
  return null_space(projector(w) * a, tol);
}

/// Dixmier (minimal) angle cosine ||P_M P_N||; 0 if either subspace is zero.
inline double cos_dixmier(const Subspace& m, const Subspace& n) {
  if (m.ambient_dim() != n.ambient_dim()) {
    throw std::invalid_argument("cos_dixmier: ambient dimensions differ");
  }
  if (m.is_zero() || n.is_zero()) return 0.0;
  return std::min(operator_norm(m.basis().adjoint() * n.basis()), 1.0);
}

/// Friedrichs angle cosine ||P_M P_N P_{(M cap N)^perp}||.
inline double cos_friedrichs(const Subspace& m, const Subspace& n,
                             const ToleranceConfig& tol = {}) {
  if (m.ambient_dim() != n.ambient_dim()) {
    throw std::invalid_argument("cos_friedrichs: ambient dimensions differ");
  }
  if (m.is_zero() || n.is_zero()) return 0.0;
  const Index dim = m.ambient_dim();
  const Subspace inter = intersect(m, n, tol);
  // containment: the part of the smaller space away from the intersection is
  // empty, so the angle cosine is exactly zero
  if (inter.dim() == m.dim() || inter.dim() == n.dim()) return 0.0;
  const Mat away = Mat::Identity(dim, dim) - projector(inter);
  const double value = operator_norm(projector(m) * projector(n) * away);
  return std::clamp(value, 0.0, 1.0);
}

/// Kato gap delta(M, N) = ||P_{N^perp} P_M||; asymmetric.
inline double gap(const Subspace& m, const Subspace& n) {
  return cos_dixmier(complement(n), m);
}

}  // namespace ffp
