#pragma once

#include <Eigen/Dense>

#include <complex>
#include <limits>
#include <stdexcept>

namespace ffp {

using Scalar = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;
using Index = Eigen::Index;

/// Numerical policy shared by every rank-sensitive operation.
/// rank_tol_factor scales the singular-value cutoff sigma_max * max(m,n),
/// cmp_tol is the absolute slack used when verifying inequalities,
/// intersection_tol decides when a principal cosine counts as 1.
struct ToleranceConfig {
  double rank_tol_factor = std::numeric_limits<double>::epsilon();
  double cmp_tol = 1e-8;
  double intersection_tol = 1e-8;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline void ensure_finite(const Mat& m, const char* what = "matrix") {
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(what) + " contains non-finite entries");
  }
}

struct SvdResult {
  Mat u;          // orthonormal columns
  RealVec sigma;  // nonincreasing, nonnegative
  Mat v;          // orthonormal columns, m = u * sigma.asDiagonal() * v.adjoint()
};

inline SvdResult svd(const Mat& m, bool full = false) {
  ensure_finite(m);
  if (m.rows() == 0 || m.cols() == 0) {
    return {Mat::Identity(m.rows(), full ? m.rows() : 0), RealVec::Zero(0),
            Mat::Identity(m.cols(), full ? m.cols() : 0)};
  }
  const unsigned options = full ? (Eigen::ComputeFullU | Eigen::ComputeFullV)
                                : (Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::BDCSVD<Mat> dec(m, options);
  if (dec.info() != Eigen::Success) {
    throw std::runtime_error("SVD did not converge");
  }
  return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

inline double rank_cutoff(const RealVec& sigma, Index rows, Index cols,
                          const ToleranceConfig& tol = {}) {
  const double smax = sigma.size() > 0 ? sigma(0) : 0.0;
  return tol.rank_tol_factor * static_cast<double>(std::max(rows, cols)) * smax;
}

inline Index rank_from_singular_values(const RealVec& sigma, double cutoff) {
  Index r = 0;
  while (r < sigma.size() && sigma(r) > cutoff) ++r;
  return r;
}

inline Index numerical_rank(const Mat& m, const ToleranceConfig& tol = {}) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  const RealVec sigma = svd(m).sigma;
  return rank_from_singular_values(sigma, rank_cutoff(sigma, m.rows(), m.cols(), tol));
}

/// Moore-Penrose pseudoinverse with the shared rank policy.
inline Mat pinv(const Mat& m, const ToleranceConfig& tol = {}) {
  if (m.rows() == 0 || m.cols() == 0) return Mat::Zero(m.cols(), m.rows());
  const SvdResult dec = svd(m);
  const Index r =
      rank_from_singular_values(dec.sigma, rank_cutoff(dec.sigma, m.rows(), m.cols(), tol));
  if (r == 0) return Mat::Zero(m.cols(), m.rows());
  return dec.v.leftCols(r) * dec.sigma.head(r).cwiseInverse().asDiagonal() *
         dec.u.leftCols(r).adjoint();
}

/// Reduced minimum modulus: the smallest singular value above the rank
/// cutoff, i.e. inf ||Mx|| over unit x orthogonal to the null space.
/// The zero matrix has no such x, so the infimum over the empty set is +inf.
inline double gamma(const Mat& m, const ToleranceConfig& tol = {}) {
  if (m.rows() == 0 || m.cols() == 0) return kInfinity;
  const RealVec sigma = svd(m).sigma;
  const Index r =
      rank_from_singular_values(sigma, rank_cutoff(sigma, m.rows(), m.cols(), tol));
  if (r == 0) return kInfinity;
  return sigma(r - 1);
}

inline double operator_norm(const Mat& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  return svd(m).sigma(0);
}

}  // namespace ffp
