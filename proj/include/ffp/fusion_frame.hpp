#pragma once

#include "ffp/subspace.hpp"

#include <string>
#include <vector>

namespace ffp {

struct WeightedItem {
  Subspace subspace;
  double weight = 1.0;
};

/// The weighted family (W_i, w_i), all subspaces in one ambient space.
struct WeightedFamily {
  Index ambient_dim = 0;
  std::vector<WeightedItem> items;
};

enum class FrameClass { fusion_frame, fusion_frame_sequence, degenerate };

inline const char* to_string(FrameClass c) {
  switch (c) {
    case FrameClass::fusion_frame: return "fusion_frame";
    case FrameClass::fusion_frame_sequence: return "fusion_frame_sequence";
    default: return "degenerate";
  }
}

struct FrameAnalysis {
  double lower = 0.0;
  double upper = 0.0;
  Index span_dim = 0;
  FrameClass classification = FrameClass::degenerate;
};

inline void validate_family(const WeightedFamily& f) {
  if (f.items.empty()) throw std::invalid_argument("weighted family is empty");
  for (const auto& item : f.items) {
    if (item.subspace.ambient_dim() != f.ambient_dim) {
      throw std::invalid_argument("family items live in different ambient spaces");
    }
    if (!(item.weight > 0.0) || !std::isfinite(item.weight)) {
      throw std::invalid_argument("weights must be positive and finite");
    }
  }
}

inline Index total_block_dim(const WeightedFamily& f) {
  Index total = 0;
  for (const auto& item : f.items) total += item.subspace.dim();
  return total;
}

/// Block-column matrix [w_1 B_1 | w_2 B_2 | ...]; its domain realizes the
/// direct sum of the W_i, the i-th block being the canonical copy E_i of W_i.
inline Mat synthesis_matrix(const WeightedFamily& f) {
  validate_family(f);
  Mat s(f.ambient_dim, total_block_dim(f));
  Index col = 0;
  for (const auto& item : f.items) {
    const Index k = item.subspace.dim();
    s.middleCols(col, k) = item.weight * item.subspace.basis();
    col += k;
  }
  return s;
}

inline Mat analysis_matrix(const WeightedFamily& f) { return synthesis_matrix(f).adjoint(); }

/// S = sum_i w_i^2 P_{W_i}, Hermitian positive semidefinite.
inline Mat frame_operator(const WeightedFamily& f) {
  validate_family(f);
  Mat s = Mat::Zero(f.ambient_dim, f.ambient_dim);
  for (const auto& item : f.items) {
    s += (item.weight * item.weight) * projector(item.subspace);
  }
  return (s + s.adjoint()) / 2.0;
}

/// Optimal bounds on the span of the family: extreme eigenvalues of the
/// frame operator above the rank cutoff. span_dim = rank(S).
inline FrameAnalysis frame_bounds(const WeightedFamily& f, const ToleranceConfig& tol = {}) {
  const Mat s = frame_operator(f);
  Eigen::SelfAdjointEigenSolver<Mat> eig(s);
  if (eig.info() != Eigen::Success) throw std::runtime_error("eigensolver did not converge");
  const RealVec evals = eig.eigenvalues();  // ascending
  const Index n = f.ambient_dim;
  const double lmax = std::max(evals(n - 1), 0.0);
  const double cutoff = tol.rank_tol_factor * static_cast<double>(n) * lmax;

  FrameAnalysis out;
  Index first_above = n;
  for (Index i = 0; i < n; ++i) {
    if (evals(i) > cutoff) {
      first_above = i;
      break;
    }
  }
  out.span_dim = n - first_above;
  if (out.span_dim == 0) {
    out.classification = FrameClass::degenerate;
    return out;
  }
  out.lower = evals(first_above);
  out.upper = lmax;
  out.classification =
      out.span_dim == n ? FrameClass::fusion_frame : FrameClass::fusion_frame_sequence;
  return out;
}

}  // namespace ffp
