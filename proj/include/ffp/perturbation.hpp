#pragma once

#include "ffp/fusion_frame.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace ffp {

/// Per-index quantities of the perturbation condition:
/// gamma_i = gamma(T P_{W_i}), norm_i = ||T P_{W_i}||, ratio_i = gamma_i^2 / norm_i^2.
/// Indices with norm_i = 0 (W_i inside N(T), or W_i zero) are degenerate:
/// their ratio is undefined and they are listed separately.
struct LocalQuantities {
  std::vector<double> gamma;
  std::vector<double> norm;
  std::vector<double> ratio;  // NaN at degenerate indices
  std::vector<std::size_t> degenerate;

  bool is_degenerate(std::size_t i) const {
    return std::find(degenerate.begin(), degenerate.end(), i) != degenerate.end();
  }
};

inline LocalQuantities local_quantities(const Mat& t, const WeightedFamily& f,
                                        const ToleranceConfig& tol = {}) {
  validate_family(f);
  if (t.cols() != f.ambient_dim) {
    throw std::invalid_argument("local_quantities: operator domain does not match family");
  }
  LocalQuantities q;
  for (std::size_t i = 0; i < f.items.size(); ++i) {
    const Mat tp = t * projector(f.items[i].subspace);
    const double nrm = operator_norm(tp);
    const double cutoff = tol.rank_tol_factor *
                          static_cast<double>(std::max(tp.rows(), tp.cols())) * nrm;
    q.norm.push_back(nrm);
    if (nrm <= cutoff) {
      q.gamma.push_back(kInfinity);  // gamma of the zero matrix
      q.ratio.push_back(std::numeric_limits<double>::quiet_NaN());
      q.degenerate.push_back(i);
    } else {
      const double g = gamma(tp, tol);
      q.gamma.push_back(g);
      q.ratio.push_back((g * g) / (nrm * nrm));
    }
  }
  return q;
}

/// c = min over non-degenerate indices of ratio_i; 0 when nothing remains.
inline double condition_c(const LocalQuantities& q) {
  double c = kInfinity;
  for (std::size_t i = 0; i < q.ratio.size(); ++i) {
    if (!q.is_degenerate(i)) c = std::min(c, q.ratio[i]);
  }
  return std::isfinite(c) ? c : 0.0;
}

enum class WeightStrategy { geometric_mid, lower_edge, upper_edge };

inline const char* to_string(WeightStrategy s) {
  switch (s) {
    case WeightStrategy::geometric_mid: return "geometric_mid";
    case WeightStrategy::lower_edge: return "lower_edge";
    default: return "upper_edge";
  }
}

inline std::optional<WeightStrategy> parse_strategy(const std::string& s) {
  if (s == "geometric_mid") return WeightStrategy::geometric_mid;
  if (s == "lower_edge") return WeightStrategy::lower_edge;
  if (s == "upper_edge") return WeightStrategy::upper_edge;
  return std::nullopt;
}

/// Thrown when the hypothesis A/B <= c of the weight construction fails;
/// carries the first index witnessing the failure.
class hypothesis_error : public std::runtime_error {
 public:
  hypothesis_error(std::size_t index, const std::string& what)
      : std::runtime_error(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// Admissible weight window [w_i ||TP_{W_i}|| / sqrt(B), w_i gamma(TP_{W_i}) / sqrt(A)]
/// per index, plus the weight chosen by the strategy.
struct WeightWindow {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<double> chosen;
};

inline WeightWindow construct_weights(const LocalQuantities& q,
                                      const std::vector<double>& old_weights, double a, double b,
                                      WeightStrategy strategy = WeightStrategy::geometric_mid) {
  if (old_weights.size() != q.ratio.size()) {
    throw std::invalid_argument("construct_weights: weight count does not match quantities");
  }
  if (!(a > 0.0) || !(b >= a) || !std::isfinite(b)) {
    throw std::invalid_argument("construct_weights: need 0 < A <= B < inf");
  }
  if (!q.degenerate.empty()) {
    throw hypothesis_error(q.degenerate.front(),
                           "hypothesis fails: T P_{W_i} = 0 at index " +
                               std::to_string(q.degenerate.front()));
  }
  const double c = condition_c(q);
  if (a / b > c * (1.0 + 1e-12) + 1e-15) {
    std::size_t worst = 0;
    for (std::size_t i = 1; i < q.ratio.size(); ++i) {
      if (q.ratio[i] < q.ratio[worst]) worst = i;
    }
    throw hypothesis_error(worst, "hypothesis fails: A/B = " + std::to_string(a / b) +
                                      " exceeds c = " + std::to_string(c) +
                                      " attained at index " + std::to_string(worst));
  }
  WeightWindow w;
  for (std::size_t i = 0; i < q.ratio.size(); ++i) {
    const double lo = old_weights[i] * q.norm[i] / std::sqrt(b);
    const double hi = std::max(old_weights[i] * q.gamma[i] / std::sqrt(a), lo);
    w.lo.push_back(lo);
    w.hi.push_back(hi);
    switch (strategy) {
      case WeightStrategy::geometric_mid: w.chosen.push_back(std::sqrt(lo * hi)); break;
      case WeightStrategy::lower_edge: w.chosen.push_back(lo); break;
      case WeightStrategy::upper_edge: w.chosen.push_back(hi); break;
    }
  }
  return w;
}

/// The perturbed family (T(W_i), v_i).
inline WeightedFamily perturb(const Mat& t, const WeightedFamily& f, const WeightWindow& weights,
                              const ToleranceConfig& tol = {}) {
  validate_family(f);
  if (weights.chosen.size() != f.items.size()) {
    throw std::invalid_argument("perturb: weight count does not match family");
  }
  WeightedFamily out;
  out.ambient_dim = t.rows();
  for (std::size_t i = 0; i < f.items.size(); ++i) {
    out.items.push_back({image(t, f.items[i].subspace, tol), weights.chosen[i]});
  }
  return out;
}

/// Predicted frame-bound intervals for the perturbed family, built from
/// F = T * synthesis_matrix: lower in [gamma(F)^2/B, gamma(F)^2/A],
/// upper in [||F||^2/B, ||F||^2/A].
struct BoundPrediction {
  double gamma_f = 0.0;
  double norm_f = 0.0;
  double lower_lo = 0.0, lower_hi = 0.0;
  double upper_lo = 0.0, upper_hi = 0.0;
};

inline BoundPrediction predict_bounds(const Mat& t, const WeightedFamily& f, double a, double b,
                                      const ToleranceConfig& tol = {}) {
  if (!(a > 0.0) || !(b >= a) || !std::isfinite(b)) {
    throw std::invalid_argument("predict_bounds: need 0 < A <= B < inf");
  }
  const Mat composed = t * synthesis_matrix(f);
  BoundPrediction p;
  p.gamma_f = gamma(composed, tol);
  p.norm_f = operator_norm(composed);
  p.lower_lo = p.gamma_f * p.gamma_f / b;
  p.lower_hi = p.gamma_f * p.gamma_f / a;
  p.upper_lo = p.norm_f * p.norm_f / b;
  p.upper_hi = p.norm_f * p.norm_f / a;
  return p;
}

// ---------------------------------------------------------------------------
// Verifiers for the angle / reduced-minimum-modulus inequalities.
// ---------------------------------------------------------------------------

/// gamma(T) sqrt(1-c^2) <= gamma(T P_W) <= ||T|| sqrt(1-c^2), c = c(N(T), W).
struct GammaChainReport {
  bool hypothesis_met = false;
  double cos_null = 1.0;
  double gamma_t = 0.0;
  double gamma_tpw = 0.0;
  double norm_t = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double slack = 0.0;  // largest violation of the chain, 0 when it holds
  bool pass = true;    // hypothesis-not-met counts as pass
};

inline GammaChainReport verify_prop_gammas(const Mat& t, const Subspace& w,
                                           const ToleranceConfig& tol = {}) {
  GammaChainReport r;
  if (w.is_zero() || numerical_rank(t, tol) == 0) return r;  // hypothesis not met
  if (numerical_rank(t * projector(w), tol) == 0) return r;  // W inside N(T)
  const Subspace kernel = null_space(t, tol);
  r.cos_null = cos_friedrichs(kernel, w, tol);
  if (r.cos_null >= 1.0 - tol.cmp_tol) return r;
  r.hypothesis_met = true;
  r.gamma_t = gamma(t, tol);
  r.norm_t = operator_norm(t);
  r.gamma_tpw = gamma(t * projector(w), tol);
  const double factor = std::sqrt(std::max(0.0, 1.0 - r.cos_null * r.cos_null));
  r.lower = r.gamma_t * factor;
  r.upper = r.norm_t * factor;
  r.slack = std::max({r.lower - r.gamma_tpw, r.gamma_tpw - r.upper, 0.0});
  r.pass = r.slack <= tol.cmp_tol;
  return r;
}

inline void require_hermitian_psd(const Mat& a, const ToleranceConfig& tol = {}) {
  if (a.rows() != a.cols()) throw std::invalid_argument("operator must be square");
  const double scale = std::max(operator_norm(a), 1.0);
  if (operator_norm(a - a.adjoint()) > 1e-10 * scale) {
    throw std::invalid_argument("operator must be Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig((a + a.adjoint()) / 2.0,
                                         Eigen::EigenvaluesOnly);
  if (eig.eigenvalues()(0) < -1e-10 * scale) {
    throw std::invalid_argument("operator must be positive semidefinite");
  }
}

/// c(N(A), W) <= c(A^{-1}(W^perp), W) <= [1 - gamma(A^{1/2})^4 / ||A||^2 (1 - c^2)]^{1/2},
/// plus the set identity A^{-1}(W^perp) cap W = N(A) cap W.
struct AngleChainReport {
  bool hypothesis_met = false;
  double cos_null = 1.0;
  double cos_preimage = 0.0;
  double upper = 0.0;
  double chain_slack = 0.0;
  double set_identity_err = 0.0;
  bool pass = true;
};

inline AngleChainReport verify_thm_angle_bounds(const Mat& a, const Subspace& w,
                                                const ToleranceConfig& tol = {}) {
  require_hermitian_psd(a, tol);
  AngleChainReport r;
  if (w.is_zero() || numerical_rank(a, tol) == 0) return r;
  const Subspace kernel = null_space(a, tol);
  r.cos_null = cos_friedrichs(kernel, w, tol);
  if (r.cos_null >= 1.0 - tol.cmp_tol) return r;
  r.hypothesis_met = true;

  const Subspace pre = preimage_of_complement(a, w, tol);
  r.cos_preimage = cos_friedrichs(pre, w, tol);

  // For Hermitian PSD A, gamma(A^{1/2})^2 = gamma(A), so the fourth power is gamma(A)^2.
  const double gamma_a = gamma(a, tol);
  const double norm_a = operator_norm(a);
  const double arg =
      1.0 - (gamma_a * gamma_a) / (norm_a * norm_a) * (1.0 - r.cos_null * r.cos_null);
  r.upper = std::sqrt(std::max(0.0, arg));

  r.chain_slack = std::max({r.cos_null - r.cos_preimage, r.cos_preimage - r.upper, 0.0});
  r.set_identity_err = operator_norm(projector(intersect(pre, w, tol)) -
                                     projector(intersect(kernel, w, tol)));
  r.pass = r.chain_slack <= tol.cmp_tol && r.set_identity_err <= tol.cmp_tol;
  return r;
}

/// The three equivalent conditions of the closed-range corollary, evaluated
/// on a finite family at tolerance thresholds, plus the proof equality
/// delta(A(W_i), W_i) = c(A^{-1}(W_i^perp), W_i) per index where applicable.
/// Degenerate convention: a nonzero W_i with A(W_i) = {0} reports
/// gamma = 0, cosine = 1, gap = 1, so all three conditions fail together.
struct EquivalenceIndexReport {
  double gamma = 0.0;
  double cosine = 0.0;
  double gap = 0.0;
  bool equality_checked = false;
  double equality_err = 0.0;
};

struct EquivalenceReport {
  double inf_gamma = kInfinity;
  double sup_cosine = 0.0;
  double sup_gap = 0.0;
  bool cond_gamma = false;
  bool cond_cosine = false;
  bool cond_gap = false;
  bool agree = false;
  std::vector<EquivalenceIndexReport> per_index;
  double max_equality_err = 0.0;
  bool pass = false;
};

inline EquivalenceReport verify_cor_equivalence(const Mat& a, const std::vector<Subspace>& ws,
                                                const ToleranceConfig& tol = {}) {
  require_hermitian_psd(a, tol);
  EquivalenceReport r;
  const Subspace kernel = null_space(a, tol);
  for (const Subspace& w : ws) {
    EquivalenceIndexReport idx;
    const Mat tp = a * projector(w);
    if (!w.is_zero() && numerical_rank(tp, tol) == 0) {
      // W sits inside N(A): the perturbed subspace collapses.
      idx.gamma = 0.0;
      idx.cosine = 1.0;
      idx.gap = 1.0;
    } else if (w.is_zero()) {
      idx.gamma = kInfinity;
      idx.cosine = 0.0;
      idx.gap = 0.0;
    } else {
      idx.gamma = gamma(tp, tol);
      idx.cosine = cos_friedrichs(kernel, w, tol);
      idx.gap = gap(image(a, w, tol), w);
      if (idx.cosine < 1.0 - tol.cmp_tol || idx.gap < 1.0 - tol.cmp_tol) {
        idx.equality_checked = true;
        idx.equality_err =
            std::abs(idx.gap - cos_friedrichs(preimage_of_complement(a, w, tol), w, tol));
        r.max_equality_err = std::max(r.max_equality_err, idx.equality_err);
      }
    }
    r.inf_gamma = std::min(r.inf_gamma, idx.gamma);
    r.sup_cosine = std::max(r.sup_cosine, idx.cosine);
    r.sup_gap = std::max(r.sup_gap, idx.gap);
    r.per_index.push_back(idx);
  }
  r.cond_gamma = r.inf_gamma > tol.cmp_tol;
  r.cond_cosine = r.sup_cosine < 1.0 - tol.cmp_tol;
  r.cond_gap = r.sup_gap < 1.0 - tol.cmp_tol;
  r.agree = (r.cond_gamma == r.cond_cosine) && (r.cond_cosine == r.cond_gap);
  r.pass = r.agree && r.max_equality_err <= tol.cmp_tol;
  return r;
}

}  // namespace ffp
