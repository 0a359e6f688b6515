#pragma once

#include "ffp/fusion_frame.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace ffp {

/// Seeded Gaussian source on top of the mt19937_64 stream; the raw stream is
/// bit-exact across platforms and the double conversion uses only exact
/// ldexp arithmetic, so instances are reproducible from (seed, parameters).
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // in (0, 1)
    const std::uint64_t bits = engine_() >> 11;  // 53 bits
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u = uniform();
    const double v = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u));
    const double angle = 2.0 * std::numbers::pi * v;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  Scalar complex_normal() { return {normal(), normal()}; }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline Mat random_gaussian(Index rows, Index cols, SeededRng& rng) {
  Mat m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.complex_normal();
  }
  return m;
}

inline Mat random_unitary(Index n, SeededRng& rng) {
  Eigen::HouseholderQR<Mat> qr(random_gaussian(n, n, rng));
  return Mat(qr.householderQ());
}

inline Subspace random_subspace(Index ambient_dim, Index dim, std::uint64_t seed) {
  if (dim < 0 || dim > ambient_dim) {
    throw std::invalid_argument("random_subspace: dim out of range");
  }
  if (dim == 0) return Subspace::zero(ambient_dim);
  SeededRng rng(seed);
  Eigen::HouseholderQR<Mat> qr(random_gaussian(ambient_dim, dim, rng));
  Mat q = qr.householderQ();
  return Subspace::from_orthonormal(q.leftCols(dim));
}

/// Hermitian PSD with exactly null_dim zero eigenvalues and the remaining
/// spectrum drawn uniformly from [lo, hi].
inline Mat random_psd_with_nullspace(Index ambient_dim, Index null_dim, double lo, double hi,
                                     std::uint64_t seed) {
  if (null_dim < 0 || null_dim >= ambient_dim) {
    throw std::invalid_argument("random_psd_with_nullspace: null_dim out of range");
  }
  if (!(lo > 0.0) || !(hi >= lo)) {
    throw std::invalid_argument("random_psd_with_nullspace: need 0 < lo <= hi");
  }
  SeededRng rng(seed);
  const Mat q = random_unitary(ambient_dim, rng);
  RealVec evals = RealVec::Zero(ambient_dim);
  for (Index i = null_dim; i < ambient_dim; ++i) evals(i) = rng.uniform(lo, hi);
  Mat a = q * evals.asDiagonal() * q.adjoint();
  return (a + a.adjoint()) / 2.0;
}

inline WeightedFamily random_family(Index ambient_dim, const std::vector<Index>& dims,
                                    double weight_lo, double weight_hi, std::uint64_t seed,
                                    bool orthonormal_directions = false) {
  if (dims.empty()) throw std::invalid_argument("random_family: need at least one subspace");
  if (!(weight_lo > 0.0) || !(weight_hi >= weight_lo)) {
    throw std::invalid_argument("random_family: need 0 < weight_lo <= weight_hi");
  }
  SeededRng rng(seed);
  WeightedFamily f;
  f.ambient_dim = ambient_dim;
  if (orthonormal_directions) {
    if (static_cast<Index>(dims.size()) > ambient_dim) {
      throw std::invalid_argument("random_family: more directions than dimensions");
    }
    const Mat q = random_unitary(ambient_dim, rng);
    for (std::size_t i = 0; i < dims.size(); ++i) {
      if (dims[i] != 1) {
        throw std::invalid_argument("random_family: orthonormal directions require dims = 1");
      }
      f.items.push_back({Subspace::from_orthonormal(q.col(static_cast<Index>(i))),
                         rng.uniform(weight_lo, weight_hi)});
    }
    return f;
  }
  for (Index d : dims) {
    if (d < 0 || d > ambient_dim) throw std::invalid_argument("random_family: dim out of range");
    Subspace w = Subspace::zero(ambient_dim);
    if (d > 0) {
      Eigen::HouseholderQR<Mat> qr(random_gaussian(ambient_dim, d, rng));
      w = Subspace::from_orthonormal(Mat(qr.householderQ()).leftCols(d));
    }
    f.items.push_back({w, rng.uniform(weight_lo, weight_hi)});
  }
  return f;
}

// ---------------------------------------------------------------------------
// The block example: E_k = span{e_{3k+1}, sin(t_k) e_{3k+2} + cos(t_k) e_{3k+3}},
// F_k = span{e_{3k+1}, (e_{3k+2} + e_{3k+3})/sqrt(2)}, unit weights, T the
// coordinate projector keeping indices congruent to 1, 2 mod 3 (1-based).
// ---------------------------------------------------------------------------

struct PaperExampleSpec {
  int num_blocks = 1;
  std::vector<double> theta;  // one angle per block, positive, nonincreasing

  static PaperExampleSpec halving(int blocks, double theta0 = std::numbers::pi / 8.0) {
    PaperExampleSpec spec;
    spec.num_blocks = blocks;
    double t = theta0;
    for (int k = 0; k < blocks; ++k, t /= 2.0) spec.theta.push_back(t);
    return spec;
  }
};

struct BlockExample {
  WeightedFamily family;  // ordered E_0, F_0, E_1, F_1, ...
  Mat projector_t;        // 0/1 diagonal, ambient (3K + 1) x (3K + 1)
};

inline void validate_example_spec(const PaperExampleSpec& spec) {
  if (spec.num_blocks < 1) throw std::invalid_argument("block example: need at least one block");
  if (static_cast<int>(spec.theta.size()) != spec.num_blocks) {
    throw std::invalid_argument("block example: theta count does not match block count");
  }
  if (!(spec.theta.front() < std::numbers::pi / 4.0)) {
    throw std::invalid_argument("block example: theta_0 must be below pi/4");
  }
  for (std::size_t k = 0; k < spec.theta.size(); ++k) {
    if (!(spec.theta[k] > 0.0)) throw std::invalid_argument("block example: theta must be positive");
    if (k > 0 && spec.theta[k] > spec.theta[k - 1]) {
      throw std::invalid_argument("block example: theta must be nonincreasing");
    }
  }
}

inline BlockExample paper_example(const PaperExampleSpec& spec) {
  validate_example_spec(spec);
  const Index k_blocks = spec.num_blocks;
  const Index n = 3 * k_blocks + 1;

  BlockExample ex;
  ex.family.ambient_dim = n;
  for (Index k = 0; k < k_blocks; ++k) {
    const double theta = spec.theta[static_cast<std::size_t>(k)];
    const Index base = 3 * k;  // 0-based index of e_{3k+1}
    Mat e_basis = Mat::Zero(n, 2);
    e_basis(base, 0) = 1.0;
    e_basis(base + 1, 1) = std::sin(theta);
    e_basis(base + 2, 1) = std::cos(theta);
    Mat f_basis = Mat::Zero(n, 2);
    f_basis(base, 0) = 1.0;
    f_basis(base + 1, 1) = 1.0 / std::numbers::sqrt2;
    f_basis(base + 2, 1) = 1.0 / std::numbers::sqrt2;
    ex.family.items.push_back({Subspace::from_orthonormal(std::move(e_basis)), 1.0});
    ex.family.items.push_back({Subspace::from_orthonormal(std::move(f_basis)), 1.0});
  }

  ex.projector_t = Mat::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    if (j % 3 != 2) ex.projector_t(j, j) = 1.0;  // keeps e_i with i = 1, 2 mod 3 (1-based)
  }
  return ex;
}

/// Four generating vectors of one block as 1-dim subspaces in dimension 3.
/// Frame bounds on the span: 1 - sqrt(1/2 + cos(theta) sin(theta)) and 2.
inline WeightedFamily single_block_vector_family(double theta) {
  WeightedFamily f;
  f.ambient_dim = 3;
  Mat v1 = Mat::Zero(3, 1);
  v1(0, 0) = 1.0;
  Mat v2 = Mat::Zero(3, 1);
  v2(1, 0) = std::sin(theta);
  v2(2, 0) = std::cos(theta);
  Mat v4 = Mat::Zero(3, 1);
  v4(1, 0) = 1.0 / std::numbers::sqrt2;
  v4(2, 0) = 1.0 / std::numbers::sqrt2;
  f.items.push_back({Subspace::from_orthonormal(v1), 1.0});
  f.items.push_back({Subspace::from_orthonormal(v2), 1.0});
  f.items.push_back({Subspace::from_orthonormal(v1), 1.0});  // f_3 repeats f_1
  f.items.push_back({Subspace::from_orthonormal(v4), 1.0});
  return f;
}

}  // namespace ffp
