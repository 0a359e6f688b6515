#pragma once

#include "ffp/fusion_frame.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace ffp {

using json = nlohmann::json;

// Entries are either a plain number (real) or a two-element [re, im] pair.
inline json scalar_to_json(const Scalar& z) {
  if (z.imag() == 0.0) return z.real();
  return json::array({z.real(), z.imag()});
}

inline Scalar scalar_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw std::invalid_argument(path + ": entry must be a number or [re, im]");
}

inline json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Mat matrix_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw std::invalid_argument(path + ": expected a matrix (array of rows)");
  }
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j[0].size());
  Mat m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<Index>(j[i].size()) != cols) {
      throw std::invalid_argument(path + ": ragged matrix rows");
    }
    for (Index c = 0; c < cols; ++c) {
      m(i, c) = scalar_from_json(j[i][c], path + "[" + std::to_string(i) + "][" +
                                              std::to_string(c) + "]");
    }
  }
  ensure_finite(m, path.c_str());
  return m;
}

struct Instance {
  WeightedFamily family;
  std::optional<Mat> op;
  std::vector<std::string> warnings;
};

/// Parses the instance schema {ambient_dim, subspaces: [{basis, weight}], operator?}.
/// Basis columns are generators; they are orthonormalized on load, with a
/// warning when the input was materially non-orthonormal.
inline Instance parse_instance(const json& j, const ToleranceConfig& tol = {}) {
  Instance inst;
  if (!j.is_object()) throw std::invalid_argument("instance: expected a JSON object");
  if (!j.contains("ambient_dim") || !j["ambient_dim"].is_number_integer()) {
    throw std::invalid_argument("instance.ambient_dim: missing or not an integer");
  }
  const Index n = j["ambient_dim"].get<Index>();
  if (n < 1) throw std::invalid_argument("instance.ambient_dim: must be positive");
  inst.family.ambient_dim = n;

  if (!j.contains("subspaces") || !j["subspaces"].is_array() || j["subspaces"].empty()) {
    throw std::invalid_argument("instance.subspaces: missing or empty");
  }
  std::size_t idx = 0;
  for (const auto& sj : j["subspaces"]) {
    const std::string path = "instance.subspaces[" + std::to_string(idx) + "]";
    if (!sj.is_object() || !sj.contains("basis")) {
      throw std::invalid_argument(path + ": expected {basis, weight}");
    }
    const Mat gens = matrix_from_json(sj["basis"], path + ".basis");
    if (gens.rows() != n) {
      throw std::invalid_argument(path + ".basis: row count does not match ambient_dim");
    }
    double weight = 1.0;
    if (sj.contains("weight")) {
      if (!sj["weight"].is_number()) throw std::invalid_argument(path + ".weight: not a number");
      weight = sj["weight"].get<double>();
    }
    if (!(weight > 0.0) || !std::isfinite(weight)) {
      throw std::invalid_argument(path + ".weight: must be positive and finite");
    }
    const Index k = gens.cols();
    const double residual =
        (gens.adjoint() * gens - Mat::Identity(k, k)).cwiseAbs().maxCoeff();
    if (residual > 1e-8) {
      inst.warnings.push_back(path + ".basis: columns were not orthonormal (residual " +
                              std::to_string(residual) + "); orthonormalized on load");
    }
    inst.family.items.push_back({from_generators(gens, tol), weight});
    ++idx;
  }

  if (j.contains("operator")) {
    const Mat op = matrix_from_json(j["operator"], "instance.operator");
    if (op.rows() != n || op.cols() != n) {
      throw std::invalid_argument("instance.operator: must be ambient_dim x ambient_dim");
    }
    inst.op = op;
  }
  return inst;
}

inline json instance_to_json(const WeightedFamily& family, const Mat* op = nullptr) {
  json j;
  j["ambient_dim"] = family.ambient_dim;
  j["subspaces"] = json::array();
  for (const auto& item : family.items) {
    j["subspaces"].push_back({{"basis", matrix_to_json(item.subspace.basis())},
                              {"weight", item.weight}});
  }
  if (op != nullptr) j["operator"] = matrix_to_json(*op);
  return j;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Instance load_instance(const std::string& path, const ToleranceConfig& tol = {}) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return parse_instance(j, tol);
}

/// FNV-1a 64-bit, used to echo a fingerprint of the input file into reports.
inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Writes via a sibling temp file and rename so readers never see a partial file.
inline void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + tmp.string());
    out << contents;
  }
  fs::rename(tmp, target);
}

}  // namespace ffp
