#pragma once

#include <Eigen/Dense>

#include <vector>

namespace fjdyn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

using Vertex = int;
/// Sorted, duplicate-free list of vertices.
using VertexSet = std::vector<Vertex>;

// Entries at or below this magnitude are treated as structural zeros.
inline constexpr double kSupportThreshold = 1e-12;

inline double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

/// Max row-sum norm.
inline double inf_norm(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
}

inline double spread(const Vector& v) { return v.size() == 0 ? 0.0 : v.maxCoeff() - v.minCoeff(); }

}  // namespace fjdyn
