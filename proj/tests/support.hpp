#pragma once

#include "repgen/assembler.hpp"
#include "repgen/weight_system.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

namespace repgen::testing {

struct Case {
  std::string algebra;
  Weight highest;
};

inline std::string case_name(const Case& c) {
  std::string s = c.algebra;
  for (int x : c.highest) s += "_" + std::to_string(x);
  return s;
}

/// Every representation of the relation sweep.
inline std::vector<Case> relation_cases() {
  std::vector<Case> out;
  for (int l = 0; l <= 6; ++l) out.push_back({"A1", {l}});
  for (int p = 0; p <= 3; ++p)
    for (int q = 0; q <= 3; ++q) {
      out.push_back({"A2", {p, q}});
      out.push_back({"B2", {p, q}});
    }
  out.push_back({"G2", {1, 0}});
  out.push_back({"G2", {0, 1}});
  out.push_back({"G2", {1, 1}});
  return out;
}

inline std::vector<QContext> sweep_contexts() {
  return {QContext::classical_limit(), QContext::deformed(0.1), QContext::deformed(0.5), QContext::deformed(1.0)};
}

inline std::string context_name(const QContext& ctx) {
  return ctx.classical ? "classical" : "t=" + std::to_string(ctx.t);
}

/// Entry whose depth below the highest weight is (m1, m2).
inline int entry_at_depth(const WeightSystem& ws, int m1, int m2) {
  for (std::size_t n = 0; n < ws.entries.size(); ++n)
    if (ws.entries[n].depth[0] == m1 && ws.entries[n].depth[1] == m2) return static_cast<int>(n);
  return -1;
}

inline Eigen::MatrixXd block_between(const Eigen::MatrixXd& x, const WeightSystem& ws, int row, int col) {
  const auto& r = ws.entries[row];
  const auto& c = ws.entries[col];
  return x.block(r.offset, c.offset, r.multiplicity, c.multiplicity);
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace repgen::testing
