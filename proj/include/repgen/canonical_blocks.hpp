#pragma once

/// @file canonical_blocks.hpp
/// Decomposition of a weight system into strings along one simple root, and
/// the matrices of that root's generators in the basis adapted to the
/// resulting A1 multiplets.

#include "repgen/error.hpp"
#include "repgen/precision.hpp"
#include "repgen/qarith.hpp"
#include "repgen/weight_system.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace repgen {

/// A multiplet inside a string: it starts at position `start` and `copy`
/// distinguishes multiplets with the same start.
struct MultipletRef {
  int start = 0;
  int copy = 0;
  bool operator==(const MultipletRef&) const = default;
};

struct WeightString {
  int root = 0;
  /// Dynkin label of the top weight along `root`; the string has length + 1 positions.
  int length = 0;
  std::vector<int> entries;
  std::vector<int> dims;
  /// Multiplets present at each position, in basis order.
  std::vector<std::vector<MultipletRef>> order;

  int label(const MultipletRef& m) const { return length - 2 * m.start; }
  int end(const MultipletRef& m) const { return length - m.start; }
  int position_of(int pos, const MultipletRef& m) const {
    const auto& l = order[pos];
    auto it = std::find(l.begin(), l.end(), m);
    return it == l.end() ? -1 : static_cast<int>(it - l.begin());
  }
};

struct StringDecomposition {
  int root = 0;
  std::vector<WeightString> strings;
  /// Per weight-system entry: (string index, position in the string).
  std::vector<std::pair<int, int>> location;
};

namespace detail {

inline std::vector<MultipletRef> reorder_step(const WeightString& s, int j) {
  const auto& cur = s.order[j];
  std::vector<MultipletRef> next;
  const int fresh = s.dims[j + 1] - s.dims[j];
  if (fresh > 0) {
    // Groups of equal start, group order reversed, order inside a group kept.
    std::vector<int> starts;
    for (const auto& m : cur)
      if (std::find(starts.begin(), starts.end(), m.start) == starts.end()) starts.push_back(m.start);
    for (auto g = starts.rbegin(); g != starts.rend(); ++g)
      for (const auto& m : cur)
        if (m.start == *g) next.push_back(m);
    for (int c = 0; c < fresh; ++c) next.push_back({j + 1, c});
  } else {
    for (auto it = cur.rbegin(); it != cur.rend(); ++it)
      if (s.end(*it) > j) next.push_back(*it);
  }
  return next;
}

}  // namespace detail

/// Splits the weight system into strings along `root` and fixes the multiplet
/// order at every position.
inline StringDecomposition decompose_strings(const WeightSystem& ws, int root) {
  const auto& cd = ws.algebra;
  if (root < 0 || root >= cd.rank) throw Error(ErrorCode::InvalidArgument, "root index out of range");
  StringDecomposition out;
  out.root = root;
  out.location.assign(ws.entries.size(), {-1, -1});
  for (std::size_t e = 0; e < ws.entries.size(); ++e) {
    if (out.location[e].first >= 0) continue;
    if (ws.shifted(static_cast<int>(e), root, +1) >= 0) continue;
    WeightString s;
    s.root = root;
    s.length = ws.entries[e].weight[root];
    if (s.length < 0) throw Error(ErrorCode::NonUnimodalString, "string top has negative label");
    int cur = static_cast<int>(e);
    for (int j = 0; j <= s.length; ++j) {
      if (cur < 0) throw Error(ErrorCode::NonUnimodalString, "string is shorter than its top label");
      s.entries.push_back(cur);
      s.dims.push_back(ws.entries[cur].multiplicity);
      out.location[cur] = {static_cast<int>(out.strings.size()), j};
      cur = ws.shifted(cur, root, -1);
    }
    if (cur >= 0) throw Error(ErrorCode::NonUnimodalString, "string is longer than its top label");
    for (int j = 0; j <= s.length; ++j) {
      if (s.dims[j] != s.dims[s.length - j]) throw Error(ErrorCode::NonUnimodalString, "string is not symmetric");
      if (2 * j <= s.length && j > 0 && s.dims[j] < s.dims[j - 1])
        throw Error(ErrorCode::NonUnimodalString, "string multiplicities decrease before the middle");
    }
    s.order.resize(s.length + 1);
    for (int c = 0; c < s.dims[0]; ++c) s.order[0].push_back({0, c});
    for (int j = 0; j < s.length; ++j) s.order[j + 1] = detail::reorder_step(s, j);
    out.strings.push_back(std::move(s));
  }
  for (const auto& loc : out.location)
    if (loc.first < 0) throw Error(ErrorCode::NonUnimodalString, "weight not covered by any string");
  return out;
}

/// Matrix element of the raising operator from state k+1 to state k of the
/// A1 multiplet with Dynkin label l.
template <class T = double>
inline T a1_raising_element(int l, int k, double w, const QContext& ctx) {
  using std::sqrt;
  return sqrt(qint<T>(k + 1, w, ctx) * qint<T>(l - k, w, ctx));
}

/// Raising block from position j + 1 to position j (dims[j] x dims[j+1]).
template <class T = double>
inline MatrixX<T> canonical_raising_block(const WeightString& s, int j, double w, const QContext& ctx) {
  if (j < 0 || j >= s.length) throw Error(ErrorCode::InvalidArgument, "block position out of range");
  MatrixX<T> b = MatrixX<T>::Zero(s.dims[j], s.dims[j + 1]);
  for (int row = 0; row < s.dims[j]; ++row) {
    const auto& m = s.order[j][row];
    const int col = s.position_of(j + 1, m);
    if (col < 0) continue;
    b(row, col) = a1_raising_element<T>(s.label(m), j - m.start, w, ctx);
  }
  return b;
}

/// Raising operator of one root stored by weight: blocks[nu] maps V_nu to
/// V_{nu + alpha_root} and is empty when that weight is absent.
template <class T>
struct RaisingBlocks {
  int root = 0;
  std::vector<MatrixX<T>> blocks;

  Eigen::MatrixXd dense(const WeightSystem& ws) const {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(ws.dimension, ws.dimension);
    for (int nu = 0; nu < static_cast<int>(blocks.size()); ++nu) {
      const int mu = ws.shifted(nu, root, +1);
      if (mu < 0 || blocks[nu].size() == 0) continue;
      x.block(ws.entries[mu].offset, ws.entries[nu].offset, blocks[nu].rows(), blocks[nu].cols()) =
          to_double_matrix(blocks[nu]);
    }
    return x;
  }
};

template <class T = double>
inline RaisingBlocks<T> canonical_raising_blocks(const WeightSystem& ws, const StringDecomposition& sd,
                                                 const QContext& ctx) {
  const double w = ws.algebra.w(sd.root);
  RaisingBlocks<T> out;
  out.root = sd.root;
  out.blocks.resize(ws.entries.size());
  for (const auto& s : sd.strings)
    for (int j = 0; j < s.length; ++j) out.blocks[s.entries[j + 1]] = canonical_raising_block<T>(s, j, w, ctx);
  return out;
}

/// Full raising matrix of the decomposition's root, with every weight space
/// expressed in its own canonical basis.
inline Eigen::MatrixXd canonical_raising(const WeightSystem& ws, const StringDecomposition& sd, const QContext& ctx) {
  return canonical_raising_blocks<double>(ws, sd, ctx).dense(ws);
}

/// Diagonal of [h]_q along the root, with h the root's Dynkin label of each weight.
inline Eigen::VectorXd canonical_cartan_diagonal(const WeightSystem& ws, int root, const QContext& ctx) {
  const double w = ws.algebra.w(root);
  Eigen::VectorXd d(ws.dimension);
  for (const auto& e : ws.entries)
    d.segment(e.offset, e.multiplicity).setConstant(qint(e.weight[root], w, ctx));
  return d;
}

/// max |[E, F] - [h]_q| for the canonical pair of one root.
inline double a1_relation_residual(const WeightSystem& ws, const StringDecomposition& sd, const QContext& ctx) {
  const Eigen::MatrixXd e = canonical_raising(ws, sd, ctx);
  Eigen::MatrixXd c = e * e.transpose() - e.transpose() * e;
  c.diagonal() -= canonical_cartan_diagonal(ws, sd.root, ctx);
  const double scale = std::max(1.0, (e * e.transpose()).cwiseAbs().maxCoeff());
  return c.cwiseAbs().maxCoeff() / scale;
}

}  // namespace repgen
