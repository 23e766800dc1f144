#pragma once

/// @file rank2_mixer.hpp
/// Level-by-level determination of the raising generator of one simple root
/// from the generators of the roots before it.
///
/// Every weight space is stored in the canonical basis of root 0. For root j
/// the unknown block X^-_j : V_mu -> V_nu (nu = mu - alpha_j) is fixed by
///   X^+_i X^-_j = X^-_j X^+_i      for every solved root i,
///   (X^-_j)^T X^-_j = [mu_j] + X^-_j X^+_j   on V_mu,
/// which leave only a rotation of the directions killed by all solved
/// raising operators.  The orthogonal matrix O_nu expresses the canonical
/// basis of root j at nu in storage coordinates.  Arithmetic is carried out
/// in Wide and rounded at the end.

#include "repgen/canonical_blocks.hpp"
#include "repgen/error.hpp"
#include "repgen/precision.hpp"
#include "repgen/qarith.hpp"
#include "repgen/weight_system.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace repgen {

struct SolverTolerances {
  double residual = 1e-9;
  double orthogonality = 1e-12;
  double degeneration = 1e-10;
  /// Relative threshold below which singular values and eigenvalues count as zero.
  double rank = 1e-18;
};

/// A free parameter fixed by a deterministic choice.
struct GaugeChoice {
  Weight weight;
  int level = 0;
  std::string kind;
  int dimension = 0;
};

struct MixingSolution {
  int root = 1;
  /// Per weight: columns are the canonical basis of `root` in storage coordinates.
  std::map<Weight, Eigen::MatrixXd> orthogonal;
  std::vector<GaugeChoice> gauge_report;
  std::map<std::string, double> observables;
  /// X^+_root in storage coordinates.
  RaisingBlocks<Wide> blocks;
  Eigen::MatrixXd raising;
  /// Largest deviation from orthonormality of the columns obtained from the
  /// constraints alone, before completion.
  double corollary_residual = 0.0;
  double orthogonality_residual = 0.0;
  /// max |X^+_root - O Xhat O^T|, relative.
  double reconstruction_residual = 0.0;
};

namespace detail {

template <class T>
inline double max_abs_of(const MatrixX<T>& m) {
  return m.size() ? static_cast<double>(m.cwiseAbs().maxCoeff()) : 0.0;
}

/// Orthonormal vectors completing the columns of `q` (assumed orthonormal),
/// taken from the standard basis in index order; first nonzero entry positive.
template <class T>
inline MatrixX<T> orthonormal_completion(const MatrixX<T>& q, int n, int count) {
  using std::abs;
  MatrixX<T> basis(n, q.cols() + count);
  basis.leftCols(q.cols()) = q;
  int have = static_cast<int>(q.cols());
  for (int k = 0; k < n && have < q.cols() + count; ++k) {
    VectorX<T> v = VectorX<T>::Unit(n, k);
    for (int pass = 0; pass < 2; ++pass)
      for (int c = 0; c < have; ++c) v -= basis.col(c).dot(v) * basis.col(c);
    const T norm = v.norm();
    if (norm < T(1e-8)) continue;
    v /= norm;
    for (int a = 0; a < n; ++a)
      if (abs(v(a)) > T(1e-20)) {
        if (v(a) < 0) v = -v;
        break;
      }
    basis.col(have++) = v;
  }
  if (have != q.cols() + count) throw Error(ErrorCode::InconsistentSystem, "orthonormal completion failed");
  return basis.rightCols(count);
}

/// Rows z with z^T z = s for positive semidefinite s, with eigenvalues below
/// tol * scale treated as zero.  The factor is brought to upper trapezoidal
/// form with positive leading entries, which is the Cholesky factor taken in
/// index order.
template <class T>
inline MatrixX<T> psd_factor_rows(const MatrixX<T>& s, double tol, double scale) {
  using std::abs;
  using std::sqrt;
  const int n = static_cast<int>(s.rows());
  if (n == 0) return MatrixX<T>(0, 0);
  Eigen::SelfAdjointEigenSolver<MatrixX<T>> es(MatrixX<T>((s + s.transpose()) / T(2)));
  const VectorX<T>& ev = es.eigenvalues();
  scale = std::max({1.0, scale, static_cast<double>(ev.cwiseAbs().maxCoeff())});
  const T cut = T(tol) * T(scale);
  if (ev.minCoeff() < -cut) throw Error(ErrorCode::NegativeRadicand, "norm matrix is not positive semidefinite");
  std::vector<int> keep;
  for (int a = n - 1; a >= 0; --a)
    if (ev(a) > cut) keep.push_back(a);
  const int r = static_cast<int>(keep.size());
  MatrixX<T> z0(r, n);
  for (int a = 0; a < r; ++a) z0.row(a) = sqrt(ev(keep[a])) * es.eigenvectors().col(keep[a]).transpose();
  if (r == 0) return z0;
  Eigen::HouseholderQR<MatrixX<T>> qr(z0);
  MatrixX<T> z = qr.matrixQR().topRows(r).template triangularView<Eigen::Upper>();
  const T tiny = T(1e-12) * sqrt(T(scale));
  for (int a = 0; a < r; ++a)
    for (int c = 0; c < n; ++c)
      if (abs(z(a, c)) > tiny) {
        if (z(a, c) < 0) z.row(a) *= T(-1);
        break;
      }
  return z;
}

}  // namespace detail

/// Determines X^+_j given the raising operators of roots 0..j-1 in storage
/// coordinates.  `complete` asks that no direction remain unconstrained, as
/// holds once every root has been solved.  A nonnegative `max_level` stops
/// after the weights of that level and leaves `raising` empty.
inline MixingSolution solve_root(const WeightSystem& ws, const std::vector<RaisingBlocks<Wide>>& solved, int j,
                                 const QContext& ctx, SolverTolerances tol = {}, bool complete = true,
                                 int max_level = -1) {
  using T = Wide;
  const auto& cd = ws.algebra;
  if (j <= 0 || j >= cd.rank || static_cast<int>(solved.size()) < j)
    throw Error(ErrorCode::InvalidArgument, "root must follow the solved roots");
  const double wj = cd.w(j);
  const StringDecomposition sdj = decompose_strings(ws, j);

  MixingSolution sol;
  sol.root = j;
  sol.blocks.root = j;
  sol.blocks.blocks.resize(ws.entries.size());
  auto& xj = sol.blocks.blocks;
  std::vector<MatrixX<T>> omat(ws.entries.size());
  double orth = 0.0, corollary = 0.0, rebuild = 0.0;

  for (int nu = 0; nu < static_cast<int>(ws.entries.size()); ++nu) {
    const auto& enu = ws.entries[nu];
    if (max_level >= 0 && enu.level > max_level) break;
    const int n = enu.multiplicity;
    const int mu = ws.shifted(nu, j, +1);
    const auto [string_index, pos] = sdj.location[nu];
    const WeightString& str = sdj.strings[string_index];
    if (mu < 0) {
      omat[nu] = MatrixX<T>::Identity(n, n);
      if (n > 1) sol.gauge_report.push_back({enu.weight, enu.level, "string-top rotation", n * (n - 1) / 2});
      continue;
    }
    const int m = ws.entries[mu].multiplicity;

    // Norm condition on V_mu.
    MatrixX<T> s = qint<T>(ws.entries[mu].weight[j], wj, ctx) * MatrixX<T>::Identity(m, m);
    if (xj[mu].size()) s += xj[mu].transpose() * xj[mu];

    // Commutation with solved raising operators.
    int rows = 0;
    for (int i = 0; i < j; ++i)
      if (solved[i].blocks[nu].size()) rows += static_cast<int>(solved[i].blocks[nu].rows());
    MatrixX<T> a = MatrixX<T>::Zero(rows, n);
    MatrixX<T> t = MatrixX<T>::Zero(rows, m);
    int r0 = 0;
    for (int i = 0; i < j; ++i) {
      const MatrixX<T>& ai = solved[i].blocks[nu];
      if (!ai.size()) continue;
      const int d = static_cast<int>(ai.rows());
      a.middleRows(r0, d) = ai;
      const int nui = ws.shifted(nu, i, +1);
      if (solved[i].blocks[mu].size() && xj[nui].size())
        t.middleRows(r0, d) = xj[nui].transpose() * solved[i].blocks[mu];
      r0 += d;
    }

    MatrixX<T> yw = MatrixX<T>::Zero(n, m);
    MatrixX<T> rowspace(n, 0);
    if (rows > 0) {
      Eigen::JacobiSVD<MatrixX<T>> svd(a, Eigen::ComputeThinU | Eigen::ComputeFullV);
      svd.setThreshold(T(tol.rank));
      const int rank = static_cast<int>(svd.rank());
      if (rank > 0) {
        yw = svd.solve(t);
        rowspace = svd.matrixV().leftCols(rank);
      }
      const double scale = std::max({1.0, detail::max_abs_of(t), detail::max_abs_of(a)});
      if (detail::max_abs_of(MatrixX<T>(a * yw - t)) > tol.residual * scale * scale)
        throw Error(ErrorCode::InconsistentSystem, "commutation constraints have no solution");
    }
    const int k = n - static_cast<int>(rowspace.cols());
    const MatrixX<T> kb = detail::orthonormal_completion<T>(rowspace, n, k);

    const MatrixX<T> rest = s - yw.transpose() * yw;
    const MatrixX<T> z = detail::psd_factor_rows<T>(rest, tol.rank, detail::max_abs_of(s));
    if (z.rows() > k) throw Error(ErrorCode::InconsistentSystem, "norm condition exceeds the free directions");
    if (z.rows() < k) {
      if (complete)
        throw Error(ErrorCode::DegenerateMultiplicity,
                    "weight space has directions annihilated by every raising operator");
      sol.gauge_report.push_back({enu.weight, enu.level, "directions left to later roots", k - static_cast<int>(z.rows())});
    }
    if (z.rows() > 1)
      sol.gauge_report.push_back({enu.weight, enu.level, "kernel rotation", static_cast<int>(z.rows() * (z.rows() - 1) / 2)});
    MatrixX<T> y = yw;
    if (z.rows() > 0) y += kb.leftCols(z.rows()) * z;
    xj[nu] = y.transpose();

    // Canonical basis of root j at nu.
    MatrixX<T> o(n, n);
    std::vector<int> fresh, cont;
    for (int c = 0; c < n; ++c) {
      const MultipletRef& mult = str.order[pos][c];
      if (mult.start == pos) {
        fresh.push_back(c);
        continue;
      }
      cont.push_back(c);
      const int prev = str.position_of(pos - 1, mult);
      const T xhat = a1_raising_element<T>(str.label(mult), pos - 1 - mult.start, wj, ctx);
      o.col(c) = y * omat[mu].col(prev) / xhat;
    }
    MatrixX<T> q(n, cont.size());
    for (std::size_t c = 0; c < cont.size(); ++c) q.col(c) = o.col(cont[c]);
    if (!cont.empty())
      corollary = std::max(corollary, detail::max_abs_of(MatrixX<T>(q.transpose() * q - MatrixX<T>::Identity(q.cols(), q.cols()))));
    if (!fresh.empty()) {
      const MatrixX<T> extra = detail::orthonormal_completion<T>(q, n, static_cast<int>(fresh.size()));
      for (std::size_t c = 0; c < fresh.size(); ++c) o.col(fresh[c]) = extra.col(c);
      if (fresh.size() > 1)
        sol.gauge_report.push_back(
            {enu.weight, enu.level, "new multiplet rotation", static_cast<int>(fresh.size() * (fresh.size() - 1) / 2)});
    }
    orth = std::max(orth, detail::max_abs_of(MatrixX<T>(o.transpose() * o - MatrixX<T>::Identity(n, n))));
    omat[nu] = o;

    const MatrixX<T> xhat = canonical_raising_block<T>(str, pos - 1, wj, ctx);
    const MatrixX<T> rebuilt = omat[mu] * xhat * o.transpose();
    rebuild = std::max(rebuild, detail::max_abs_of(MatrixX<T>(rebuilt - xj[nu])) / std::max(1.0, detail::max_abs_of(xhat)));
  }
  for (int nu = 0; nu < static_cast<int>(ws.entries.size()); ++nu)
    if (omat[nu].size()) sol.orthogonal.emplace(ws.entries[nu].weight, to_double_matrix(omat[nu]));
  sol.corollary_residual = corollary;
  sol.orthogonality_residual = orth;
  sol.reconstruction_residual = rebuild;
  if (orth > tol.orthogonality) throw Error(ErrorCode::InconsistentSystem, "mixing matrices are not orthogonal");
  if (max_level < 0) sol.raising = sol.blocks.dense(ws);
  return sol;
}

/// Rank-2 observables of the solved mixing.
inline void compute_rank2_observables(const WeightSystem& ws, MixingSolution& sol, const QContext& ctx) {
  const auto& cd = ws.algebra;
  const Weight& top = ws.highest;
  auto lowered = [&](int m1, int m2) {
    Weight mu = top;
    for (int a = 0; a < cd.rank; ++a) mu[a] -= m1 * cd.cartan[0][a] + m2 * cd.cartan[1][a];
    return mu;
  };
  auto it = sol.orthogonal.find(lowered(1, 1));
  if (it != sol.orthogonal.end() && it->second.rows() == 2) sol.observables["cos_phi1"] = it->second(0, 0);

  // (X^+_2)^2 between the two-dimensional ends of the string through depth (3,1).
  const int iu = ws.find_index(lowered(3, 1)), im = ws.find_index(lowered(3, 2)), il = ws.find_index(lowered(3, 3));
  if (iu >= 0 && im >= 0 && il >= 0 && ws.entries[iu].multiplicity == 2 && ws.entries[il].multiplicity == 2 &&
      sol.blocks.blocks[im].size() && sol.blocks.blocks[il].size()) {
    const WideMatrix sq = sol.blocks.blocks[im] * sol.blocks.blocks[il];
    const Wide c = qint<Wide>(2, cd.w(1), ctx);
    WideMatrix jm(2, 2);
    jm << 0, 1, 1, 0;
    sol.observables["cos_phi2_plus_phi3"] = static_cast<double>((jm * sq).trace() / (2 * c));
  }
}

/// Complete solution for a rank-2 algebra.
inline MixingSolution solve_rank2(const CartanData& cd, const HighestWeight& hw, const QContext& ctx,
                                  SolverTolerances tol = {}, WeightSystemOptions wopts = {}, int max_level = -1) {
  if (cd.rank != 2) throw Error(ErrorCode::InvalidArgument, "solve_rank2 needs a rank-2 algebra");
  const WeightSystem ws = weight_multiplicities(cd, hw, wopts);
  const std::vector<RaisingBlocks<Wide>> solved{canonical_raising_blocks<Wide>(ws, decompose_strings(ws, 0), ctx)};
  MixingSolution sol = solve_root(ws, solved, 1, ctx, tol, true, max_level);
  compute_rank2_observables(ws, sol, ctx);
  return sol;
}

struct FirstLevelMixing {
  double cos_phi = 0.0;
  double sin_phi = 0.0;
  /// True when the two-dimensional space at depth (1,1) collapses.
  bool degenerate = false;
  int multiplicity = 2;
};

/// Mixing at depth (1,1) for highest weight (p,q) of the rank-2 algebra with
/// K12 = -1, K21 = -k, from the saturated two-dimensional constraint system.
inline FirstLevelMixing first_level_mixing(int p, int q, int k, const QContext& ctx, SolverTolerances tol = {}) {
  if (p < 0 || q < 0 || k < 1) throw Error(ErrorCode::InvalidArgument, "bad rank-2 parameters");
  const double w1 = 1.0, w2 = static_cast<double>(k);
  // Storage basis at depth (1,1): root-1 descendant of depth (0,1), then the new root-1 top.
  const double a = std::sqrt(qint(p + k, w1, ctx));
  const double tval = std::sqrt(qint(q, w2, ctx) * qint(p, w1, ctx));
  const double yw = a > 0.0 ? tval / a : 0.0;
  const double norm2 = qint(q + 1, w2, ctx);
  const double rest = norm2 - yw * yw;
  if (rest < -tol.residual * norm2) throw Error(ErrorCode::NegativeRadicand, "negative first-level radicand");
  FirstLevelMixing out;
  out.cos_phi = yw / std::sqrt(norm2);
  out.sin_phi = std::sqrt(std::max(0.0, rest) / norm2);
  if (std::fabs(out.cos_phi) < tol.degeneration || std::fabs(out.sin_phi) < tol.degeneration) {
    out.degenerate = true;
    out.multiplicity = 1;
  }
  return out;
}

/// Multiplicities at level N, ordered by descending depth along the first root.
inline std::vector<int> asymptotic_multiplicity_pattern(const WeightSystem& ws, int level) {
  std::vector<int> out;
  for (const auto& e : ws.entries)
    if (e.level == level) out.push_back(e.multiplicity);
  return out;
}

}  // namespace repgen
