#pragma once

/// @file oracle.hpp
/// Independent construction of an irreducible representation from lowering
/// words and their Gram matrices, and a gauge-invariant comparison of two
/// representations.
///
/// Weight spaces are built in level order.  Candidates at mu are F_i e for
/// the orthonormal basis e of V_{mu + alpha_i}; their inner products follow
/// from one commutation,
///   <F_i e_a, F_j e_b> = <e_a, F_j E_i e_b> + delta_ij [h_i] <e_a, e_b>,
/// with every factor on the right already known.  A pivoted Cholesky
/// factorization of the Gram matrix gives the new orthonormal basis and, in
/// its rows, the matrix elements of F_i.

#include "repgen/assembler.hpp"
#include "repgen/error.hpp"
#include "repgen/precision.hpp"
#include "repgen/qarith.hpp"
#include "repgen/weight_system.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace repgen {

/// Simple-root indices (i_1, ..., i_N) applied right to left to the highest weight vector.
struct LoweringWord {
  std::vector<int> indices;
};

struct GramBlock {
  Weight weight;
  int level = 0;
  std::vector<LoweringWord> words;
  Eigen::MatrixXd gram;
  int rank = 0;
  int multiplicity = 0;
  /// Words whose vectors were kept as basis directions, in basis order.
  std::vector<int> pivots;
};

struct OracleOptions {
  long dimension_cap = 200;
  double rank_threshold = 1e-8;
};

struct OracleResult {
  Representation rep;
  std::vector<GramBlock> gram_blocks;
};

inline OracleResult oracle_build_detailed(const CartanData& cd, const HighestWeight& hw, const QContext& ctx,
                                          OracleOptions opts = {}) {
  using T = Wide;
  using std::sqrt;
  const long dim = weyl_dimension(cd, hw);
  if (dim > opts.dimension_cap)
    throw Error(ErrorCode::DimensionCapExceeded,
                "dimension " + std::to_string(dim) + " exceeds oracle cap " + std::to_string(opts.dimension_cap));
  const WeightSystem reference = weight_multiplicities(cd, hw, {opts.dimension_cap});
  const int r = cd.rank;

  struct Space {
    Weight weight;
    std::vector<int> depth;
    int level = 0;
    int dim = 0;
    std::vector<LoweringWord> basis_words;
    /// lower[i]: F_i from V_{mu + alpha_i} to V_mu (dim x dim(mu + alpha_i)).
    std::vector<MatrixX<T>> lower;
  };
  std::map<Weight, Space> spaces;
  Space top;
  top.weight = hw.labels;
  top.depth.assign(r, 0);
  top.dim = 1;
  top.basis_words.push_back({});
  top.lower.resize(r);
  spaces.emplace(top.weight, top);

  OracleResult out;
  std::vector<Weight> current{hw.labels};
  for (int level = 1; !current.empty(); ++level) {
    std::map<Weight, std::vector<int>> next_depths;
    for (const auto& nu : current)
      for (int i = 0; i < r; ++i) {
        Weight mu = add(nu, cd.cartan[i], -1);
        if (next_depths.count(mu)) continue;
        std::vector<int> d = spaces.at(nu).depth;
        d[i] += 1;
        next_depths.emplace(mu, d);
      }
    std::vector<Weight> produced;
    for (const auto& [mu, depth] : next_depths) {
      // Candidate words F_i e_a.
      std::vector<std::pair<int, int>> cand;
      std::vector<const Space*> parents(r, nullptr);
      GramBlock gb;
      gb.weight = mu;
      gb.level = level;
      for (int i = 0; i < r; ++i) {
        auto it = spaces.find(add(mu, cd.cartan[i]));
        if (it == spaces.end()) continue;
        parents[i] = &it->second;
        for (int a = 0; a < it->second.dim; ++a) {
          cand.emplace_back(i, a);
          LoweringWord w = it->second.basis_words[a];
          w.indices.insert(w.indices.begin(), i);
          gb.words.push_back(std::move(w));
        }
      }
      const int c = static_cast<int>(cand.size());
      MatrixX<T> g = MatrixX<T>::Zero(c, c);
      // Size of the cancelling terms on the diagonal; the rank threshold is relative to it.
      T scale(0);
      for (int x = 0; x < c; ++x)
        for (int y = 0; y < c; ++y) {
          const auto [i, a] = cand[x];
          const auto [j, b] = cand[y];
          // <e_a, F_j E_i e_b>, e_a in V_{mu+alpha_i}, e_b in V_{mu+alpha_j}.
          T v(0);
          const Weight both = add(add(mu, cd.cartan[i]), cd.cartan[j]);
          auto it = spaces.find(both);
          if (it != spaces.end()) {
            // E_i e_b is row b of F_i into V_{mu+alpha_j}; F_j maps back into V_{mu+alpha_i}.
            const MatrixX<T>& fi = parents[j]->lower[i];
            const MatrixX<T>& fj = parents[i]->lower[j];
            v = fj.row(a).dot(fi.row(b));
          }
          if (i == j && a == b) {
            const T h = qint<T>(parents[i]->weight[i], cd.w(i), ctx);
            using std::abs;
            scale = std::max(scale, abs(v) + abs(h));
            v += h;
          }
          g(x, y) = v;
        }
      gb.gram = to_double_matrix(g);

      // Pivoted Cholesky: g = L L^T over the chosen pivots.
      VectorX<T> diag = g.diagonal();
      const T maxdiag = scale;
      std::vector<VectorX<T>> cols;
      std::vector<bool> used(c, false);
      while (true) {
        int p = -1;
        for (int x = 0; x < c; ++x)
          if (!used[x] && (p < 0 || diag(x) > diag(p))) p = x;
        if (p < 0 || !(diag(p) > T(opts.rank_threshold) * maxdiag)) break;
        VectorX<T> l = g.col(p);
        for (const auto& prev : cols) l -= prev(p) * prev;
        l /= sqrt(diag(p));
        for (int x = 0; x < c; ++x) diag(x) -= l(x) * l(x);
        used[p] = true;
        cols.push_back(std::move(l));
        gb.pivots.push_back(p);
      }
      for (int x = 0; x < c; ++x)
        if (!used[x] && diag(x) < -T(opts.rank_threshold) * maxdiag)
          throw Error(ErrorCode::NumericallySingularGram, "Gram matrix is indefinite");
      gb.rank = static_cast<int>(cols.size());
      gb.multiplicity = reference.multiplicity(mu);
      if (gb.rank != gb.multiplicity)
        throw Error(ErrorCode::RankMismatch, "Gram rank " + std::to_string(gb.rank) + " differs from multiplicity " +
                                                 std::to_string(gb.multiplicity));
      if (gb.rank == 0) {
        out.gram_blocks.push_back(std::move(gb));
        continue;
      }
      Space sp;
      sp.weight = mu;
      sp.depth = depth;
      sp.level = level;
      sp.dim = gb.rank;
      for (int p : gb.pivots) sp.basis_words.push_back(gb.words[p]);
      sp.lower.resize(r);
      for (int i = 0; i < r; ++i) {
        if (!parents[i]) continue;
        MatrixX<T> f(sp.dim, parents[i]->dim);
        for (int x = 0; x < c; ++x)
          if (cand[x].first == i)
            for (int k = 0; k < sp.dim; ++k) f(k, cand[x].second) = cols[k](x);
        sp.lower[i] = std::move(f);
      }
      out.gram_blocks.push_back(std::move(gb));
      produced.push_back(mu);
      spaces.emplace(mu, std::move(sp));
    }
    current = std::move(produced);
  }

  // Lay the spaces out in the same weight order as WeightSystem.
  WeightSystem ws;
  ws.algebra = cd;
  ws.highest = hw.labels;
  for (const auto& [mu, sp] : spaces) {
    WeightEntry e;
    e.weight = mu;
    e.depth = sp.depth;
    e.level = sp.level;
    e.multiplicity = sp.dim;
    ws.entries.push_back(std::move(e));
  }
  std::sort(ws.entries.begin(), ws.entries.end(), [](const WeightEntry& a, const WeightEntry& b) {
    return a.level != b.level ? a.level < b.level : a.depth > b.depth;
  });
  int offset = 0;
  for (std::size_t k = 0; k < ws.entries.size(); ++k) {
    ws.index.emplace(ws.entries[k].weight, static_cast<int>(k));
    ws.entries[k].offset = offset;
    offset += ws.entries[k].multiplicity;
    ws.max_level = std::max(ws.max_level, ws.entries[k].level);
  }
  ws.dimension = offset;
  if (ws.dimension != dim) throw Error(ErrorCode::RankMismatch, "oracle dimension differs from the Weyl dimension");

  Representation& rep = out.rep;
  rep.algebra = cd;
  rep.highest = hw.labels;
  rep.ctx = ctx;
  rep.weights = ws;
  rep.basis = enumerate_basis(ws);
  rep.X_plus.assign(r, Eigen::MatrixXd::Zero(dim, dim));
  for (const auto& e : ws.entries) {
    const Space& sp = spaces.at(e.weight);
    for (int i = 0; i < r; ++i) {
      if (!sp.lower[i].size()) continue;
      const auto& up = *ws.find(add(e.weight, cd.cartan[i]));
      rep.X_plus[i].block(up.offset, e.offset, up.multiplicity, e.multiplicity) =
          to_double_matrix(MatrixX<T>(sp.lower[i].transpose()));
    }
  }
  finish_representation(rep);
  return out;
}

inline Representation oracle_build(const CartanData& cd, const HighestWeight& hw, const QContext& ctx,
                                   OracleOptions opts = {}) {
  return oracle_build_detailed(cd, hw, ctx, opts).rep;
}

struct TraceEvidence {
  std::string word;
  double a = 0.0;
  double b = 0.0;
};

struct GaugeComparison {
  bool equivalent = false;
  std::string reason;
  std::vector<TraceEvidence> evidence;
  double max_deviation = 0.0;
};

namespace detail {

/// Letters: 3i = X+_i, 3i+1 = X-_i, 3i+2 = R_i (h_i when classical).
inline std::vector<std::vector<int>> balanced_trace_words(int rank, int max_length) {
  std::vector<std::vector<int>> out;
  const int letters = 3 * rank;
  std::vector<int> w;
  auto canonical = [](const std::vector<int>& v) {
    std::vector<int> best = v;
    for (std::size_t s = 1; s < v.size(); ++s) {
      std::vector<int> rot(v.begin() + s, v.end());
      rot.insert(rot.end(), v.begin(), v.begin() + s);
      best = std::min(best, rot);
    }
    return best == v;
  };
  for (int len = 1; len <= max_length; ++len) {
    w.assign(len, 0);
    while (true) {
      std::vector<int> balance(rank, 0);
      for (int x : w) {
        if (x % 3 == 0) ++balance[x / 3];
        if (x % 3 == 1) --balance[x / 3];
      }
      if (std::all_of(balance.begin(), balance.end(), [](int b) { return b == 0; }) && canonical(w)) out.push_back(w);
      int pos = len - 1;
      while (pos >= 0 && ++w[pos] == letters) w[pos--] = 0;
      if (pos < 0) break;
    }
  }
  return out;
}

inline std::string word_name(const std::vector<int>& w, bool classical) {
  std::ostringstream s;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) s << ' ';
    const int i = w[k] / 3 + 1;
    switch (w[k] % 3) {
      case 0: s << "X+" << i; break;
      case 1: s << "X-" << i; break;
      default: s << (classical ? "H" : "R") << i; break;
    }
  }
  return s.str();
}

struct SparseAlphabet {
  std::vector<Eigen::SparseMatrix<double>> letters;
  std::vector<Eigen::SparseMatrix<double>> magnitudes;
};

inline SparseAlphabet sparse_alphabet(const Representation& rep) {
  SparseAlphabet al;
  for (int i = 0; i < rep.rank(); ++i) {
    const Eigen::MatrixXd diag = (rep.ctx.classical ? rep.H[i] : rep.R[i]).asDiagonal();
    for (const Eigen::MatrixXd* m : {&rep.X_plus[i], &rep.X_minus[i], &diag}) {
      al.letters.push_back(m->sparseView(1.0, 1e-300));
      al.magnitudes.push_back(m->cwiseAbs().sparseView(1.0, 1e-300));
    }
  }
  return al;
}

inline std::pair<double, double> word_trace(const SparseAlphabet& al, const std::vector<int>& w) {
  Eigen::SparseMatrix<double> p = al.letters[w[0]];
  Eigen::SparseMatrix<double> q = al.magnitudes[w[0]];
  for (std::size_t k = 1; k < w.size(); ++k) {
    p = (p * al.letters[w[k]]).pruned();
    q = (q * al.magnitudes[w[k]]).pruned();
  }
  double t = 0.0, s = 0.0;
  for (int k = 0; k < p.outerSize(); ++k) t += p.coeff(k, k);
  for (int k = 0; k < q.outerSize(); ++k) s += q.coeff(k, k);
  return {t, s};
}

}  // namespace detail

/// Compares traces of balanced words of length <= max_length.  A deviation is
/// measured against the trace of the entrywise absolute values, which bounds
/// the rounding error of either trace.
inline GaugeComparison gauge_equivalent(const Representation& a, const Representation& b, double tol = 1e-9,
                                        int max_length = 4) {
  GaugeComparison out;
  if (!(a.algebra.cartan == b.algebra.cartan)) {
    out.reason = "different Cartan matrices";
    return out;
  }
  if (a.highest != b.highest) out.reason = "different highest weights";
  if (a.ctx.classical != b.ctx.classical || (!a.ctx.classical && a.ctx.t != b.ctx.t)) {
    out.reason = "different deformation parameters";
    return out;
  }
  if (a.dimension() != b.dimension()) {
    out.reason = "dimensions " + std::to_string(a.dimension()) + " and " + std::to_string(b.dimension());
    return out;
  }
  const auto sa = detail::sparse_alphabet(a);
  const auto sb = detail::sparse_alphabet(b);
  bool ok = true;
  for (const auto& w : detail::balanced_trace_words(a.rank(), max_length)) {
    const auto [ta, ma] = detail::word_trace(sa, w);
    const auto [tb, mb] = detail::word_trace(sb, w);
    const double scale = std::max({1.0, ma, mb});
    const double dev = std::fabs(ta - tb) / scale;
    out.max_deviation = std::max(out.max_deviation, dev);
    out.evidence.push_back({detail::word_name(w, a.ctx.classical), ta, tb});
    if (dev > tol && ok) {
      ok = false;
      out.reason = "trace of " + out.evidence.back().word + " differs";
    }
  }
  out.equivalent = ok && out.reason.empty();
  return out;
}

}  // namespace repgen
