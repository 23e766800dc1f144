#pragma once

/// @file assembler.hpp
/// Full generator matrices of an irreducible representation, and the checks
/// of their defining relations.
///
/// Roots are processed in index order.  Root 0 is taken in its canonical
/// form, every later root is solved against all roots before it.

#include "repgen/canonical_blocks.hpp"
#include "repgen/error.hpp"
#include "repgen/qarith.hpp"
#include "repgen/rank2_mixer.hpp"
#include "repgen/weight_system.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace repgen {

struct Representation {
  CartanData algebra;
  Weight highest;
  QContext ctx;
  WeightSystem weights;
  std::vector<BasisLabel> basis;
  std::vector<Eigen::MatrixXd> X_plus;
  std::vector<Eigen::MatrixXd> X_minus;
  /// Diagonals of h_i, R_i = exp(w_i t h_i) and hbar^i.
  std::vector<Eigen::VectorXd> H;
  std::vector<Eigen::VectorXd> R;
  std::vector<Eigen::VectorXd> Hbar;
  /// Solutions for roots 1..r-1 (raising matrices moved into X_plus).
  std::vector<MixingSolution> mixing;

  int dimension() const { return weights.dimension; }
  int rank() const { return algebra.rank; }
};

struct AssembleOptions {
  long dimension_cap = 2000;
  SolverTolerances tolerances{};
};

/// Fills H, R, Hbar and X_minus from the weights and X_plus.
inline void finish_representation(Representation& rep) {
  const auto& cd = rep.algebra;
  const int n = rep.dimension();
  rep.X_minus.clear();
  for (const auto& x : rep.X_plus) rep.X_minus.push_back(x.transpose());
  rep.H.assign(cd.rank, Eigen::VectorXd(n));
  rep.R.assign(cd.rank, Eigen::VectorXd(n));
  rep.Hbar.assign(cd.rank, Eigen::VectorXd(n));
  for (const auto& e : rep.weights.entries) {
    const auto coords = cd.root_coordinates(e.weight);
    for (int i = 0; i < cd.rank; ++i) {
      rep.H[i].segment(e.offset, e.multiplicity).setConstant(e.weight[i]);
      const double r = rep.ctx.classical ? 1.0 : std::exp(cd.w(i) * rep.ctx.t * e.weight[i]);
      rep.R[i].segment(e.offset, e.multiplicity).setConstant(r);
      rep.Hbar[i].segment(e.offset, e.multiplicity).setConstant(to_double(coords[i]));
    }
  }
}

inline Representation assemble(const CartanData& cd, const HighestWeight& hw, const QContext& ctx,
                               AssembleOptions opts = {}) {
  if (!is_linear_diagram(cd))
    throw Error(ErrorCode::UnsupportedDiagram, "only linear Dynkin diagrams are supported");
  Representation rep;
  rep.algebra = cd;
  rep.highest = hw.labels;
  rep.ctx = ctx;
  rep.weights = weight_multiplicities(cd, hw, {opts.dimension_cap});
  rep.basis = enumerate_basis(rep.weights);
  std::vector<RaisingBlocks<Wide>> solved{canonical_raising_blocks<Wide>(rep.weights, decompose_strings(rep.weights, 0), ctx)};
  rep.X_plus.push_back(solved[0].dense(rep.weights));
  for (int j = 1; j < cd.rank; ++j) {
    MixingSolution sol = solve_root(rep.weights, solved, j, ctx, opts.tolerances, j == cd.rank - 1);
    if (cd.rank == 2) compute_rank2_observables(rep.weights, sol, ctx);
    rep.X_plus.push_back(std::move(sol.raising));
    sol.raising.resize(0, 0);
    solved.push_back(std::move(sol.blocks));
    sol.blocks.blocks.clear();
    rep.mixing.push_back(std::move(sol));
  }
  finish_representation(rep);
  return rep;
}

/// Diagonal matrices of the dual Cartan elements.
inline std::vector<Eigen::MatrixXd> dual_cartan(const Representation& rep) {
  std::vector<Eigen::MatrixXd> out;
  for (const auto& d : rep.Hbar) out.push_back(d.asDiagonal());
  return out;
}

struct ResidualReport {
  /// Largest relative residual per relation family.
  std::map<std::string, double> residuals;
  double tolerance = 1e-9;

  double max_residual() const {
    double m = 0.0;
    for (const auto& [k, v] : residuals) m = std::max(m, v);
    return m;
  }
  bool passed() const { return max_residual() < tolerance; }
};

namespace detail {

inline double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline Eigen::Block<const Eigen::MatrixXd> weight_block(const Eigen::MatrixXd& x, const WeightSystem& ws, int row,
                                                        int col) {
  const auto& r = ws.entries[row];
  const auto& c = ws.entries[col];
  return x.block(r.offset, c.offset, r.multiplicity, c.multiplicity);
}

inline double relative(const Eigen::MatrixXd& diff, double scale) { return max_abs(diff) / std::max(1.0, scale); }

inline Eigen::MatrixXd conjugate_by_diagonal(const Eigen::VectorXd& d, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd y = x;
  for (int b = 0; b < x.cols(); ++b)
    for (int a = 0; a < x.rows(); ++a) y(a, b) = x(a, b) * d(a) / d(b);
  return y;
}

inline Eigen::MatrixXd diagonal_commutator(const Eigen::VectorXd& d, const Eigen::MatrixXd& x) {
  return d.asDiagonal() * x - x * d.asDiagonal();
}

inline Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& x, int n) {
  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(x.rows(), x.cols());
  for (int k = 0; k < n; ++k) r = r * x;
  return r;
}

/// Largest relative residual of the q-Serre relation for (e_i, e_j).
inline double serre_residual(const Eigen::MatrixXd& ei, const Eigen::MatrixXd& ej, int n, double wi,
                             const QContext& ctx) {
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(ei.rows(), ei.cols());
  double scale = 0.0;
  for (int s = 0; s <= n; ++s) {
    const Eigen::MatrixXd term =
        qbinomial(n, s, wi, ctx) * matrix_power(ei, n - s) * ej * matrix_power(ei, s);
    scale = std::max(scale, max_abs(term));
    sum += (s % 2 ? -1.0 : 1.0) * term;
  }
  return relative(sum, scale);
}

}  // namespace detail

/// Residuals of the defining relations, the q-Serre relations, the dual Cartan
/// relations, transpose duality, selection rules and the character trace.
inline ResidualReport verify_defining_relations(const Representation& rep, double tol = 1e-9, int samples = 5,
                                                unsigned seed = 2024) {
  const auto& cd = rep.algebra;
  const auto& ctx = rep.ctx;
  const int r = cd.rank;
  const int n = rep.dimension();
  ResidualReport rep_out;
  rep_out.tolerance = tol;
  auto& res = rep_out.residuals;
  for (const char* key : {"transpose", "selection", "cartan", "dual_cartan", "commutator", "serre", "character"})
    res[key] = 0.0;

  for (int i = 0; i < r; ++i) {
    res["transpose"] = std::max(res["transpose"], detail::max_abs(rep.X_minus[i] - rep.X_plus[i].transpose()));
    // Nonzero entries only between weights differing by alpha_i.
    const double scale = std::max(1.0, detail::max_abs(rep.X_plus[i]));
    for (std::size_t a = 0; a < rep.weights.entries.size(); ++a)
      for (std::size_t b = 0; b < rep.weights.entries.size(); ++b) {
        if (rep.weights.shifted(static_cast<int>(b), i, +1) == static_cast<int>(a)) continue;
        const double v = detail::max_abs(detail::weight_block(rep.X_plus[i], rep.weights, a, b));
        res["selection"] = std::max(res["selection"], v / scale);
      }
  }

  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      const Eigen::MatrixXd& ep = rep.X_plus[j];
      const Eigen::MatrixXd& em = rep.X_minus[j];
      const double sp = detail::max_abs(ep);
      if (ctx.classical) {
        res["cartan"] = std::max(res["cartan"], detail::relative(detail::diagonal_commutator(rep.H[i], ep) - cd.cartan[j][i] * ep, sp));
        res["cartan"] = std::max(res["cartan"], detail::relative(detail::diagonal_commutator(rep.H[i], em) + cd.cartan[j][i] * em, sp));
      } else {
        const double f = std::exp(cd.w(i) * ctx.t * cd.cartan[j][i]);
        res["cartan"] = std::max(res["cartan"], detail::relative(detail::conjugate_by_diagonal(rep.R[i], ep) - f * ep, f * sp));
        res["cartan"] = std::max(res["cartan"], detail::relative(detail::conjugate_by_diagonal(rep.R[i], em) - em / f, sp));
      }
      const double d = i == j ? 1.0 : 0.0;
      res["dual_cartan"] = std::max(res["dual_cartan"], detail::relative(detail::diagonal_commutator(rep.Hbar[i], ep) - d * ep, sp));
      res["dual_cartan"] = std::max(res["dual_cartan"], detail::relative(detail::diagonal_commutator(rep.Hbar[i], em) + d * em, sp));
      if (!ctx.classical) {
        Eigen::VectorXd rb(n);
        for (int a = 0; a < n; ++a) rb(a) = std::exp(rep.Hbar[i](a) * ctx.t);
        const double g = std::exp(d * ctx.t);
        res["dual_cartan"] = std::max(res["dual_cartan"], detail::relative(detail::conjugate_by_diagonal(rb, ep) - g * ep, g * sp));
      }

      const Eigen::MatrixXd pm = rep.X_plus[i] * em;
      const Eigen::MatrixXd mp = em * rep.X_plus[i];
      Eigen::MatrixXd c = pm - mp;
      if (i == j)
        for (int a = 0; a < n; ++a) c(a, a) -= qint(static_cast<int>(std::lround(rep.H[i](a))), cd.w(i), ctx);
      res["commutator"] = std::max(res["commutator"], detail::relative(c, std::max(detail::max_abs(pm), detail::max_abs(mp))));

      if (i != j) {
        const int power = 1 - cd.cartan[j][i];
        res["serre"] = std::max(res["serre"], detail::serre_residual(rep.X_plus[i], rep.X_plus[j], power, cd.w(i), ctx));
        res["serre"] = std::max(res["serre"], detail::serre_residual(rep.X_minus[i], rep.X_minus[j], power, cd.w(i), ctx));
      }
    }

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const HighestWeight hw(rep.highest);
  const auto group = weyl_group(cd);
  for (int s = 0; s < samples; ++s) {
    std::vector<double> tau(r);
    double ref = 0.0;
    for (bool ok = false; !ok;) {
      for (auto& x : tau) x = uni(rng);
      try {
        ref = character_value(cd, hw, tau, group);
        ok = true;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularDenominator) throw;
      }
    }
    long double trace = 0.0L;
    for (int a = 0; a < n; ++a) {
      long double x = 0.0L;
      for (int i = 0; i < r; ++i) x += static_cast<long double>(tau[i]) * rep.H[i](a);
      trace += std::exp(x);
    }
    res["character"] = std::max(res["character"], std::fabs(static_cast<double>(trace) - ref) / std::fabs(ref));
  }
  return rep_out;
}

}  // namespace repgen
