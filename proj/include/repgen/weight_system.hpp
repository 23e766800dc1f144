#pragma once

/// @file weight_system.hpp
/// Weight systems of irreducible highest-weight modules.
///
/// Multiplicities come from Freudenthal's recursion in exact rational
/// arithmetic. The Weyl character formula (alternating orbit sums) is kept as
/// a separate evaluation path, used to cross-check the multiplicities through
/// character values.

#include "repgen/error.hpp"
#include "repgen/rational.hpp"
#include "repgen/root_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace repgen {

struct HighestWeight {
  Weight labels;

  explicit HighestWeight(Weight l) : labels(std::move(l)) {
    for (int x : labels)
      if (x < 0) throw Error(ErrorCode::InvalidArgument, "highest weight labels must be nonnegative");
  }
  int size() const { return static_cast<int>(labels.size()); }
  bool operator==(const HighestWeight&) const = default;
};

/// Parses "2,1".
inline HighestWeight parse_highest_weight(const std::string& text) {
  Weight w;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = std::min(text.find(',', pos), text.size());
    const std::string tok = text.substr(pos, next - pos);
    try {
      w.push_back(std::stoi(tok));
    } catch (...) {
      throw Error(ErrorCode::InvalidArgument, "bad highest weight '" + text + "'");
    }
    pos = next + 1;
  }
  return HighestWeight(std::move(w));
}

struct WeightEntry {
  Weight weight;
  /// Number of lowerings m_1..m_r needed from the highest weight.
  std::vector<int> depth;
  int level = 0;
  int multiplicity = 0;
  /// Position of the first basis vector of this weight space.
  int offset = 0;
};

struct WeightSystem {
  CartanData algebra;
  Weight highest;
  /// Sorted by level, then by depth in descending lexicographic order.
  std::vector<WeightEntry> entries;
  std::map<Weight, int> index;
  int dimension = 0;
  int max_level = 0;

  const WeightEntry* find(const Weight& mu) const {
    auto it = index.find(mu);
    return it == index.end() ? nullptr : &entries[it->second];
  }
  int find_index(const Weight& mu) const {
    auto it = index.find(mu);
    return it == index.end() ? -1 : it->second;
  }
  int multiplicity(const Weight& mu) const {
    const auto* e = find(mu);
    return e ? e->multiplicity : 0;
  }
  /// Index of mu + sign * alpha_i, or -1.
  int shifted(int entry, int i, int sign) const {
    Weight mu = entries[entry].weight;
    for (int a = 0; a < algebra.rank; ++a) mu[a] += sign * algebra.cartan[i][a];
    return find_index(mu);
  }
};

struct WeightSystemOptions {
  long dimension_cap = 100000;
};

inline Weight add(const Weight& a, const Weight& b, int scale = 1) {
  Weight c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += scale * b[i];
  return c;
}

/// Weyl's dimension formula: prod over positive roots of (lambda+rho, alpha)/(rho, alpha).
inline long weyl_dimension(const CartanData& cd, const HighestWeight& hw) {
  if (hw.size() != cd.rank) throw Error(ErrorCode::InvalidArgument, "highest weight has wrong length");
  Rational d(1);
  for (const auto& root : positive_roots(cd)) {
    Rational num(0), den(0);
    for (int i = 0; i < cd.rank; ++i) {
      num += Rational(root.coords[i] * (hw.labels[i] + 1)) * cd.weights[i];
      den += Rational(root.coords[i]) * cd.weights[i];
    }
    d *= num / den;
  }
  if (d.denominator() != 1) throw Error(ErrorCode::InconsistentSystem, "non-integral Weyl dimension");
  return static_cast<long>(d.numerator());
}

/// Complete weight system with Freudenthal multiplicities.
inline WeightSystem weight_multiplicities(const CartanData& cd, const HighestWeight& hw,
                                          WeightSystemOptions opts = {}) {
  const long dim = weyl_dimension(cd, hw);
  if (dim > opts.dimension_cap)
    throw Error(ErrorCode::DimensionCapExceeded,
                "dimension " + std::to_string(dim) + " exceeds cap " + std::to_string(opts.dimension_cap));
  const int r = cd.rank;

  // Saturated set generated by the highest weight.
  std::map<Weight, std::vector<int>> depth;
  std::vector<Weight> order{hw.labels};
  depth.emplace(hw.labels, std::vector<int>(r, 0));
  for (std::size_t head = 0; head < order.size(); ++head) {
    const Weight mu = order[head];
    const std::vector<int> d = depth.at(mu);
    for (int i = 0; i < r; ++i) {
      for (int k = 1; k <= mu[i]; ++k) {
        Weight nu = add(mu, cd.cartan[i], -k);
        if (depth.count(nu)) continue;
        std::vector<int> dn = d;
        dn[i] += k;
        depth.emplace(nu, std::move(dn));
        order.push_back(std::move(nu));
      }
    }
  }

  WeightSystem ws;
  ws.algebra = cd;
  ws.highest = hw.labels;
  for (auto& [mu, d] : depth) {
    WeightEntry e;
    e.weight = mu;
    e.depth = d;
    e.level = std::accumulate(d.begin(), d.end(), 0);
    ws.entries.push_back(std::move(e));
  }
  std::sort(ws.entries.begin(), ws.entries.end(), [](const WeightEntry& a, const WeightEntry& b) {
    return a.level != b.level ? a.level < b.level : a.depth > b.depth;
  });
  for (std::size_t n = 0; n < ws.entries.size(); ++n) ws.index.emplace(ws.entries[n].weight, static_cast<int>(n));

  // Freudenthal recursion, top down.
  const auto roots = positive_roots(cd);
  const Weight lr = add(hw.labels, cd.rho);
  const Rational top = cd.inner(lr, lr);
  std::vector<Rational> root_norms;
  for (const auto& a : roots) root_norms.push_back(cd.inner(a.dynkin, a.dynkin));
  for (auto& e : ws.entries) {
    if (e.level == 0) {
      e.multiplicity = 1;
      continue;
    }
    Rational sum(0);
    for (std::size_t a = 0; a < roots.size(); ++a) {
      Weight nu = e.weight;
      for (int k = 1;; ++k) {
        nu = add(nu, roots[a].dynkin);
        const int idx = ws.find_index(nu);
        if (idx < 0) break;
        sum += Rational(ws.entries[idx].multiplicity) * cd.inner(nu, roots[a].dynkin);
      }
    }
    const Weight mr = add(e.weight, cd.rho);
    const Rational denom = top - cd.inner(mr, mr);
    if (denom <= Rational(0)) throw Error(ErrorCode::InconsistentSystem, "Freudenthal denominator vanished");
    const Rational m = Rational(2) * sum / denom;
    if (m.denominator() != 1 || m < Rational(0)) throw Error(ErrorCode::InconsistentSystem, "non-integral multiplicity");
    e.multiplicity = static_cast<int>(m.numerator());
  }

  // Weights of multiplicity zero cannot occur in a saturated set; keep the check cheap.
  int offset = 0;
  for (auto& e : ws.entries) {
    if (e.multiplicity <= 0) throw Error(ErrorCode::InconsistentSystem, "weight with vanishing multiplicity");
    e.offset = offset;
    offset += e.multiplicity;
    ws.max_level = std::max(ws.max_level, e.level);
  }
  ws.dimension = offset;
  if (ws.dimension != dim) throw Error(ErrorCode::InconsistentSystem, "multiplicities do not sum to the Weyl dimension");
  return ws;
}

/// Sum of multiplicities per level.
inline std::vector<int> level_dimensions(const WeightSystem& ws) {
  std::vector<int> out(ws.max_level + 1, 0);
  for (const auto& e : ws.entries) out[e.level] += e.multiplicity;
  return out;
}

/// sum_mu C_mu exp(tau . mu)
inline double character_from_weights(const WeightSystem& ws, std::span<const double> tau) {
  long double s = 0.0L;
  for (const auto& e : ws.entries) {
    long double x = 0.0L;
    for (std::size_t i = 0; i < tau.size(); ++i) x += static_cast<long double>(tau[i]) * e.weight[i];
    s += e.multiplicity * std::exp(x);
  }
  return static_cast<double>(s);
}

/// Weyl character formula as a ratio of alternating orbit sums.  tau = 0
/// returns the dimension; vanishing denominators raise SingularDenominator.
inline double character_value(const CartanData& cd, const HighestWeight& hw, std::span<const double> tau,
                              const std::vector<WeylGroupElement>& group) {
  if (static_cast<int>(tau.size()) != cd.rank) throw Error(ErrorCode::InvalidArgument, "tau has wrong length");
  if (std::all_of(tau.begin(), tau.end(), [](double x) { return x == 0.0; }))
    return static_cast<double>(weyl_dimension(cd, hw));
  const Weight lr = add(hw.labels, cd.rho);
  long double num = 0.0L, den = 0.0L, scale = 0.0L;
  for (const auto& g : group) {
    const Weight a = g.apply(lr);
    const Weight b = g.apply(cd.rho);
    long double xa = 0.0L, xb = 0.0L;
    for (int i = 0; i < cd.rank; ++i) {
      xa += static_cast<long double>(tau[i]) * a[i];
      xb += static_cast<long double>(tau[i]) * b[i];
    }
    num += g.signature * std::exp(xa);
    const long double eb = std::exp(xb);
    den += g.signature * eb;
    scale += eb;
  }
  if (std::fabs(den) < 1e-9L * scale) throw Error(ErrorCode::SingularDenominator, "tau lies on a Weyl wall");
  return static_cast<double>(num / den);
}

inline double character_value(const CartanData& cd, const HighestWeight& hw, std::span<const double> tau) {
  return character_value(cd, hw, tau, weyl_group(cd));
}

/// Two-variable sinh ratio for B2 (p, q), with a = tau_1 and b = tau_2 - tau_1.
inline double b2_character_closed_form(int p, int q, double tau1, double tau2) {
  const double a = tau1, b = tau2 - tau1;
  const int l1 = p + q + 2, l2 = q + 1;
  const double den = std::sinh(2 * a) * std::sinh(b) - std::sinh(2 * b) * std::sinh(a);
  if (std::fabs(den) < 1e-300) throw Error(ErrorCode::SingularDenominator, "closed form is singular at this tau");
  return (std::sinh(l1 * a) * std::sinh(l2 * b) - std::sinh(l1 * b) * std::sinh(l2 * a)) / den;
}

namespace detail {

/// Value at s = 0 of s -> f(tau + s d) by polynomial extrapolation from
/// nodes +-0.03k, k = 1..8, for a random unit direction d.
template <class F>
inline double limit_along_line(F&& f, const std::vector<double>& tau, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> d(tau.size());
  double norm = 0.0;
  for (auto& x : d) norm += (x = normal(rng)) * x;
  for (auto& x : d) x /= std::sqrt(norm);
  std::vector<double> s, v;
  for (int k = 1; k <= 8; ++k)
    for (int sign : {-1, 1}) {
      const double h = sign * 0.03 * k;
      std::vector<double> p = tau;
      for (std::size_t i = 0; i < p.size(); ++i) p[i] += h * d[i];
      s.push_back(h);
      v.push_back(f(p));
    }
  // Neville's scheme at 0.
  for (std::size_t m = 1; m < s.size(); ++m)
    for (std::size_t i = 0; i + m < s.size(); ++i) v[i] = (s[i + m] * v[i] - s[i] * v[i + 1]) / (s[i + m] - s[i]);
  return v[0];
}

}  // namespace detail

/// Weyl formula, continued analytically onto the walls.
inline double character_value_regular(const CartanData& cd, const HighestWeight& hw, std::span<const double> tau,
                                      const std::vector<WeylGroupElement>& group, unsigned seed = 7) {
  try {
    return character_value(cd, hw, tau, group);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularDenominator) throw;
  }
  return detail::limit_along_line([&](const std::vector<double>& p) { return character_value(cd, hw, p, group); },
                                  std::vector<double>(tau.begin(), tau.end()), seed);
}

inline double b2_character_closed_form_regular(int p, int q, double tau1, double tau2, unsigned seed = 7) {
  const double a = tau1, b = tau2 - tau1;
  const double den = std::sinh(2 * a) * std::sinh(b) - std::sinh(2 * b) * std::sinh(a);
  const double scale = std::cosh(2 * a) * std::cosh(2 * b);
  if (std::fabs(den) > 1e-6 * scale) return b2_character_closed_form(p, q, tau1, tau2);
  return detail::limit_along_line([&](const std::vector<double>& x) { return b2_character_closed_form(p, q, x[0], x[1]); },
                                  {tau1, tau2}, seed);
}

/// Retries along a random direction when tau hits a wall (eps 1e-6, 5 tries).
inline double character_value_perturbed(const CartanData& cd, const HighestWeight& hw, std::vector<double> tau,
                                        unsigned seed = 12345) {
  const auto group = weyl_group(cd);
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  for (int attempt = 0;; ++attempt) {
    try {
      return character_value(cd, hw, tau, group);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularDenominator || attempt == 5) throw;
      for (auto& x : tau) x += 1e-6 * normal(rng);
    }
  }
}

struct BasisLabel {
  Weight weight;
  int level = 0;
  std::vector<int> depth;
  /// Per simple root s: (A1 representation index, quantum number m_s).
  std::vector<std::pair<int, int>> string_data;
  /// 1-based position inside the weight space.
  int fine_index = 1;
};

/// Basis labels in storage order.
inline std::vector<BasisLabel> enumerate_basis(const WeightSystem& ws) {
  const auto& cd = ws.algebra;
  std::vector<BasisLabel> out;
  out.reserve(ws.dimension);
  for (const auto& e : ws.entries) {
    std::vector<std::pair<int, int>> sd;
    for (int s = 0; s < cd.rank; ++s) {
      int index = ws.highest[s];
      for (int t = 0; t < cd.rank; ++t)
        if (t != s) index -= e.depth[t] * cd.cartan[t][s];
      sd.emplace_back(index, e.depth[s]);
    }
    for (int m = 1; m <= e.multiplicity; ++m) out.push_back({e.weight, e.level, e.depth, sd, m});
  }
  return out;
}

struct BranchComponent {
  Weight highest;
  int multiplicity = 0;
  long dimension = 0;
};

inline CartanData rank2_subalgebra(const CartanData& cd, int i, int j) {
  IntMatrix sub{{cd.cartan[i][i], cd.cartan[i][j]}, {cd.cartan[j][i], cd.cartan[j][j]}};
  return build_cartan_data(sub, cd.label + "[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]");
}

/// Decomposition of the restriction to the subalgebra generated by roots i, j.
inline std::vector<BranchComponent> branch_to_rank2(const WeightSystem& ws, int i, int j) {
  const auto& cd = ws.algebra;
  if (i == j || i < 0 || j < 0 || i >= cd.rank || j >= cd.rank)
    throw Error(ErrorCode::InvalidArgument, "branching needs two distinct roots");
  if (cd.cartan[i][j] == 0) throw Error(ErrorCode::InvalidArgument, "roots are not adjacent");
  const CartanData sub = rank2_subalgebra(cd, i, j);
  std::map<Weight, int> remaining;
  for (const auto& e : ws.entries) remaining[{e.weight[i], e.weight[j]}] += e.multiplicity;

  std::vector<BranchComponent> out;
  while (!remaining.empty()) {
    // The top element has maximal height in root coordinates.
    auto height = [&](const Weight& mu) {
      auto c = sub.root_coordinates(mu);
      return c[0] + c[1];
    };
    auto best = remaining.begin();
    for (auto it = remaining.begin(); it != remaining.end(); ++it)
      if (height(it->first) > height(best->first)) best = it;
    const Weight top = best->first;
    const int count = best->second;
    if (top[0] < 0 || top[1] < 0) throw Error(ErrorCode::InconsistentSystem, "non-dominant top in branching");
    const auto piece = weight_multiplicities(sub, HighestWeight(top));
    for (const auto& e : piece.entries) {
      auto it = remaining.find(e.weight);
      if (it == remaining.end() || it->second < count * e.multiplicity)
        throw Error(ErrorCode::InconsistentSystem, "restricted character is not a sum of irreducibles");
      it->second -= count * e.multiplicity;
      if (it->second == 0) remaining.erase(it);
    }
    out.push_back({top, count, piece.dimension});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.highest > b.highest; });
  return out;
}

}  // namespace repgen
