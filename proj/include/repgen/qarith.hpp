#pragma once

/// @file qarith.hpp
/// Evaluation of q-numbers [n]_w = sinh(n w t) / sinh(w t) at a concrete
/// deformation parameter t, with an exact classical branch (t = 0).

#include "repgen/error.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace repgen {

struct QContext {
  double t = 0.0;
  bool classical = true;

  static QContext classical_limit() { return {}; }
  static QContext deformed(double t) {
    if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "deformation parameter must be positive");
    return {t, false};
  }
};

namespace detail {

// log(sinh x) for x > 0 without overflow.
inline double log_sinh(double x) {
  if (x > 20.0) return x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0);
  return std::log(std::sinh(x));
}

}  // namespace detail

/// [n]_w at the context's t; n may be any integer (the ratio is odd in n).
/// T selects the arithmetic.
template <class T = double>
inline T qint(int n, double w, const QContext& ctx) {
  using std::exp;
  using std::sinh;
  if (ctx.classical) return T(n);
  if (n == 0) return T(0);
  if (n < 0) return -qint<T>(-n, w, ctx);
  if (n == 1) return T(1);
  const T x = T(w) * T(ctx.t);
  if (n * static_cast<double>(x) > 350.0) {
    // exp((n-1)x) (1 - e^{-2nx}) / (1 - e^{-2x})
    return exp(T(n - 1) * x) * (T(1) - exp(T(-2 * n) * x)) / (T(1) - exp(T(-2) * x));
  }
  return sinh(T(n) * x) / sinh(x);
}

/// Symmetric q-binomial coefficient built from [.]_w.
template <class T = double>
inline T qbinomial(int n, int k, double w, const QContext& ctx) {
  if (k < 0 || k > n) return T(0);
  T r(1);
  for (int i = 1; i <= k; ++i) r *= qint<T>(n - k + i, w, ctx) / qint<T>(i, w, ctx);
  return r;
}

/// One factor sinh(n w t): the pair is (n, w).
using SinhFactor = std::pair<int, double>;

/// Positive square root of prod sinh(n_i w_i t) / prod sinh(m_j v_j t).
/// In the classical limit the factor counts must agree and the value is
/// sqrt(prod n_i w_i / prod m_j v_j).
inline double qfactor_sqrt(const std::vector<SinhFactor>& numerators,
                           const std::vector<SinhFactor>& denominators, const QContext& ctx) {
  if (ctx.classical) {
    if (numerators.size() != denominators.size())
      throw Error(ErrorCode::InvalidArgument, "classical limit of an unbalanced sinh ratio");
    double num = 1.0, den = 1.0;
    for (const auto& [n, w] : numerators) num *= n * w;
    for (const auto& [m, v] : denominators) den *= m * v;
    const double r = num / den;
    if (r < 0.0) throw Error(ErrorCode::NegativeRadicand, "negative classical radicand");
    return std::sqrt(r);
  }
  double log_abs = 0.0;
  int sign = 1;
  auto accumulate = [&](const SinhFactor& f, int power) {
    const double x = f.first * f.second * ctx.t;
    if (x == 0.0) {
      if (power < 0) throw Error(ErrorCode::InvalidArgument, "zero denominator factor");
      log_abs = -INFINITY;
      return;
    }
    if (x < 0.0) sign = -sign;
    log_abs += power * detail::log_sinh(std::fabs(x));
  };
  for (const auto& f : numerators) accumulate(f, 1);
  for (const auto& f : denominators) accumulate(f, -1);
  if (log_abs == -INFINITY) return 0.0;
  if (sign < 0) throw Error(ErrorCode::NegativeRadicand, "negative sinh product");
  return std::exp(0.5 * log_abs);
}

}  // namespace repgen
