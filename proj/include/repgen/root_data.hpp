#pragma once

/// @file root_data.hpp
/// Cartan matrices, symmetrizers, Weyl groups and positive roots.
///
/// Conventions used throughout the library:
///  - A weight is stored by its Dynkin labels (the eigenvalues of h_1..h_r).
///    These coincide with the exponent coordinates of the character, i.e. the
///    character is sum_mu C_mu exp(sum_i tau_i mu_i).
///  - Row i of the Cartan matrix K is the simple root alpha_i in Dynkin labels,
///    so K(j,i) is the shift of the h_i eigenvalue produced by X^+_j.
///  - The symmetrizer w satisfies K(i,j) w_j = K(j,i) w_i; the symmetrized
///    Cartan matrix is Ktilde(i,j) = K(i,j) w_j and (alpha_i, alpha_i) = 2 w_i.

#include "repgen/error.hpp"
#include "repgen/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <optional>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <vector>

namespace repgen {

using Weight = std::vector<int>;

struct CartanData {
  int rank = 0;
  IntMatrix cartan;
  std::vector<Rational> weights;
  RationalMatrix cartan_inverse;
  /// Half the sum of the positive roots; all Dynkin labels equal one.
  Weight rho;
  std::string label;

  int k(int i, int j) const { return cartan[i][j]; }
  double w(int i) const { return to_double(weights[i]); }

  /// Ktilde(i,j) = K(i,j) w_j.
  Rational symmetrized(int i, int j) const { return Rational(cartan[i][j]) * weights[j]; }

  /// Simple root alpha_i in Dynkin labels.
  Weight simple_root(int i) const { return cartan[i]; }

  /// Coefficients c with mu = sum_i c_i alpha_i (mu K^{-1}).
  std::vector<Rational> root_coordinates(const Weight& mu) const {
    std::vector<Rational> c(rank, Rational(0));
    for (int j = 0; j < rank; ++j)
      for (int i = 0; i < rank; ++i) c[j] += Rational(mu[i]) * cartan_inverse[i][j];
    return c;
  }

  /// Invariant form on weights: (omega_i, omega_j) = (K^{-1})_{ij} w_j.
  Rational inner(const Weight& a, const Weight& b) const {
    Rational s(0);
    for (int i = 0; i < rank; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; j < rank; ++j) {
        if (b[j] == 0) continue;
        s += Rational(a[i] * b[j]) * cartan_inverse[i][j] * weights[j];
      }
    }
    return s;
  }

  bool operator==(const CartanData& o) const {
    return rank == o.rank && cartan == o.cartan && weights == o.weights && label == o.label;
  }
};

namespace detail {

inline IntMatrix transpose(const IntMatrix& a) {
  IntMatrix t(a.size(), std::vector<int>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) t[j][i] = a[i][j];
  return t;
}

inline IntMatrix a_series(int n) {
  IntMatrix k(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i) {
    k[i][i] = 2;
    if (i + 1 < n) k[i][i + 1] = k[i + 1][i] = -1;
  }
  return k;
}

// Named matrices are given in the (i,j) = <alpha_i^vee, alpha_j> form and
// transposed into the row-is-root convention.
inline std::optional<IntMatrix> named_cartan(const std::string& name) {
  if (name.size() < 2) return std::nullopt;
  const char series = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
  int n = 0;
  try {
    n = std::stoi(name.substr(1));
  } catch (...) {
    return std::nullopt;
  }
  if (n < 1) return std::nullopt;
  IntMatrix a = a_series(n);
  switch (series) {
    case 'A': return a;
    case 'B':
      if (n < 2) return std::nullopt;
      if (n == 2) {
        // Root 1 short, root 2 long (the same matrix as C2).
        a[0][1] = -2;
        a[1][0] = -1;
      } else {
        a[n - 1][n - 2] = -2;
      }
      return transpose(a);
    case 'C':
      if (n < 2) return std::nullopt;
      a[n - 2][n - 1] = -2;
      return transpose(a);
    case 'D':
      if (n < 4) return std::nullopt;
      a[n - 2][n - 1] = a[n - 1][n - 2] = 0;
      a[n - 3][n - 1] = a[n - 1][n - 3] = -1;
      return a;
    case 'G':
      if (n != 2) return std::nullopt;
      a[0][1] = -3;
      return transpose(a);
    case 'F':
      if (n != 4) return std::nullopt;
      a[2][1] = -2;
      return transpose(a);
    default: return std::nullopt;
  }
}

}  // namespace detail

/// Validates an integer matrix and derives the symmetrizer, inverse and rho.
inline CartanData build_cartan_data(const IntMatrix& matrix, std::string label = {}) {
  const int r = static_cast<int>(matrix.size());
  if (r == 0) throw Error(ErrorCode::NotCartan, "empty matrix");
  for (const auto& row : matrix)
    if (static_cast<int>(row.size()) != r) throw Error(ErrorCode::NotCartan, "matrix is not square");
  for (int i = 0; i < r; ++i) {
    if (matrix[i][i] != 2) throw Error(ErrorCode::NotCartan, "diagonal entry is not 2");
    for (int j = 0; j < r; ++j) {
      if (i == j) continue;
      if (matrix[i][j] > 0) throw Error(ErrorCode::NotCartan, "positive off-diagonal entry");
      if ((matrix[i][j] == 0) != (matrix[j][i] == 0))
        throw Error(ErrorCode::NotCartan, "zero pattern is not symmetric");
    }
  }

  // Symmetrizer: propagate w_j = w_i K(j,i) / K(i,j) over each connected component.
  std::vector<Rational> w(r, Rational(0));
  std::vector<int> component(r, -1);
  int ncomp = 0;
  for (int s = 0; s < r; ++s) {
    if (component[s] >= 0) continue;
    std::queue<int> todo;
    todo.push(s);
    component[s] = ncomp;
    w[s] = Rational(1);
    while (!todo.empty()) {
      const int i = todo.front();
      todo.pop();
      for (int j = 0; j < r; ++j) {
        if (j == i || matrix[i][j] == 0) continue;
        const Rational wj = w[i] * Rational(matrix[j][i], matrix[i][j]);
        if (component[j] < 0) {
          component[j] = ncomp;
          w[j] = wj;
          todo.push(j);
        } else if (w[j] != wj) {
          throw Error(ErrorCode::NotSymmetrizable, "inconsistent symmetrizer on a cycle");
        }
      }
    }
    // Normalize so the smallest weight in the component is 1.
    Rational mn(0);
    bool first = true;
    for (int i = 0; i < r; ++i)
      if (component[i] == ncomp && (first || w[i] < mn)) {
        mn = w[i];
        first = false;
      }
    for (int i = 0; i < r; ++i)
      if (component[i] == ncomp) w[i] /= mn;
    ++ncomp;
  }

  auto inv = inverse(matrix);
  if (!inv) throw Error(ErrorCode::SingularCartan, "Cartan matrix is singular");

  CartanData cd;
  cd.rank = r;
  cd.cartan = matrix;
  cd.weights = std::move(w);
  cd.cartan_inverse = std::move(*inv);
  cd.rho.assign(r, 1);
  cd.label = std::move(label);
  return cd;
}

/// Accepts a name such as "B2" or "g2".
inline CartanData build_cartan_data(const std::string& name) {
  auto m = detail::named_cartan(name);
  if (!m) throw Error(ErrorCode::UnknownAlgebra, "unknown algebra '" + name + "'");
  std::string label = name;
  label[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(label[0])));
  return build_cartan_data(*m, label);
}

/// Parses "2,-1;-1,2".
inline IntMatrix parse_cartan_matrix(const std::string& text) {
  IntMatrix m;
  std::vector<int> row;
  std::string token;
  auto flush_token = [&] {
    if (token.empty()) throw Error(ErrorCode::InvalidArgument, "empty matrix entry in '" + text + "'");
    try {
      row.push_back(std::stoi(token));
    } catch (...) {
      throw Error(ErrorCode::InvalidArgument, "bad matrix entry '" + token + "'");
    }
    token.clear();
  };
  for (char ch : text) {
    if (ch == ' ') continue;
    if (ch == ',') {
      flush_token();
    } else if (ch == ';') {
      flush_token();
      m.push_back(std::move(row));
      row.clear();
    } else {
      token += ch;
    }
  }
  flush_token();
  m.push_back(std::move(row));
  return m;
}

struct WeylGroupElement {
  /// Action on Dynkin-label column vectors.
  IntMatrix matrix;
  int signature = 1;
  std::vector<int> word;

  Weight apply(const Weight& mu) const {
    Weight out(mu.size(), 0);
    for (std::size_t a = 0; a < mu.size(); ++a)
      for (std::size_t b = 0; b < mu.size(); ++b) out[a] += matrix[a][b] * mu[b];
    return out;
  }
};

struct WeylGroupOptions {
  int max_rank = 4;
  std::size_t max_order = 100000;
};

/// Reflection s_i(mu) = mu - mu_i alpha_i as a matrix.
inline IntMatrix simple_reflection(const CartanData& cd, int i) {
  IntMatrix m(cd.rank, std::vector<int>(cd.rank, 0));
  for (int a = 0; a < cd.rank; ++a) {
    m[a][a] = 1;
    m[a][i] -= cd.cartan[i][a];
  }
  return m;
}

/// Full Weyl group by breadth-first closure; identity first.
inline std::vector<WeylGroupElement> weyl_group(const CartanData& cd, WeylGroupOptions opts = {}) {
  if (cd.rank > opts.max_rank)
    throw Error(ErrorCode::GroupTooLarge, "rank " + std::to_string(cd.rank) + " exceeds configured bound");
  const int r = cd.rank;
  std::vector<IntMatrix> gens;
  for (int i = 0; i < r; ++i) gens.push_back(simple_reflection(cd, i));

  std::vector<WeylGroupElement> out;
  std::map<IntMatrix, std::size_t> seen;
  WeylGroupElement id;
  id.matrix.assign(r, std::vector<int>(r, 0));
  for (int i = 0; i < r; ++i) id.matrix[i][i] = 1;
  seen.emplace(id.matrix, 0);
  out.push_back(id);
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (int i = 0; i < r; ++i) {
      IntMatrix prod(r, std::vector<int>(r, 0));
      const IntMatrix& g = out[head].matrix;
      for (int a = 0; a < r; ++a)
        for (int c = 0; c < r; ++c) {
          if (gens[i][a][c] == 0) continue;
          for (int b = 0; b < r; ++b) prod[a][b] += gens[i][a][c] * g[c][b];
        }
      if (seen.count(prod)) continue;
      WeylGroupElement e;
      e.matrix = prod;
      e.word = out[head].word;
      e.word.insert(e.word.begin(), i);
      e.signature = -out[head].signature;
      seen.emplace(std::move(prod), out.size());
      out.push_back(std::move(e));
      if (out.size() > opts.max_order)
        throw Error(ErrorCode::GroupTooLarge, "Weyl group order exceeds cap");
    }
  }
  return out;
}

struct Root {
  Weight dynkin;
  std::vector<int> coords;  ///< coefficients on the simple roots
};

/// Positive roots by reflecting the simple roots to closure.
inline std::vector<Root> positive_roots(const CartanData& cd) {
  std::set<Weight> all;
  std::vector<Weight> stack;
  for (int i = 0; i < cd.rank; ++i) {
    all.insert(cd.simple_root(i));
    stack.push_back(cd.simple_root(i));
  }
  while (!stack.empty()) {
    Weight b = stack.back();
    stack.pop_back();
    for (int i = 0; i < cd.rank; ++i) {
      Weight s = b;
      for (int a = 0; a < cd.rank; ++a) s[a] -= b[i] * cd.cartan[i][a];
      if (all.insert(s).second) {
        if (all.size() > 100000) throw Error(ErrorCode::GroupTooLarge, "root system is not finite");
        stack.push_back(std::move(s));
      }
    }
  }
  std::vector<Root> pos;
  for (const auto& b : all) {
    auto c = cd.root_coordinates(b);
    bool positive = true;
    Root root{b, {}};
    for (const auto& x : c) {
      if (x < Rational(0)) positive = false;
      root.coords.push_back(static_cast<int>(x.numerator()));
    }
    if (positive) pos.push_back(std::move(root));
  }
  std::sort(pos.begin(), pos.end(), [](const Root& a, const Root& b) {
    const int ha = std::accumulate(a.coords.begin(), a.coords.end(), 0);
    const int hb = std::accumulate(b.coords.begin(), b.coords.end(), 0);
    return ha != hb ? ha < hb : a.coords > b.coords;
  });
  return pos;
}

/// True when nonzero off-diagonal entries only couple consecutive indices.
inline bool is_linear_diagram(const CartanData& cd) {
  for (int i = 0; i < cd.rank; ++i)
    for (int j = 0; j < cd.rank; ++j)
      if (std::abs(i - j) > 1 && cd.cartan[i][j] != 0) return false;
  return true;
}

}  // namespace repgen
