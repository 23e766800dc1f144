#pragma once

/// @file precision.hpp
/// Extended-precision scalar (226-bit mantissa) used inside the level solver.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <Eigen/Core>

#include <cstdint>
#include <limits>

namespace repgen {

using Wide = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<226, boost::multiprecision::digit_base_2, void, std::int32_t, -262142, 262143>,
    boost::multiprecision::et_off>;

template <class T>
using MatrixX = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using VectorX = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using WideMatrix = MatrixX<Wide>;

template <class T>
inline double to_double_scalar(const T& x) {
  return static_cast<double>(x);
}

template <class T>
inline Eigen::MatrixXd to_double_matrix(const MatrixX<T>& m) {
  return m.unaryExpr([](const T& x) { return static_cast<double>(x); });
}

}  // namespace repgen

namespace Eigen {

template <>
struct NumTraits<repgen::Wide> : GenericNumTraits<repgen::Wide> {
  using Real = repgen::Wide;
  using NonInteger = repgen::Wide;
  using Nested = repgen::Wide;
  using Literal = repgen::Wide;
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 4,
    MulCost = 8
  };
  static inline Real epsilon() { return std::numeric_limits<Real>::epsilon(); }
  static inline Real dummy_precision() { return Real(1e-60); }
  static inline int digits10() { return std::numeric_limits<Real>::digits10; }
  static inline int digits() { return std::numeric_limits<Real>::digits; }
};

}  // namespace Eigen
