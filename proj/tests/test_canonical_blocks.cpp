#include "repgen/canonical_blocks.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace repgen;
using repgen::testing::entry_at_depth;
using repgen::testing::max_abs;

namespace {

constexpr double kT = 0.5;

double r1(int n) { return std::sqrt(std::sinh(n * kT) / std::sinh(kT)); }
double r2(int n) { return std::sqrt(std::sinh(2 * n * kT) / std::sinh(2 * kT)); }

Eigen::MatrixXd mat(int rows, int cols, std::initializer_list<double> v) {
  Eigen::MatrixXd m(rows, cols);
  auto it = v.begin();
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = *it++;
  return m;
}

struct Fixture {
  CartanData cd = build_cartan_data("B2");
  WeightSystem ws = weight_multiplicities(cd, HighestWeight({2, 1}));
  QContext ctx = QContext::deformed(kT);
  StringDecomposition s1 = decompose_strings(ws, 0);
  StringDecomposition s2 = decompose_strings(ws, 1);
  Eigen::MatrixXd e1 = canonical_raising(ws, s1, ctx);

  // Raising block of root 1 from depth (a + 1, s) to depth (a, s).
  Eigen::MatrixXd raise1(int s, int a) const {
    return repgen::testing::block_between(e1, ws, entry_at_depth(ws, a, s), entry_at_depth(ws, a + 1, s));
  }

  // Lowering block of root 2, in its own canonical basis, from depth (u, b - 1) to depth (u, b).
  Eigen::MatrixXd lower2(int u, int b) const {
    const int from = entry_at_depth(ws, u, b - 1), to = entry_at_depth(ws, u, b);
    const auto [si, pos] = s2.location[from];
    const auto& str = s2.strings[si];
    EXPECT_EQ(str.entries[pos + 1], to);
    return canonical_raising_block<double>(str, pos, cd.w(1), ctx).transpose();
  }
};

void expect_block(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
  ASSERT_EQ(got.rows(), want.rows());
  ASSERT_EQ(got.cols(), want.cols());
  EXPECT_LT(max_abs(got - want), 1e-12) << "got\n" << got << "\nwant\n" << want;
}

}  // namespace

TEST(CanonicalBlocks, B2FirstRootReferenceBlocks) {
  const Fixture f;
  const double a = r1(2), b = r1(3), c = r1(4);
  expect_block(f.raise1(0, 0), mat(1, 1, {a}));
  expect_block(f.raise1(0, 1), mat(1, 1, {a}));

  const Eigen::MatrixXd k0 = c * mat(1, 2, {1, 0});
  const Eigen::MatrixXd k1 = a * mat(2, 3, {0, b, 0, 1, 0, 0});
  const Eigen::MatrixXd k2 = a * mat(3, 2, {0, 1, b, 0, 0, 0});
  const Eigen::MatrixXd k3 = c * mat(2, 1, {1, 0});
  expect_block(f.raise1(1, 0), k0);
  expect_block(f.raise1(1, 1), k1);
  expect_block(f.raise1(1, 2), k2);
  expect_block(f.raise1(1, 3), k3);

  expect_block(f.raise1(2, 1), c * mat(1, 3, {1, 0, 0}));
  expect_block(f.raise1(2, 2), a * mat(3, 3, {0, 0, b, 0, 1, 0, 1, 0, 0}));
  expect_block(f.raise1(2, 3), a * mat(3, 3, {0, 0, 1, 0, 1, 0, b, 0, 0}));
  expect_block(f.raise1(2, 4), c * mat(3, 1, {1, 0, 0}));

  expect_block(f.raise1(3, 2), k0);
  expect_block(f.raise1(3, 3), k1);
  expect_block(f.raise1(3, 4), k2);
  expect_block(f.raise1(3, 5), k3);

  expect_block(f.raise1(4, 4), mat(1, 1, {a}));
  expect_block(f.raise1(4, 5), mat(1, 1, {a}));
}

TEST(CanonicalBlocks, B2SecondRootReferenceBlocks) {
  const Fixture f;
  const double s2 = r2(2), s3 = r2(3);
  const double ratio = std::sinh(4 * kT) / std::sinh(2 * kT);
  expect_block(f.lower2(0, 1), mat(1, 1, {1}));

  const Eigen::MatrixXd a0 = s2 * mat(2, 1, {1, 0});
  const Eigen::MatrixXd a1 = s2 * mat(1, 2, {1, 0});
  expect_block(f.lower2(1, 1), a0);
  expect_block(f.lower2(1, 2), a1);

  const Eigen::MatrixXd b0 = s3 * mat(3, 1, {1, 0, 0});
  const Eigen::MatrixXd b1 = mat(3, 3, {0, 0, 1, 0, 1, 0, ratio, 0, 0});
  const Eigen::MatrixXd b2 = s3 * mat(1, 3, {0, 0, 1});
  expect_block(f.lower2(2, 1), b0);
  expect_block(f.lower2(2, 2), b1);
  expect_block(f.lower2(2, 3), b2);

  expect_block(f.lower2(3, 2), s2 * mat(3, 2, {1, 0, 0, 1, 0, 0}));
  expect_block(f.lower2(3, 3), s2 * mat(2, 3, {0, 1, 0, 1, 0, 0}));

  expect_block(f.lower2(4, 2), b0);
  expect_block(f.lower2(4, 3), b1);
  expect_block(f.lower2(4, 4), b2);

  expect_block(f.lower2(5, 3), a0);
  expect_block(f.lower2(5, 4), a1);

  expect_block(f.lower2(6, 4), mat(1, 1, {1}));
}

TEST(CanonicalBlocks, StringShapes) {
  const Fixture f;
  // Root 1 through depth (0, 1): a five-position string with dimensions 1, 2, 3, 2, 1.
  const auto [si, pos] = f.s1.location[entry_at_depth(f.ws, 0, 1)];
  EXPECT_EQ(pos, 0);
  EXPECT_EQ(f.s1.strings[si].dims, (std::vector<int>{1, 2, 3, 2, 1}));
  EXPECT_EQ(f.s1.strings[si].length, 4);
}

TEST(CanonicalBlocks, A1RelationHoldsForEveryRoot) {
  for (const auto& c : repgen::testing::relation_cases()) {
    const auto cd = build_cartan_data(c.algebra);
    const auto ws = weight_multiplicities(cd, HighestWeight(c.highest));
    for (const auto& ctx : repgen::testing::sweep_contexts())
      for (int r = 0; r < cd.rank; ++r)
        EXPECT_LT(a1_relation_residual(ws, decompose_strings(ws, r), ctx), 1e-12)
            << repgen::testing::case_name(c) << " " << repgen::testing::context_name(ctx);
  }
}

TEST(CanonicalBlocks, ClassicalElementsAreIntegerRoots) {
  // Spin-l/2 raising element: sqrt((k + 1)(l - k)).
  const auto c = QContext::classical_limit();
  for (int l = 1; l <= 6; ++l)
    for (int k = 0; k < l; ++k) EXPECT_NEAR(a1_raising_element(l, k, 1.0, c), std::sqrt((k + 1.0) * (l - k)), 1e-14);
}

TEST(CanonicalBlocks, WideMatchesDouble) {
  const Fixture f;
  const auto bq = canonical_raising_blocks<Wide>(f.ws, f.s1, f.ctx).dense(f.ws);
  EXPECT_LT(max_abs(bq - f.e1), 1e-14);
}
