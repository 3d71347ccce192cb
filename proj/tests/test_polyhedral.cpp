#include <gtest/gtest.h>

#include "kreinval/polyhedral.hpp"
#include "kreinval/sampling.hpp"
#include "kreinval/spectral.hpp"
#include "test_util.hpp"

using namespace kreinval;
using namespace kreinval::testing;

namespace {

RealVector rv(std::initializer_list<double> xs) {
  RealVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// t sums to one, weights are nonnegative, and they rebuild the point
void expect_valid_certificate(const PolyhedralRegion& r, const LpCertificate& c, const RealVector& point) {
  ASSERT_TRUE(c.feasible);
  EXPECT_NEAR(c.t.sum(), 1.0, 1e-9);
  EXPECT_GE(c.t.minCoeff(), 0.0);
  if (c.s.size() > 0) EXPECT_GE(c.s.minCoeff(), 0.0);
  RealVector rebuilt = RealVector::Zero(point.size());
  for (std::size_t k = 0; k < r.vertices.size(); ++k) rebuilt += c.t(static_cast<Eigen::Index>(k)) * r.vertices[k];
  for (std::size_t k = 0; k < r.generators.size(); ++k)
    rebuilt += c.s(static_cast<Eigen::Index>(k)) * r.generators[k];
  EXPECT_LT((rebuilt - point).cwiseAbs().maxCoeff(), 1e-9);
}

}  // namespace

TEST(Region, Enumeration) {
  const auto r11 = build_region(AdmissibleSpectrum({2}, {0}));
  ASSERT_EQ(r11.vertices.size(), 1u);
  EXPECT_EQ(r11.vertices[0], rv({2, 0}));
  ASSERT_EQ(r11.generators.size(), 1u);
  EXPECT_EQ(r11.generators[0], rv({1, -1}));

  const auto r21 = build_region(AdmissibleSpectrum({1, 3}, {0}));
  ASSERT_EQ(r21.vertices.size(), 2u);
  EXPECT_EQ(r21.vertices[0], rv({1, 3, 0}));
  EXPECT_EQ(r21.vertices[1], rv({3, 1, 0}));
  ASSERT_EQ(r21.generators.size(), 2u);
  EXPECT_EQ(r21.generators[0], rv({1, 0, -1}));
  EXPECT_EQ(r21.generators[1], rv({0, 1, -1}));

  EXPECT_EQ(build_region(AdmissibleSpectrum({2, 2}, {0})).vertices.size(), 1u);
  EXPECT_EQ(build_region(AdmissibleSpectrum({1, 2, 3}, {-1, -2})).vertices.size(), 12u);
}

TEST(Region, SizeGuard) {
  EXPECT_EQ(error_kind_of([] { build_region(AdmissibleSpectrum({1, 2, 3, 4}, {-1, -2, -3, -4}), 100); }),
            ErrorKind::SizeGuard);
}

TEST(Region, Json) {
  const auto j = region_to_json(build_region(AdmissibleSpectrum({1, 3}, {0})));
  EXPECT_EQ(j["vertices"].size(), 2u);
  EXPECT_EQ(j["generators"].size(), 2u);
  EXPECT_EQ(j["base_point"], (std::vector<double>{3, 1, 0}));
}

TEST(Lp, ClosedFormExamples) {
  const auto r = build_region(AdmissibleSpectrum({2}, {0}));
  const auto ok = lp_feasible(r, rv({2.5, -0.5}));
  expect_valid_certificate(r, ok, rv({2.5, -0.5}));
  EXPECT_NEAR(ok.s(0), 0.5, 1e-12);

  const auto wrong_sum = lp_feasible(r, rv({2.5, -0.4}));
  EXPECT_FALSE(wrong_sum.feasible);
  EXPECT_TRUE(wrong_sum.rejected_by_sum);

  const auto negative_s = lp_feasible(r, rv({1.5, 0.5}));
  EXPECT_FALSE(negative_s.feasible);
  EXPECT_FALSE(negative_s.rejected_by_sum);
  EXPECT_GT(negative_s.phase1_objective, 1e-3);
}

TEST(Lp, VerticesAreFeasibleWithZeroCone) {
  const auto r = build_region(AdmissibleSpectrum({-1, 0.5, 2}, {-1.5, -3}));
  for (const auto& v : r.vertices) {
    const auto c = lp_feasible(r, v);
    expect_valid_certificate(r, c, v);
    EXPECT_LT(c.s.sum(), 1e-12);
  }
}

TEST(Lp, InteriorPointOfHull) {
  const auto r = build_region(AdmissibleSpectrum({1, 3}, {0}));
  const RealVector mid = 0.5 * (r.vertices[0] + r.vertices[1]) + 0.25 * r.generators[1];
  expect_valid_certificate(r, lp_feasible(r, mid), mid);
  EXPECT_FALSE(lp_feasible(r, rv({4, 0.5, -0.5})).feasible);
}

TEST(DiagMembership, DiagonalAndBoost) {
  const Signature sig(1, 1);
  EXPECT_TRUE(check_diag_membership(PseudoHermitianMatrix(sig, diag({2, 0}))).passed());
  for (double t : {0.3, 0.9}) {
    const auto a = plant(AdmissibleSpectrum({2}, {0}), PseudoUnitary(sig, boost(t))).matrix;
    const double s = 2 * std::sinh(t) * std::sinh(t);
    EXPECT_NEAR(a.matrix()(0, 0).real(), 2 + s, 1e-12);
    EXPECT_NEAR(a.matrix()(1, 1).real(), -s, 1e-12);
    const auto r = build_region(AdmissibleSpectrum({2}, {0}));
    const auto c = lp_feasible(r, a.matrix().diagonal().real());
    ASSERT_TRUE(c.feasible);
    EXPECT_NEAR(c.s(0), s, 1e-10);
    EXPECT_TRUE(check_diag_membership(a).passed());
  }
}

TEST(DiagMembership, RandomSig22) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng = Rng::stream(seed, 1);
    const auto a = sample_admissible(Signature(2, 2), {}, rng).matrix;
    const auto r = check_diag_membership(a);
    EXPECT_TRUE(r.passed()) << "seed " << seed << " worst " << r.worst_margin();
  }
}

TEST(SumMembership, DiagonalAndBoost) {
  const Signature sig(1, 1);
  EXPECT_TRUE(
      check_sum_membership(PseudoHermitianMatrix(sig, diag({2, 0})), PseudoHermitianMatrix(sig, diag({1, -1}))).passed());
  const PseudoHermitianMatrix a(sig, diag({1, -1}));
  const auto b = plant(AdmissibleSpectrum({1}, {-1}), PseudoUnitary(sig, boost(0.5))).matrix;
  const auto sc = check_admissible(a + b);
  const double root = std::sqrt(2 + 2 * std::cosh(1.0));
  EXPECT_NEAR(sc.lambda(1), root, 1e-12);
  EXPECT_NEAR(sc.mu(1), -root, 1e-12);
  const auto cert = lp_feasible(build_region(AdmissibleSpectrum({1}, {-1})).translated(rv({1, -1})), rv({root, -root}));
  ASSERT_TRUE(cert.feasible);
  EXPECT_NEAR(cert.s(0), root - 2, 1e-10);
  EXPECT_TRUE(check_sum_membership(a, b).passed());
}

TEST(SumMembership, RandomSig21) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng = Rng::stream(seed, 2);
    const auto a = sample_admissible(Signature(2, 1), {}, rng).matrix;
    const auto b = sample_admissible(Signature(2, 1), {}, rng).matrix;
    EXPECT_TRUE(check_sum_membership(a, b).passed()) << "seed " << seed;
  }
}
