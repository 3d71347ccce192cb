#include <gtest/gtest.h>

#include "kreinval/indefinite_geometry.hpp"
#include "kreinval/sampling.hpp"
#include "test_util.hpp"

using namespace kreinval;
using namespace kreinval::testing;

namespace {

ComplexVector vec(std::initializer_list<Complex> xs) {
  ComplexVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST(Pairing, ClassifyBasisAndLightCone) {
  const Signature sig(1, 1);
  const auto e1 = classify(vec({1, 0}), sig);
  EXPECT_EQ(e1.cone_class, ConeClass::Positive);
  EXPECT_DOUBLE_EQ(e1.self_pairing, 1.0);
  const auto light = classify(vec({1, 1}), sig);
  EXPECT_EQ(light.cone_class, ConeClass::Null);
  EXPECT_EQ(light.self_pairing, 0.0);
  EXPECT_EQ(classify(vec({0.2, 1}), sig).cone_class, ConeClass::Negative);
}

TEST(Pairing, HandEvaluation) {
  EXPECT_EQ(pair(vec({1, 1, 1}), vec({1, 0, 1}), Signature(2, 1)), Complex(0.0));
  // conjugate-linear in the second slot
  const Signature sig(1, 1);
  const ComplexVector z = vec({Complex(1, 2), 3});
  const ComplexVector w = vec({Complex(0, 1), Complex(1, -1)});
  EXPECT_LT(std::abs(pair(z, Complex(0, 2) * w, sig) - Complex(0, -2) * pair(z, w, sig)), 1e-14);
  EXPECT_LT(std::abs(pair(z, w, sig) - std::conj(pair(w, z, sig))), 1e-14);
}

TEST(Gram, Examples) {
  const Signature sig(1, 1);
  ComplexMatrix b(2, 2);
  b << 1, 1, 0, 1;
  EXPECT_LT(max_abs(gram(b, sig) - mat2(1, 1, 1, 0)), 1e-15);
  EXPECT_LT(max_abs(gram(ComplexMatrix::Identity(2, 2).leftCols(1), sig) - ComplexMatrix::Identity(1, 1)), 1e-15);
  ComplexMatrix neg(2, 1);
  neg << 0, 1;
  EXPECT_LT(max_abs(gram(neg, sig) + ComplexMatrix::Identity(1, 1)), 1e-15);
}

TEST(SubspaceBasisTest, RankDeficient) {
  ComplexMatrix b(3, 2);
  b << 1, 2, 0, 0, 1, 2;
  EXPECT_EQ(error_kind_of([&] { SubspaceBasis{b}; }), ErrorKind::RankDeficient);
}

TEST(Orthonormalize, Normalization) {
  const Signature sig(1, 1);
  ComplexMatrix v(2, 1);
  v << 2, 0;
  const auto f = pseudo_orthonormalize(v, sig);
  EXPECT_LT(max_abs(f.vectors() - ComplexMatrix(ComplexMatrix::Identity(2, 1))), 1e-15);
}

TEST(Orthonormalize, HandExample21) {
  const Signature sig(2, 1);
  ComplexMatrix v(3, 2);
  v << 1, 1, 0, 1, 0, 0.5;
  const auto f = pseudo_orthonormalize(v, sig);
  EXPECT_LT(max_abs(gram(f.vectors(), sig) - ComplexMatrix::Identity(2, 2)), 1e-14);
  // second vector (1,1,0.5) minus its e1 part is (0,1,0.5) with norm^2 0.75
  EXPECT_NEAR(std::abs(f.vectors()(1, 1)), 1.0 / std::sqrt(0.75), 1e-14);
  // flag order: first column stays along e1
  EXPECT_LT(std::abs(f.vectors()(1, 0)) + std::abs(f.vectors()(2, 0)), 1e-15);
}

TEST(Orthonormalize, AlreadyOrthonormalUnchanged) {
  const Signature sig(1, 1);
  const ComplexMatrix u = boost(0.4);
  const auto pos = pseudo_orthonormalize(u.leftCols(1), sig);
  EXPECT_LT(max_abs(pos.vectors() - u.leftCols(1)), 1e-14);
  const auto neg = pseudo_orthonormalize(u.rightCols(1), sig, Orientation::Negative);
  EXPECT_LT(max_abs(neg.vectors() - u.rightCols(1)), 1e-14);
}

TEST(Orthonormalize, Errors) {
  const Signature sig(1, 1);
  ComplexMatrix light(2, 1);
  light << 1, 1;
  EXPECT_EQ(error_kind_of([&] { pseudo_orthonormalize(light, sig); }), ErrorKind::NullDegeneracy);
  ComplexMatrix neg(2, 1);
  neg << 0, 1;
  EXPECT_EQ(error_kind_of([&] { pseudo_orthonormalize(neg, sig); }), ErrorKind::OrientationMismatch);
  ComplexMatrix dep(3, 2);
  dep << 1, 2, 0, 0, 0, 0;
  EXPECT_EQ(error_kind_of([&] { pseudo_orthonormalize(dep, Signature(2, 1)); }), ErrorKind::NullDegeneracy);
}

TEST(Projector, CoordinateBlock) {
  const Signature sig(2, 2);
  const auto f = pseudo_orthonormalize(ComplexMatrix::Identity(4, 2), sig);
  EXPECT_LT(max_abs(projector(f) - diag({1, 1, 0, 0})), 1e-15);
}

TEST(Projector, BoostClosedForm) {
  const Signature sig(1, 1);
  const double t = 0.8;
  const double c = std::cosh(t);
  const double s = std::sinh(t);
  const auto f = pseudo_orthonormalize(boost(t).leftCols(1), sig);
  const ComplexMatrix expected = mat2(c * c, -c * s, s * c, -s * s);
  const ComplexMatrix p = projector(f);
  EXPECT_LT(max_abs(p - expected), 1e-13);
  EXPECT_LT(max_abs(p * p - p), 1e-12);
  EXPECT_LT((p * f.vectors() - f.vectors()).norm(), 1e-13);
}

TEST(PositiveCone, Membership) {
  const Signature sig(2, 1);
  EXPECT_TRUE(subspace_in_positive_cone(SubspaceBasis(ComplexMatrix::Identity(3, 2)), sig));
  ComplexMatrix with_null(3, 2);
  with_null << 1, 0, 0, 1, 0, 1;
  EXPECT_FALSE(subspace_in_positive_cone(SubspaceBasis(with_null), sig));
}

TEST(PositiveCone, GraphSubspaceMargin) {
  // Gram of (u; K u) over an orthonormal u-basis is I - K^* K.
  const Signature sig(2, 2);
  Rng rng(3);
  ComplexMatrix k = rng.complex_normal(2, 2);
  Eigen::JacobiSVD<ComplexMatrix> svd(k);
  k *= 0.9 / svd.singularValues()(0);
  ComplexMatrix b(4, 2);
  b.topRows(2) = ComplexMatrix::Identity(2, 2);
  b.bottomRows(2) = k;
  EXPECT_TRUE(subspace_in_positive_cone(SubspaceBasis(b), sig));
  const ComplexMatrix g = gram(b, sig);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g);
  EXPECT_NEAR(es.eigenvalues()(0), 1 - 0.81, 1e-12);
  // margin is basis-invariant
  ComplexMatrix mixed = b * rng.complex_normal(2, 2);
  EXPECT_NEAR(positive_cone_margin(SubspaceBasis(b), sig), positive_cone_margin(SubspaceBasis(mixed), sig), 1e-12);
}

TEST(Complement, IsJOrthogonal) {
  const Signature sig(3, 2);
  Rng rng(9);
  const ComplexMatrix b = rng.complex_normal(5, 2);
  const ComplexMatrix c = j_orthogonal_complement(b, sig);
  ASSERT_EQ(c.cols(), 3);
  const RealVector jd = MetricJ(sig).diagonal();
  EXPECT_LT(max_abs(b.adjoint() * jd.cast<Complex>().asDiagonal() * c), 1e-13);
}
