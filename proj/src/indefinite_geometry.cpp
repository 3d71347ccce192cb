#include "kreinval/indefinite_geometry.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace kreinval {

const char* to_string(ConeClass c) {
  switch (c) {
    case ConeClass::Positive: return "positive";
    case ConeClass::Negative: return "negative";
    case ConeClass::Null: return "null";
  }
  return "null";
}

Complex pair(const ComplexVector& z, const ComplexVector& w, Signature sig) {
  if (z.size() != sig.n() || w.size() != sig.n())
    throw Error(ErrorKind::DimensionMismatch, "pair: vector length does not match signature");
  Complex acc{0.0, 0.0};
  for (int i = 0; i < sig.n(); ++i) acc += sig.sign(i) * z(i) * std::conj(w(i));
  return acc;
}

ClassifiedVector classify(const ComplexVector& z, Signature sig, double tol_null) {
  ClassifiedVector out;
  out.vector = z;
  out.self_pairing = pair(z, z, sig).real();
  const double band = tol_null * z.squaredNorm();
  if (out.self_pairing > band)
    out.cone_class = ConeClass::Positive;
  else if (out.self_pairing < -band)
    out.cone_class = ConeClass::Negative;
  else
    out.cone_class = ConeClass::Null;
  return out;
}

SubspaceBasis::SubspaceBasis(ComplexMatrix columns, double tol_rank) : columns_(std::move(columns)) {
  if (columns_.cols() == 0 || columns_.cols() > columns_.rows())
    throw Error(ErrorKind::RankDeficient, "basis must have between 1 and n columns");
  Eigen::JacobiSVD<ComplexMatrix> svd(columns_);
  const auto& s = svd.singularValues();
  if (!(s(s.size() - 1) >= tol_rank * s(0))) {
    std::ostringstream os;
    os << "basis columns are dependent: sigma_min/sigma_max = " << s(s.size() - 1) / s(0);
    throw Error(ErrorKind::RankDeficient, os.str());
  }
}

SubspaceBasis SubspaceBasis::leading(int k) const {
  return SubspaceBasis(columns_.leftCols(k));
}

ComplexMatrix gram(const ComplexMatrix& basis, Signature sig) {
  if (basis.rows() != sig.n())
    throw Error(ErrorKind::DimensionMismatch, "gram: basis rows do not match signature");
  const RealVector d = MetricJ(sig).diagonal();
  ComplexMatrix g = basis.adjoint() * d.cast<Complex>().asDiagonal() * basis;
  return 0.5 * (g + g.adjoint());
}

PseudoOrthonormalFrame::PseudoOrthonormalFrame(Signature sig, ComplexMatrix vectors,
                                               Orientation orientation, double tol)
    : sig_(sig), vectors_(std::move(vectors)), orientation_(orientation) {
  if (vectors_.rows() != sig.n())
    throw Error(ErrorKind::DimensionMismatch, "frame vectors do not match signature");
  const double s = orientation == Orientation::Positive ? 1.0 : -1.0;
  const ComplexMatrix g = gram(vectors_, sig);
  const ComplexMatrix target = s * ComplexMatrix::Identity(g.rows(), g.cols());
  const double res = max_abs(g - target);
  if (!(res <= tol)) {
    std::ostringstream os;
    os << "frame is not pseudo-orthonormal: max|G -/+ I| = " << res;
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

PseudoOrthonormalFrame pseudo_orthonormalize(const ComplexMatrix& vectors, Signature sig,
                                             Orientation orientation, double tol_null) {
  if (vectors.rows() != sig.n())
    throw Error(ErrorKind::DimensionMismatch, "pseudo_orthonormalize: vector length");
  const double s = orientation == Orientation::Positive ? 1.0 : -1.0;
  const int m = static_cast<int>(vectors.cols());
  ComplexMatrix out(sig.n(), m);
  for (int k = 0; k < m; ++k) {
    ComplexVector r = vectors.col(k);
    const double original = r.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (int l = 0; l < k; ++l) {
        const ComplexVector xl = out.col(l);
        r -= (s * pair(r, xl, sig)) * xl;
      }
    }
    const double rn = r.norm();
    if (!(rn > kTolRank * original)) {
      std::ostringstream os;
      os << "vector " << k << " is dependent on its predecessors";
      throw Error(ErrorKind::NullDegeneracy, os.str());
    }
    const double self = pair(r, r, sig).real();
    if (std::abs(self) < tol_null * rn * rn) {
      std::ostringstream os;
      os << "Gram-Schmidt pivot " << k << " is null: <r,r> = " << self;
      throw Error(ErrorKind::NullDegeneracy, os.str());
    }
    if (self * s < 0.0) {
      std::ostringstream os;
      os << "Gram-Schmidt pivot " << k << " has the wrong sign: <r,r> = " << self;
      throw Error(ErrorKind::OrientationMismatch, os.str());
    }
    out.col(k) = r / std::sqrt(std::abs(self));
  }
  const double scale = std::max(1.0, out.colwise().squaredNorm().maxCoeff());
  return PseudoOrthonormalFrame(sig, std::move(out), orientation, kTolFrame * scale);
}

ComplexMatrix projector(const PseudoOrthonormalFrame& frame) {
  const Signature sig = frame.signature();
  const double s = frame.orientation() == Orientation::Positive ? 1.0 : -1.0;
  const RealVector d = MetricJ(sig).diagonal();
  const ComplexMatrix& x = frame.vectors();
  return s * (x * x.adjoint() * d.cast<Complex>().asDiagonal());
}

double positive_cone_margin(const SubspaceBasis& basis, Signature sig) {
  Eigen::HouseholderQR<ComplexMatrix> qr(basis.columns());
  const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(basis.ambient(), basis.dim());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram(q, sig), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

bool subspace_in_positive_cone(const SubspaceBasis& basis, Signature sig, double tol) {
  return positive_cone_margin(basis, sig) >= tol;
}

ComplexMatrix j_orthogonal_complement(const ComplexMatrix& basis, Signature sig, double tol_rank) {
  const int n = sig.n();
  if (basis.cols() == 0) return ComplexMatrix::Identity(n, n);
  const RealVector d = MetricJ(sig).diagonal();
  // x is J-orthogonal to every b_i iff (B^* J) x = 0.
  const ComplexMatrix constraints = basis.adjoint() * d.cast<Complex>().asDiagonal();
  Eigen::JacobiSVD<ComplexMatrix> svd(constraints, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol_rank * s(0)) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

}  // namespace kreinval
