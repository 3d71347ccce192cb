#include "kreinval/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace kreinval {

namespace {

// Union-find over eigenvalue indices, joining pairs closer than tol.
std::vector<int> cluster_eigenvalues(const Eigen::VectorXcd& values, double tol) {
  const int n = static_cast<int>(values.size());
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)];
    return i;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(values(i) - values(j)) < tol) parent[static_cast<std::size_t>(find(j))] = find(i);
  std::vector<int> ids(static_cast<std::size_t>(n));
  std::vector<int> remap(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (remap[static_cast<std::size_t>(r)] < 0) remap[static_cast<std::size_t>(r)] = next++;
    ids[static_cast<std::size_t>(i)] = remap[static_cast<std::size_t>(r)];
  }
  return ids;
}

}  // namespace

ClassifiedEigenSystem eigendecompose(const PseudoHermitianMatrix& a) {
  const Signature sig = a.signature();
  const int n = sig.n();
  const ComplexMatrix& m = a.matrix();
  ClassifiedEigenSystem out;
  out.scale = m.norm();
  const double scale = std::max(out.scale, std::numeric_limits<double>::min());

  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, false);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::SolverFailure, "complex Schur iteration did not converge");
  const Eigen::VectorXcd raw = solver.eigenvalues();
  out.reality_defect = raw.imag().cwiseAbs().maxCoeff();

  const std::vector<int> ids = cluster_eigenvalues(raw, kTolCluster * scale);
  const int n_clusters = *std::max_element(ids.begin(), ids.end()) + 1;
  const RealVector jd = MetricJ(sig).diagonal();
  const auto jdiag = jd.cast<Complex>().asDiagonal();

  out.eigenvectors.resize(n, n);
  out.eigenvalues.reserve(static_cast<std::size_t>(n));
  int col = 0;
  for (int c = 0; c < n_clusters; ++c) {
    Complex mean{0.0, 0.0};
    int size = 0;
    for (int i = 0; i < n; ++i)
      if (ids[static_cast<std::size_t>(i)] == c) {
        mean += raw(i);
        ++size;
      }
    mean /= static_cast<double>(size);

    // Invariant subspace of the cluster: right null space of A - mean I.
    ComplexMatrix shifted = m;
    shifted.diagonal().array() -= mean;
    Eigen::JacobiSVD<ComplexMatrix> svd(shifted, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv(n - size) > kTolDefect * scale) {
      std::ostringstream os;
      os << "eigenvalue cluster at " << mean << " of size " << size
         << " has deficient eigenspace: sigma = " << sv(n - size);
      throw Error(ErrorKind::DefectiveMatrix, os.str());
    }
    const ComplexMatrix basis = svd.matrixV().rightCols(size);

    // Pseudo-orthonormalize inside the cluster via the Gram eigenbasis.
    ComplexMatrix g = basis.adjoint() * jdiag * basis;
    g = 0.5 * (g + g.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> ges(g);
    const RealVector d = ges.eigenvalues();
    ComplexMatrix y = basis * ges.eigenvectors();
    std::vector<ConeClass> classes(static_cast<std::size_t>(size));
    int n_pos = 0;
    int n_neg = 0;
    for (int k = 0; k < size; ++k) {
      if (d(k) > kTolNull) {
        classes[static_cast<std::size_t>(k)] = ConeClass::Positive;
        ++n_pos;
      } else if (d(k) < -kTolNull) {
        classes[static_cast<std::size_t>(k)] = ConeClass::Negative;
        ++n_neg;
      } else {
        classes[static_cast<std::size_t>(k)] = ConeClass::Null;
      }
      if (classes[static_cast<std::size_t>(k)] != ConeClass::Null) y.col(k) /= std::sqrt(std::abs(d(k)));
    }

    std::vector<Complex> values(static_cast<std::size_t>(size), mean);
    const bool definite = (n_pos == size || n_neg == size);
    if (definite) {
      // On a definite invariant subspace A is self-adjoint; diagonalize the
      // Hermitian form Y^* J A Y to get real eigenvalues and J-orthonormal vectors.
      const double s = n_pos == size ? 1.0 : -1.0;
      ComplexMatrix h = s * (y.adjoint() * jdiag * m * y);
      h = 0.5 * (h + h.adjoint());
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> hes(h);
      y = y * hes.eigenvectors();
      for (int k = 0; k < size; ++k) values[static_cast<std::size_t>(k)] = Complex(hes.eigenvalues()(k), 0.0);
    }
    for (int k = 0; k < size; ++k) {
      out.eigenvectors.col(col) = y.col(k);
      out.eigenvalues.push_back(values[static_cast<std::size_t>(k)]);
      out.cone_classes.push_back(classes[static_cast<std::size_t>(k)]);
      out.cluster_ids.push_back(c);
      ++col;
    }
  }
  return out;
}

AdmissibleEigenbasis admissible_eigenbasis(const PseudoHermitianMatrix& a, double tol_real) {
  const Signature sig = a.signature();
  const ClassifiedEigenSystem es = eigendecompose(a);
  const double scale = std::max(es.scale, std::numeric_limits<double>::min());
  if (es.reality_defect > tol_real * scale) {
    std::ostringstream os;
    os << "spectrum is not real: max|Im lambda| = " << es.reality_defect;
    throw Error(ErrorKind::ComplexSpectrum, os.str());
  }
  std::vector<int> pos;
  std::vector<int> neg;
  for (std::size_t i = 0; i < es.cone_classes.size(); ++i) {
    if (es.cone_classes[i] == ConeClass::Positive) pos.push_back(static_cast<int>(i));
    if (es.cone_classes[i] == ConeClass::Negative) neg.push_back(static_cast<int>(i));
  }
  if (static_cast<int>(pos.size()) != sig.p() || static_cast<int>(neg.size()) != sig.q()) {
    std::ostringstream os;
    os << "expected " << sig.p() << " positive and " << sig.q() << " negative eigenvectors, found "
       << pos.size() << " and " << neg.size();
    throw Error(ErrorKind::WrongConeCount, os.str());
  }
  const auto value = [&](int i) { return es.eigenvalues[static_cast<std::size_t>(i)].real(); };
  std::stable_sort(pos.begin(), pos.end(), [&](int x, int y) { return value(x) < value(y); });
  std::stable_sort(neg.begin(), neg.end(), [&](int x, int y) { return value(x) > value(y); });

  std::vector<double> lambdas;
  std::vector<double> mus;
  ComplexMatrix v(sig.n(), sig.p());
  ComplexMatrix w(sig.n(), sig.q());
  for (int k = 0; k < sig.p(); ++k) {
    lambdas.push_back(value(pos[static_cast<std::size_t>(k)]));
    v.col(k) = es.eigenvectors.col(pos[static_cast<std::size_t>(k)]);
  }
  for (int l = 0; l < sig.q(); ++l) {
    mus.push_back(value(neg[static_cast<std::size_t>(l)]));
    w.col(l) = es.eigenvectors.col(neg[static_cast<std::size_t>(l)]);
  }
  if (!lambdas.empty() && !mus.empty() && !(lambdas.front() > mus.front())) {
    std::ostringstream os;
    os << "lambda_1 = " << lambdas.front() << " <= mu_1 = " << mus.front();
    if (mus.back() > lambdas.back()) {
      os << " (spectrum lies in the opposite cone component: mu_q > lambda_p)";
      throw Error(ErrorKind::OppositeComponent, os.str());
    }
    throw Error(ErrorKind::GapViolation, os.str());
  }
  return AdmissibleEigenbasis{AdmissibleSpectrum(std::move(lambdas), std::move(mus)), std::move(v), std::move(w)};
}

AdmissibleSpectrum check_admissible(const PseudoHermitianMatrix& a, double tol_real) {
  return admissible_eigenbasis(a, tol_real).spectrum;
}

double rayleigh(const ComplexMatrix& a, const ComplexVector& x, Signature sig, double tol_null) {
  if (a.rows() != sig.n() || a.cols() != sig.n() || x.size() != sig.n())
    throw Error(ErrorKind::DimensionMismatch, "rayleigh: size mismatch");
  const ComplexVector ax = a * x;
  const double den = pair(x, x, sig).real();
  if (std::abs(den) < tol_null * x.squaredNorm()) {
    std::ostringstream os;
    os << "Rayleigh ratio of a null vector: <x,x> = " << den;
    throw Error(ErrorKind::NullVector, os.str());
  }
  return pair(ax, x, sig).real() / den;
}

CompressionResult compress(const PseudoHermitianMatrix& a, const PseudoOrthonormalFrame& frame) {
  if (frame.orientation() != Orientation::Positive)
    throw Error(ErrorKind::OrientationMismatch, "compress needs a positive-orientation frame");
  if (!(frame.signature() == a.signature()))
    throw Error(ErrorKind::DimensionMismatch, "frame and matrix signatures differ");
  const RealVector jd = MetricJ(a.signature()).diagonal();
  const ComplexMatrix& x = frame.vectors();
  // entry (k, j) = x_k^dagger A x_j = <A x_j, x_k>
  ComplexMatrix h = x.adjoint() * jd.cast<Complex>().asDiagonal() * a.matrix() * x;
  h = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  return CompressionResult{frame, h, es.eigenvalues(), es.eigenvectors()};
}

}  // namespace kreinval
