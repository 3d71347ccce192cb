#include "kreinval/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace kreinval {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NullVector: return "NullVector";
    case ErrorKind::NullDegeneracy: return "NullDegeneracy";
    case ErrorKind::OrientationMismatch: return "OrientationMismatch";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::DefectiveMatrix: return "DefectiveMatrix";
    case ErrorKind::ComplexSpectrum: return "ComplexSpectrum";
    case ErrorKind::WrongConeCount: return "WrongConeCount";
    case ErrorKind::GapViolation: return "GapViolation";
    case ErrorKind::OppositeComponent: return "OppositeComponent";
    case ErrorKind::RetriesExhausted: return "RetriesExhausted";
    case ErrorKind::SizeGuard: return "SizeGuard";
    case ErrorKind::CyclingGuard: return "CyclingGuard";
    case ErrorKind::Schema: return "Schema";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

Signature::Signature(int p, int q) : p_(p), q_(q) {
  if (p < 0 || q < 0 || p + q < 1) {
    std::ostringstream os;
    os << "signature (" << p << "," << q << ") needs p, q >= 0 and p + q >= 1";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

MetricJ::MetricJ(Signature sig) : sig_(sig), diag_(sig.n()) {
  for (int i = 0; i < sig.n(); ++i) diag_(i) = sig.sign(i);
}

ComplexMatrix MetricJ::dense() const {
  return diag_.cast<Complex>().asDiagonal();
}

MetricJ build_metric(Signature sig) { return MetricJ(sig); }

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

namespace {

void require_square(const ComplexMatrix& m, Signature sig, const char* what) {
  if (m.rows() != sig.n() || m.cols() != sig.n()) {
    std::ostringstream os;
    os << what << ": expected " << sig.n() << "x" << sig.n() << ", got " << m.rows() << "x"
       << m.cols();
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
}

}  // namespace

ComplexMatrix matrix_dagger(const ComplexMatrix& m, Signature sig) {
  require_square(m, sig, "matrix_dagger");
  const int n = sig.n();
  ComplexMatrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = sig.sign(i) * sig.sign(j) * std::conj(m(j, i));
  return out;
}

double pseudo_hermitian_residual(const ComplexMatrix& a, Signature sig) {
  require_square(a, sig, "pseudo_hermitian_residual");
  // (AJ - JA^*)_ij = a_ij s_j - s_i conj(a_ji)
  double worst = 0.0;
  for (int i = 0; i < sig.n(); ++i)
    for (int j = 0; j < sig.n(); ++j)
      worst = std::max(worst, std::abs(a(i, j) * sig.sign(j) - sig.sign(i) * std::conj(a(j, i))));
  return worst;
}

bool validate_pseudo_hermitian(const ComplexMatrix& a, Signature sig, double tol) {
  return pseudo_hermitian_residual(a, sig) <= tol;
}

double pseudo_unitary_residual(const ComplexMatrix& u, Signature sig) {
  require_square(u, sig, "pseudo_unitary_residual");
  const MetricJ j(sig);
  const ComplexMatrix jd = j.dense();
  return max_abs(u * jd * u.adjoint() - jd);
}

bool validate_pseudo_unitary(const ComplexMatrix& u, Signature sig, double tol) {
  return pseudo_unitary_residual(u, sig) <= tol;
}

PseudoHermitianMatrix::PseudoHermitianMatrix(Signature sig, ComplexMatrix entries, double tol)
    : sig_(sig), entries_(std::move(entries)) {
  const double res = pseudo_hermitian_residual(entries_, sig_);
  if (!(res <= tol) || !entries_.allFinite()) {
    std::ostringstream os;
    os << "matrix is not pseudo-Hermitian: residual max|AJ - JA*| = " << res << " > tol " << tol;
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

PseudoHermitianMatrix PseudoHermitianMatrix::symmetrized(Signature sig, const ComplexMatrix& m) {
  require_square(m, sig, "symmetrized");
  const int n = sig.n();
  ComplexMatrix out(n, n);
  // J A should be Hermitian: h_ij = s_i a_ij. Average h with h^*, then undo J.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Complex hij = sig.sign(i) * m(i, j);
      const Complex hji = sig.sign(j) * m(j, i);
      out(i, j) = sig.sign(i) * 0.5 * (hij + std::conj(hji));
    }
  }
  return PseudoHermitianMatrix(sig, std::move(out), 0.0);
}

PseudoHermitianMatrix PseudoHermitianMatrix::operator+(const PseudoHermitianMatrix& other) const {
  if (!(sig_ == other.sig_))
    throw Error(ErrorKind::DimensionMismatch, "sum of matrices with different signatures");
  return PseudoHermitianMatrix(sig_, entries_ + other.entries_, std::numeric_limits<double>::infinity());
}

PseudoHermitianMatrix PseudoHermitianMatrix::shifted(double c) const {
  ComplexMatrix m = entries_;
  m.diagonal().array() += c;
  return PseudoHermitianMatrix(sig_, std::move(m), std::numeric_limits<double>::infinity());
}

PseudoHermitianMatrix PseudoHermitianMatrix::operator-() const {
  return PseudoHermitianMatrix(sig_, -entries_, std::numeric_limits<double>::infinity());
}

PseudoUnitary::PseudoUnitary(Signature sig, ComplexMatrix entries, double tol)
    : sig_(sig), entries_(std::move(entries)) {
  const double res = pseudo_unitary_residual(entries_, sig_);
  if (!(res <= tol)) {
    std::ostringstream os;
    os << "matrix is not pseudo-unitary: max|UJU* - J| = " << res << " > tol " << tol;
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

double PseudoUnitary::condition() const {
  Eigen::JacobiSVD<ComplexMatrix> svd(entries_);
  const auto& s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

AdmissibleSpectrum::AdmissibleSpectrum(std::vector<double> lambdas, std::vector<double> mus)
    : lambdas_(std::move(lambdas)), mus_(std::move(mus)) {
  if (lambdas_.empty() && mus_.empty())
    throw Error(ErrorKind::InvalidArgument, "empty spectrum");
  const auto finite = [](double x) { return std::isfinite(x); };
  if (!std::all_of(lambdas_.begin(), lambdas_.end(), finite) ||
      !std::all_of(mus_.begin(), mus_.end(), finite))
    throw Error(ErrorKind::InvalidArgument, "spectrum contains non-finite values");
  if (!std::is_sorted(lambdas_.begin(), lambdas_.end()))
    throw Error(ErrorKind::InvalidArgument, "lambdas must be stored ascending");
  if (!std::is_sorted(mus_.begin(), mus_.end(), std::greater<>()))
    throw Error(ErrorKind::InvalidArgument, "mus must be stored descending");
  if (!(gap() > 0.0)) {
    std::ostringstream os;
    os << "lambda_1 = " << lambdas_.front() << " must exceed mu_1 = " << mus_.front();
    throw Error(ErrorKind::GapViolation, os.str());
  }
}

double AdmissibleSpectrum::gap() const noexcept {
  if (lambdas_.empty() || mus_.empty()) return std::numeric_limits<double>::infinity();
  return lambdas_.front() - mus_.front();
}

double AdmissibleSpectrum::total() const noexcept {
  return std::accumulate(lambdas_.begin(), lambdas_.end(), 0.0) +
         std::accumulate(mus_.begin(), mus_.end(), 0.0);
}

RealVector AdmissibleSpectrum::canonical_vector() const {
  RealVector v(p() + q());
  for (int i = 0; i < p(); ++i) v(i) = lambdas_[static_cast<std::size_t>(p() - 1 - i)];
  for (int j = 0; j < q(); ++j) v(p() + j) = mus_[static_cast<std::size_t>(j)];
  return v;
}

PseudoHermitianMatrix canonical_diagonal(const AdmissibleSpectrum& spec) {
  const RealVector d = spec.canonical_vector();
  return PseudoHermitianMatrix(spec.signature(), d.cast<Complex>().asDiagonal().toDenseMatrix(), 0.0);
}

IndexTuple::IndexTuple(std::vector<int> indices, int bound) : indices_(std::move(indices)), bound_(bound) {
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    const int v = indices_[k];
    if (v < 1 || v > bound || (k > 0 && v <= indices_[k - 1])) {
      std::ostringstream os;
      os << "index tuple must be strictly increasing within [1, " << bound << "]";
      throw Error(ErrorKind::InvalidArgument, os.str());
    }
  }
}

std::vector<IndexTuple> enumerate_tuples(int m, int bound) {
  std::vector<IndexTuple> out;
  if (m < 1 || m > bound) return out;
  std::vector<int> idx(static_cast<std::size_t>(m));
  std::iota(idx.begin(), idx.end(), 1);
  while (true) {
    out.emplace_back(idx, bound);
    int k = m - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == bound - (m - 1 - k)) --k;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    for (int r = k + 1; r < m; ++r) idx[static_cast<std::size_t>(r)] = idx[static_cast<std::size_t>(r - 1)] + 1;
  }
  return out;
}

}  // namespace kreinval
