#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

#include "kreinval/error.hpp"

namespace kreinval {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kTolStruct = 1e-10;

/// Signature (p, q) of the indefinite pairing; n = p + q.
class Signature {
 public:
  Signature(int p, int q);

  int p() const noexcept { return p_; }
  int q() const noexcept { return q_; }
  int n() const noexcept { return p_ + q_; }

  /// +1 on the first p slots, -1 on the last q (0-based slot).
  double sign(int slot) const noexcept { return slot < p_ ? 1.0 : -1.0; }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  int p_;
  int q_;
};

/// The diagonal metric J = diag(+1 x p, -1 x q).
class MetricJ {
 public:
  explicit MetricJ(Signature sig);

  const Signature& signature() const noexcept { return sig_; }
  const RealVector& diagonal() const noexcept { return diag_; }
  ComplexMatrix dense() const;

 private:
  Signature sig_;
  RealVector diag_;
};

MetricJ build_metric(Signature sig);

/// Largest absolute entry.
double max_abs(const ComplexMatrix& m);

/// M^dagger = J M^* J, the adjoint for the indefinite pairing.
ComplexMatrix matrix_dagger(const ComplexMatrix& m, Signature sig);

/// Max-norm of A J - J A^*. Throws DimensionMismatch unless A is n x n.
double pseudo_hermitian_residual(const ComplexMatrix& a, Signature sig);
bool validate_pseudo_hermitian(const ComplexMatrix& a, Signature sig, double tol = kTolStruct);

/// Max-norm of U J U^* - J.
double pseudo_unitary_residual(const ComplexMatrix& u, Signature sig);
bool validate_pseudo_unitary(const ComplexMatrix& u, Signature sig, double tol = 1e-9);

/// Complex n x n matrix with A J = J A^* (equivalently J A Hermitian).
class PseudoHermitianMatrix {
 public:
  /// Validates at `tol`; throws InvalidArgument naming the residual on failure.
  PseudoHermitianMatrix(Signature sig, ComplexMatrix entries, double tol = kTolStruct);

  /// Projects an approximately pseudo-Hermitian matrix onto the exact set:
  /// returns J * herm(J * m). Used after products that only hold up to rounding.
  static PseudoHermitianMatrix symmetrized(Signature sig, const ComplexMatrix& m);

  const Signature& signature() const noexcept { return sig_; }
  const ComplexMatrix& matrix() const noexcept { return entries_; }
  int n() const noexcept { return sig_.n(); }

  PseudoHermitianMatrix operator+(const PseudoHermitianMatrix& other) const;
  PseudoHermitianMatrix shifted(double c) const;
  PseudoHermitianMatrix operator-() const;

 private:
  Signature sig_;
  ComplexMatrix entries_;
};

/// Element of U(p, q): U J U^* = J. The inverse is the dagger J U^* J.
class PseudoUnitary {
 public:
  PseudoUnitary(Signature sig, ComplexMatrix entries, double tol = 1e-9);

  const Signature& signature() const noexcept { return sig_; }
  const ComplexMatrix& matrix() const noexcept { return entries_; }
  ComplexMatrix inverse() const { return matrix_dagger(entries_, sig_); }
  /// 2-norm condition number; equals ||U||_2^2 for pseudo-unitaries.
  double condition() const;

 private:
  Signature sig_;
  ComplexMatrix entries_;
};

/// Classified real spectrum of an admissible matrix. Lambdas ascending
/// (lambda_1 smallest), mus descending (mu_1 largest), lambda_1 > mu_1.
class AdmissibleSpectrum {
 public:
  AdmissibleSpectrum(std::vector<double> lambdas, std::vector<double> mus);

  int p() const noexcept { return static_cast<int>(lambdas_.size()); }
  int q() const noexcept { return static_cast<int>(mus_.size()); }
  Signature signature() const { return Signature(p(), q()); }

  const std::vector<double>& lambdas() const noexcept { return lambdas_; }
  const std::vector<double>& mus() const noexcept { return mus_; }
  /// 1-based accessors matching the usual lambda_k / mu_l indexing.
  double lambda(int k) const { return lambdas_.at(static_cast<std::size_t>(k - 1)); }
  double mu(int l) const { return mus_.at(static_cast<std::size_t>(l - 1)); }

  /// lambda_1 - mu_1; +infinity when either block is empty.
  double gap() const noexcept;
  double total() const noexcept;

  /// Canonical diagonal order: (lambda_p, ..., lambda_1, mu_1, ..., mu_q).
  RealVector canonical_vector() const;

  friend bool operator==(const AdmissibleSpectrum&, const AdmissibleSpectrum&) = default;

 private:
  std::vector<double> lambdas_;
  std::vector<double> mus_;
};

/// diag(lambda_p, ..., lambda_1, mu_1, ..., mu_q).
PseudoHermitianMatrix canonical_diagonal(const AdmissibleSpectrum& spec);

/// Strictly increasing 1-based indices within [1, bound].
class IndexTuple {
 public:
  IndexTuple(std::vector<int> indices, int bound);

  const std::vector<int>& indices() const noexcept { return indices_; }
  int size() const noexcept { return static_cast<int>(indices_.size()); }
  int operator[](int j) const { return indices_.at(static_cast<std::size_t>(j)); }
  int bound() const noexcept { return bound_; }
  int back() const { return indices_.back(); }

 private:
  std::vector<int> indices_;
  int bound_;
};

/// All strictly increasing tuples of length m drawn from [1, bound], lexicographic.
std::vector<IndexTuple> enumerate_tuples(int m, int bound);

}  // namespace kreinval
