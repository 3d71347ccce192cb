#pragma once

#include <optional>
#include <vector>

#include "kreinval/core_model.hpp"
#include "kreinval/indefinite_geometry.hpp"

namespace kreinval {

inline constexpr double kTolCluster = 1e-7;   // relative to ||A||_F
inline constexpr double kTolReality = 1e-8;   // relative to ||A||_F
inline constexpr double kTolDefect = 1e-5;    // relative to ||A||_F

/// Eigenpairs of a pseudo-Hermitian matrix with each eigenvector classified by
/// the sign of its self-pairing. Eigenvectors of a cluster of (numerically)
/// repeated eigenvalues are pseudo-orthonormalized inside the cluster.
struct ClassifiedEigenSystem {
  std::vector<Complex> eigenvalues;
  ComplexMatrix eigenvectors;  // column i pairs with eigenvalues[i]
  std::vector<ConeClass> cone_classes;
  std::vector<int> cluster_ids;
  double reality_defect = 0.0;  // max |Im lambda| from the raw solver
  double scale = 0.0;           // ||A||_F
};

/// General dense eigensolve followed by cone classification.
/// Throws SolverFailure, DefectiveMatrix.
ClassifiedEigenSystem eigendecompose(const PseudoHermitianMatrix& a);

/// Spectrum plus a pseudo-orthonormal eigenbasis in matching order:
/// v.col(k-1) pairs with lambda_k, w.col(l-1) with mu_l.
struct AdmissibleEigenbasis {
  AdmissibleSpectrum spectrum;
  ComplexMatrix v;  // n x p, <v_i, v_j> = delta_ij
  ComplexMatrix w;  // n x q, <w_i, w_j> = -delta_ij
};

/// Throws ComplexSpectrum, WrongConeCount, GapViolation, OppositeComponent.
/// `tol_real` is relative to ||A||_F.
AdmissibleEigenbasis admissible_eigenbasis(const PseudoHermitianMatrix& a, double tol_real = kTolReality);

AdmissibleSpectrum check_admissible(const PseudoHermitianMatrix& a, double tol_real = kTolReality);

/// R_A(x) = x^dagger A x / x^dagger x. Throws NullVector when |<x,x>| < tol_null ||x||^2.
double rayleigh(const ComplexMatrix& a, const ComplexVector& x, Signature sig, double tol_null = kTolNull);
inline double rayleigh(const PseudoHermitianMatrix& a, const ComplexVector& x, double tol_null = kTolNull) {
  return rayleigh(a.matrix(), x, a.signature(), tol_null);
}

/// Restriction of A to span(frame) in frame coordinates: entries <A x_j, x_k>.
struct CompressionResult {
  PseudoOrthonormalFrame frame;
  ComplexMatrix compressed;  // Hermitian m x m
  RealVector etas;           // ascending
  ComplexMatrix eigenvectors;  // columns of compressed's eigenvectors, ascending order

  double trace() const { return compressed.trace().real(); }
  double top() const { return etas(etas.size() - 1); }
};

/// Requires a positive-orientation frame.
CompressionResult compress(const PseudoHermitianMatrix& a, const PseudoOrthonormalFrame& frame);

}  // namespace kreinval
