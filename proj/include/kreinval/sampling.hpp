#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "kreinval/core_model.hpp"
#include "kreinval/indefinite_geometry.hpp"

namespace kreinval {

/// Seeded random stream. Every worker owns one; streams for different
/// instance indices are independent and reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Stream for (seed, instance index).
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  double uniform(double lo, double hi);
  double normal();
  Complex complex_normal();
  ComplexMatrix complex_normal(int rows, int cols);
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

struct SamplerConfig {
  std::uint64_t seed = 0;
  double gap_min = 0.25;
  double value_lo = -3.0;
  double value_hi = 3.0;
  double boost_scale = 1.0;
  double cond_cap = 1e4;
  double contraction_cap = 0.9;
  int max_retries = 64;
  bool rotate_subspaces = true;

  /// Throws Config on inconsistent fields.
  void validate() const;
};

AdmissibleSpectrum sample_spectrum(Signature sig, const SamplerConfig& cfg, Rng& rng);

/// exp(X) for X in u(p,q), i.e. X J + J X^* = 0. Throws InvalidArgument otherwise.
PseudoUnitary lie_algebra_exponential(Signature sig, const ComplexMatrix& generator);

/// Random element of u(p,q): skew-Hermitian diagonal blocks, off-diagonal block
/// with 2-norm at most boost_scale.
ComplexMatrix sample_lie_algebra(Signature sig, const SamplerConfig& cfg, Rng& rng);

/// Throws RetriesExhausted if no sample meets cond_cap within max_retries.
PseudoUnitary sample_pseudo_unitary(Signature sig, const SamplerConfig& cfg, Rng& rng);

struct PlantedInstance {
  PseudoHermitianMatrix matrix;
  AdmissibleSpectrum spectrum;
  PseudoUnitary unitary;
};

/// A = U Lambda U^{-1} with a sampled spectrum and pseudo-unitary.
PlantedInstance sample_admissible(Signature sig, const SamplerConfig& cfg, Rng& rng);
PlantedInstance plant(const AdmissibleSpectrum& spec, const PseudoUnitary& u);

/// k-dimensional positive subspace: columns (Q; K Q) with Q an isometry and
/// ||K||_2 <= contraction_cap, optionally moved by a sampled pseudo-unitary.
SubspaceBasis sample_positive_subspace(Signature sig, int k, const SamplerConfig& cfg, Rng& rng);

/// k-dimensional positive subspace inside span(host), where host is a
/// Euclidean-orthonormal basis of a J-nondegenerate subspace.
SubspaceBasis sample_positive_subspace_within(Signature sig, const ComplexMatrix& host, int k,
                                              const SamplerConfig& cfg, Rng& rng);

/// Nested positive subspaces V_{i_1} < ... < V_{i_m}; level j is spanned by
/// the first i_j columns of one basis.
class PositiveFlag {
 public:
  PositiveFlag(IndexTuple dims, SubspaceBasis basis);

  const IndexTuple& dims() const noexcept { return dims_; }
  const SubspaceBasis& basis() const noexcept { return basis_; }
  int levels() const noexcept { return dims_.size(); }
  /// Basis of level j (0-based), dimension dims()[j].
  ComplexMatrix level(int j) const { return basis_.columns().leftCols(dims_[j]); }

 private:
  IndexTuple dims_;
  SubspaceBasis basis_;
};

/// x_j drawn from level j, then pseudo-orthonormalized in flag order.
PseudoOrthonormalFrame sample_subordinate_frame(const PositiveFlag& flag, Signature sig, Rng& rng);

std::pair<PositiveFlag, PseudoOrthonormalFrame> sample_flag_with_subordinate(
    Signature sig, const IndexTuple& dims, const SamplerConfig& cfg, Rng& rng);

/// max over levels of ||P_j x_j - x_j|| / ||x_j||, P_j the pairing projector onto level j.
double subordination_residual(const PositiveFlag& flag, const PseudoOrthonormalFrame& frame);

}  // namespace kreinval
