#pragma once

#include <cstdint>
#include <vector>

#include "kreinval/core_model.hpp"
#include "kreinval/report.hpp"
#include "kreinval/sampling.hpp"
#include "kreinval/spectral.hpp"

namespace kreinval {

inline constexpr double kTolCheck = 1e-8;
inline constexpr double kTolEquality = 1e-9;

/// Full enumeration of index tuples while p (or q) <= full_limit, otherwise a
/// seeded random subset of `sample_count` tuples (or tuple pairs).
struct TupleEnumeration {
  int full_limit = 4;
  int sample_count = 200;
  std::uint64_t seed = 0;
};

/// Spectra of A, B and C = A + B.
struct SumSpectra {
  AdmissibleSpectrum a;
  AdmissibleSpectrum b;
  AdmissibleSpectrum c;
};

/// Tuples of every length 1..max_m within [1, bound], subject to the policy.
std::vector<IndexTuple> index_tuples(int max_m, int bound, const TupleEnumeration& policy);

/// Pairs (i, j) of equal-length tuples in [1, bound] with i_m + j_m <= m + bound.
std::vector<std::pair<IndexTuple, IndexTuple>> thompson_freede_pairs(int bound, const TupleEnumeration& policy);

// Pure inequality checks over known spectra. The matrix overloads below
// eigensolve A, B, A + B and delegate here, reporting NotAdmissibleSum when
// A + B fails admissibility.
CheckReport check_weyl(const SumSpectra& s, double tol = kTolCheck);
CheckReport check_lidskii_wielandt(const SumSpectra& s, int max_m, double tol = kTolCheck,
                                   const TupleEnumeration& policy = {});
CheckReport check_thompson_freede(const SumSpectra& s, double tol = kTolCheck, const TupleEnumeration& policy = {});

/// Trace of spec(C) against spec(A) + spec(B), cross-checked with matrix traces.
/// `tol` is relative to max(1, sum of |eigenvalues|).
CheckReport check_trace_identity(const PseudoHermitianMatrix& a, const PseudoHermitianMatrix& b, double tol = 1e-9);
CheckReport check_weyl(const PseudoHermitianMatrix& a, const PseudoHermitianMatrix& b, double tol = kTolCheck);
CheckReport check_lidskii_wielandt(const PseudoHermitianMatrix& a, const PseudoHermitianMatrix& b, int max_m,
                                   double tol = kTolCheck, const TupleEnumeration& policy = {});
CheckReport check_thompson_freede(const PseudoHermitianMatrix& a, const PseudoHermitianMatrix& b,
                                  double tol = kTolCheck, const TupleEnumeration& policy = {});

/// Rayleigh-ratio extremal properties of the eigenbasis: lambda_1 bounds the
/// positive cone from below and mu_1 the negative cone from above; lambda_k is
/// the min over positive x J-orthogonal to v_1..v_{k-1} and the max over span(v)
/// J-orthogonal to v_{k+1}..v_p (and the mirrored statements for mu).
/// One-sided bounds use `tol`, eigenvector witnesses use `tol_eq`.
CheckReport check_rayleigh_bounds(const PseudoHermitianMatrix& a, int n_samples, Rng& rng,
                                  const SamplerConfig& cfg = {}, double tol = kTolCheck,
                                  double tol_eq = kTolEquality);

/// For each k: every sampled positive k-subspace has compression top >= lambda_k;
/// span(v_1..v_k) attains lambda_k; positive x J-orthogonal to v_1..v_{k-1}
/// have R_A(x) >= lambda_k with equality at v_k.
CheckReport check_courant_fischer(const PseudoHermitianMatrix& a, int n_subspaces, Rng& rng,
                                  const SamplerConfig& cfg = {}, double tol = kTolCheck,
                                  double tol_eq = kTolEquality);

/// Sum of Rayleigh ratios over sampled positive k-frames is >= lambda_1 + ... + lambda_k;
/// the eigenframe attains it.
CheckReport check_ky_fan(const PseudoHermitianMatrix& a, int k, int n_frames, Rng& rng,
                         const SamplerConfig& cfg = {}, double tol = kTolCheck, double tol_eq = kTolEquality);

struct WielandtOptions {
  int n_flags = 50;         // random flags for the ascent and interlacing parts
  int n_frames = 20;        // subordinate frames of the eigenflag
  int ascent_iters = 200;   // sweep cap per ascent
  int restarts = 3;         // random starting frames besides the greedy one
  double tol = kTolCheck;
  double soft_tol = 1e-6;
  double tol_eq = kTolEquality;
};

struct AscentResult {
  double trace = 0.0;
  int sweeps = 0;
  bool converged = false;
  ComplexMatrix frame;
};

/// Maximizes sum_j R_A(x_j) over frames subordinate to `flag`, one slot at a
/// time: slot j moves to the top eigenvector of A restricted to level j
/// J-orthogonal to the other slots. Monotone; stops when a sweep gains < gain_tol.
AscentResult maximize_subordinate_trace(const PseudoHermitianMatrix& a, const PositiveFlag& flag,
                                        const ComplexMatrix& start, int max_sweeps, double gain_tol = 1e-10);

/// Greedy subordinate frame: x_j is the top eigenvector of A on level j
/// J-orthogonal to x_1..x_{j-1}.
ComplexMatrix greedy_subordinate_frame(const PseudoHermitianMatrix& a, const PositiveFlag& flag);

/// Statement II (hard) on the eigenflag, statement I (soft, via ascent) on
/// random flags, and interlacing of codimension-one positive compressions.
CheckReport check_wielandt_flag(const PseudoHermitianMatrix& a, const IndexTuple& dims, Rng& rng,
                                const WielandtOptions& opt = {}, const SamplerConfig& cfg = {});

/// Planted-spectrum recovery: |recovered - planted| <= tol_factor * cond(U)^2 per eigenvalue,
/// plus structural validation of A and U.
CheckReport check_planted_recovery(const PlantedInstance& inst, double tol_factor = 1e-8,
                                   double tol_struct = kTolStruct);

}  // namespace kreinval
