#include "kreinval/variational_suite.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

namespace kreinval {

namespace {

InstanceDescriptor describe(Signature sig) { return {sig.p(), sig.q(), 0, 0}; }

std::vector<int> as_vector(const IndexTuple& t) { return t.indices(); }

// Eigensolves A, B and A + B; records the failing outcome on the report.
std::optional<SumSpectra> sum_spectra(const PseudoHermitianMatrix& a, const PseudoHermitianMatrix& b,
                                      CheckReport& report) {
  std::optional<AdmissibleSpectrum> sa;
  std::optional<AdmissibleSpectrum> sb;
  try {
    sa = check_admissible(a);
    sb = check_admissible(b);
  } catch (const Error& e) {
    report.fail(Outcome::NotAdmissibleInput, e.what());
    return std::nullopt;
  }
  try {
    return SumSpectra{*sa, *sb, check_admissible(a + b)};
  } catch (const Error& e) {
    // The admissible cone is convex, so this is a failure, not a skip.
    report.fail(Outcome::NotAdmissibleSum, e.what());
    return std::nullopt;
  }
}

std::optional<AdmissibleEigenbasis> eigenbasis_or_fail(const PseudoHermitianMatrix& a, CheckReport& report) {
  try {
    return admissible_eigenbasis(a);
  } catch (const Error& e) {
    report.fail(Outcome::NotAdmissibleInput, e.what());
    return std::nullopt;
  }
}

double sum_lambda(const AdmissibleSpectrum& s, const std::vector<int>& idx) {
  double acc = s.lambda(idx.front());
  for (std::size_t k = 1; k < idx.size(); ++k) acc += s.lambda(idx[k]);
  return acc;
}

double sum_mu(const AdmissibleSpectrum& s, const std::vector<int>& idx) {
  double acc = s.mu(idx.front());
  for (std::size_t k = 1; k < idx.size(); ++k) acc += s.mu(idx[k]);
  return acc;
}

std::vector<int> leading_indices(int m) {
  std::vector<int> idx(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) idx[static_cast<std::size_t>(k)] = k + 1;
  return idx;
}

IndexTuple random_tuple(int m, int bound, std::mt19937_64& gen) {
  std::vector<int> all(static_cast<std::size_t>(bound));
  for (int k = 0; k < bound; ++k) all[static_cast<std::size_t>(k)] = k + 1;
  for (int k = 0; k < m; ++k) {
    std::uniform_int_distribution<int> pick(k, bound - 1);
    std::swap(all[static_cast<std::size_t>(k)], all[static_cast<std::size_t>(pick(gen))]);
  }
  std::vector<int> chosen(all.begin(), all.begin() + m);
  std::sort(chosen.begin(), chosen.end());
  return IndexTuple(std::move(chosen), bound);
}

bool tuple_less(const IndexTuple& x, const IndexTuple& y) {
  if (x.size() != y.size()) return x.size() < y.size();
  return x.indices() < y.indices();
}

// Negative-cone analogue of sample_positive_subspace(sig, 1, ...).
ComplexVector sample_negative_vector(Signature sig, const SamplerConfig& cfg, Rng& rng) {
  const int p = sig.p();
  const int q = sig.q();
  ComplexVector b = rng.complex_normal(q, 1);
  b /= b.norm();
  ComplexMatrix k = rng.complex_normal(p, q);
  if (p > 0) {
    Eigen::JacobiSVD<ComplexMatrix> svd(k);
    k *= cfg.contraction_cap * rng.uniform(0.0, 1.0) / svd.singularValues()(0);
  }
  ComplexVector x(sig.n());
  x.head(p) = k * b;
  x.tail(q) = b;
  if (cfg.rotate_subspaces && p > 0) x = sample_pseudo_unitary(sig, cfg, rng).matrix() * x;
  return x;
}

// Random combination of `keep` columns plus a strictly smaller combination of
// `other` columns (other block has the opposite cone type).
ComplexVector sample_dominated(const ComplexMatrix& keep, const ComplexMatrix& other, Rng& rng) {
  ComplexVector alpha = rng.complex_normal(static_cast<int>(keep.cols()), 1);
  ComplexVector x = keep * alpha;
  if (other.cols() > 0) {
    ComplexVector beta = rng.complex_normal(static_cast<int>(other.cols()), 1);
    beta *= 0.99 * rng.uniform(0.0, 1.0) * alpha.norm() / beta.norm();
    x += other * beta;
  }
  return x;
}

PseudoOrthonormalFrame frame_from_columns(Signature sig, const ComplexMatrix& cols) {
  const double scale = std::max(1.0, cols.colwise().squaredNorm().maxCoeff());
  return PseudoOrthonormalFrame(sig, cols, Orientation::Positive, kTolFrame * scale);
}

ComplexMatrix select_columns(const ComplexMatrix& m, const std::vector<int>& one_based) {
  ComplexMatrix out(m.rows(), static_cast<Eigen::Index>(one_based.size()));
  for (std::size_t j = 0; j < one_based.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = m.col(one_based[j] - 1);
  return out;
}

double rayleigh_sum(const PseudoHermitianMatrix& a, const ComplexMatrix& x) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) acc += rayleigh(a, x.col(j));
  return acc;
}

// Basis of span(level) J-orthogonal to every column of `others`.
ComplexMatrix slot_subspace(const ComplexMatrix& level, const ComplexMatrix& others, Signature sig) {
  if (others.cols() == 0) return level;
  const RealVector jd = MetricJ(sig).diagonal();
  const ComplexMatrix constraints = others.adjoint() * jd.cast<Complex>().asDiagonal() * level;
  Eigen::JacobiSVD<ComplexMatrix> svd(constraints, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 1e-10 * std::max(1.0, s(0))) ++rank;
  return level * svd.matrixV().rightCols(level.cols() - rank);
}

// Largest Rayleigh ratio on a positive subspace and its J-normalized maximizer.
std::pair<double, ComplexVector> top_in_subspace(const PseudoHermitianMatrix& a, const ComplexMatrix& s) {
  const Signature sig = a.signature();
  const RealVector jd = MetricJ(sig).diagonal();
  const ComplexMatrix g = gram(s, sig);
  ComplexMatrix h = s.adjoint() * jd.cast<Complex>().asDiagonal() * a.matrix() * s;
  h = 0.5 * (h + h.adjoint());
  Eigen::GeneralizedSelfAdjointEigenSolver<ComplexMatrix> es(h, g);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::SolverFailure, "restricted eigenproblem failed");
  const Eigen::Index top = es.eigenvalues().size() - 1;
  ComplexVector x = s * es.eigenvectors().col(top);
  x /= std::sqrt(pair(x, x, sig).real());
  return {es.eigenvalues()(top), x};
}

constexpr int kGradientSteps = 12;

// tr(G^-1 H) with G = X^* J X, H = X^* J A X: trace of the compression to span(X).
double compression_trace(const PseudoHermitianMatrix& a, const ComplexMatrix& x) {
  const Signature sig = a.signature();
  const RealVector jd = MetricJ(sig).diagonal();
  const ComplexMatrix jx = jd.cast<Complex>().asDiagonal() * x;
  const ComplexMatrix g = gram(x, sig);
  ComplexMatrix h = jx.adjoint() * a.matrix() * x;
  h = 0.5 * (h + h.adjoint());
  Eigen::LLT<ComplexMatrix> llt(g);
  if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
  return llt.solve(h).trace().real();
}

// Euclidean ascent direction of compression_trace in X (up to a factor 2).
ComplexMatrix compression_trace_gradient(const PseudoHermitianMatrix& a, const ComplexMatrix& x) {
  const Signature sig = a.signature();
  const RealVector jd = MetricJ(sig).diagonal();
  const ComplexMatrix jx = jd.cast<Complex>().asDiagonal() * x;
  const ComplexMatrix g = gram(x, sig);
  ComplexMatrix h = jx.adjoint() * a.matrix() * x;
  h = 0.5 * (h + h.adjoint());
  const ComplexMatrix k = g.llt().solve(ComplexMatrix::Identity(g.rows(), g.cols()));
  const ComplexMatrix nmat = k * h * k;
  // Z = K X^* J A - N X^* J, gradient = Z^*
  const ComplexMatrix z = k * jx.adjoint() * a.matrix() - nmat * jx.adjoint();
  return z.adjoint();
}

}  // namespace

std::vector<IndexTuple> index_tuples(int max_m, int bound, const TupleEnumeration& policy) {
  std::vector<IndexTuple> all;
  for (int m = 1; m <= std::min(max_m, bound); ++m) {
    auto part = enumerate_tuples(m, bound);
    all.insert(all.end(), part.begin(), part.end());
  }
  if (bound <= policy.full_limit || static_cast<int>(all.size()) <= policy.sample_count) return all;
  std::mt19937_64 gen(policy.seed);
  for (std::size_t k = 0; k < static_cast<std::size_t>(policy.sample_count); ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, all.size() - 1);
    std::swap(all[k], all[pick(gen)]);
  }
  all.resize(static_cast<std::size_t>(policy.sample_count), all.front());
  std::sort(all.begin(), all.end(), tuple_less);
  return all;
}

std::vector<std::pair<IndexTuple, IndexTuple>> thompson_freede_pairs(int bound, const TupleEnumeration& policy) {
  std::vector<std::pair<IndexTuple, IndexTuple>> out;
  if (bound < 1) return out;
  if (bound <= policy.full_limit) {
    for (int m = 1; m <= bound; ++m) {
      const auto tuples = enumerate_tuples(m, bound);
      for (const auto& i : tuples)
        for (const auto& j : tuples)
          if (i.back() + j.back() <= m + bound) out.emplace_back(i, j);
    }
    return out;
  }
  std::mt19937_64 gen(policy.seed);
  std::uniform_int_distribution<int> pick_m(1, bound);
  const int max_draws = 100 * policy.sample_count;
  for (int draw = 0; draw < max_draws && static_cast<int>(out.size()) < policy.sample_count; ++draw) {
    const int m = pick_m(gen);
    IndexTuple i = random_tuple(m, bound, gen);
    IndexTuple j = random_tuple(m, bound, gen);
    if (i.back() + j.back() <= m + bound) out.emplace_back(std::move(i), std::move(j));
  }
  return out;
}

CheckReport check_weyl(const SumSpectra& s, double tol) {
  CheckReport r("weyl", describe(s.a.signature()));
  for (int k = 1; k <= s.a.p(); ++k) r.add_ge("lambda", {k}, s.c.lambda(k), s.a.lambda(k) + s.b.lambda(1), tol);
  for (int l = 1; l <= s.a.q(); ++l) r.add_le("mu", {l}, s.c.mu(l), s.a.mu(l) + s.b.mu(1), tol);
  return r;
}

CheckReport check_lidskii_wielandt(const SumSpectra& s, int max_m, double tol, const TupleEnumeration& policy) {
  CheckReport r("lidskii_wielandt", describe(s.a.signature()));
  for (const auto& t : index_tuples(max_m, s.a.p(), policy)) {
    const auto idx = as_vector(t);
    r.add_ge("lambda", idx, sum_lambda(s.c, idx), sum_lambda(s.a, idx) + sum_lambda(s.b, leading_indices(t.size())), tol);
  }
  for (const auto& t : index_tuples(max_m, s.a.q(), policy)) {
    const auto idx = as_vector(t);
    r.add_le("mu", idx, sum_mu(s.c, idx), sum_mu(s.a, idx) + sum_mu(s.b, leading_indices(t.size())), tol);
  }
  return r;
}

CheckReport check_thompson_freede(const SumSpectra& s, double tol, const TupleEnumeration& policy) {
  CheckReport r("thompson_freede", describe(s.a.signature()));
  const auto shifted = [](const IndexTuple& i, const IndexTuple& j) {
    std::vector<int> k(static_cast<std::size_t>(i.size()));
    for (int h = 0; h < i.size(); ++h) k[static_cast<std::size_t>(h)] = i[h] + j[h] - (h + 1);
    return k;
  };
  for (const auto& [i, j] : thompson_freede_pairs(s.a.p(), policy))
    r.add_ge("lambda", i.indices(), sum_lambda(s.c, shifted(i, j)),
             sum_lambda(s.a, i.indices()) + sum_lambda(s.b, j.indices()), tol, j.indices());
  for (const auto& [i, j] : thompson_freede_pairs(s.a.q(), policy))
    r.add_le("mu", i.indices(), sum_mu(s.c, shifted(i, j)), sum_mu(s.a, i.indices()) + sum_mu(s.b, j.indices()),
             tol, j.indices());
  return r;
}

CheckReport check_trace_identity(const PseudoHermitianMatrix& a, const PseudoHermitianMatrix& b, double tol) {
  CheckReport r("trace", describe(a.signature()));
  const auto s = sum_spectra(a, b, r);
  if (!s) return r;
  const auto abs_total = [](const AdmissibleSpectrum& x) {
    double acc = 0.0;
    for (double v : x.lambdas()) acc += std::abs(v);
    for (double v : x.mus()) acc += std::abs(v);
    return acc;
  };
  const double scale = std::max({1.0, abs_total(s->a), abs_total(s->b), abs_total(s->c)});
  r.add_eq("spectral_sum", {}, s->c.total(), s->a.total() + s->b.total(), tol * scale);
  r.add_eq("matrix_trace_A", {}, s->a.total(), a.matrix().trace().real(), tol * scale);
  r.add_eq("matrix_trace_B", {}, s->b.total(), b.matrix().trace().real(), tol * scale);
  r.add_eq("matrix_trace_C", {}, s->c.total(), (a + b).matrix().trace().real(), tol * scale);
  return r;
}

CheckReport check_weyl(const PseudoHermitianMatrix& a, const PseudoHermitianMatrix& b, double tol) {
  CheckReport r("weyl", describe(a.signature()));
  const auto s = sum_spectra(a, b, r);
  return s ? check_weyl(*s, tol) : r;
}

CheckReport check_lidskii_wielandt(const PseudoHermitianMatrix& a, const PseudoHermitianMatrix& b, int max_m,
                                   double tol, const TupleEnumeration& policy) {
  CheckReport r("lidskii_wielandt", describe(a.signature()));
  const auto s = sum_spectra(a, b, r);
  return s ? check_lidskii_wielandt(*s, max_m, tol, policy) : r;
}

CheckReport check_thompson_freede(const PseudoHermitianMatrix& a, const PseudoHermitianMatrix& b, double tol,
                                  const TupleEnumeration& policy) {
  CheckReport r("thompson_freede", describe(a.signature()));
  const auto s = sum_spectra(a, b, r);
  return s ? check_thompson_freede(*s, tol, policy) : r;
}

CheckReport check_rayleigh_bounds(const PseudoHermitianMatrix& a, int n_samples, Rng& rng, const SamplerConfig& cfg,
                                  double tol, double tol_eq) {
  const Signature sig = a.signature();
  CheckReport r("rayleigh_bounds", describe(sig));
  const auto eb = eigenbasis_or_fail(a, r);
  if (!eb) return r;
  const int p = sig.p();
  const int q = sig.q();
  const auto& spec = eb->spectrum;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  if (p > 0) {
    double lowest = kInf;
    for (int s = 0; s < n_samples; ++s)
      lowest = std::min(lowest, rayleigh(a, sample_positive_subspace(sig, 1, cfg, rng).columns().col(0)));
    r.add_ge("positive_cone_min", {1}, lowest, spec.lambda(1), tol);
    r.add_eq("positive_cone_witness", {1}, rayleigh(a, eb->v.col(0)), spec.lambda(1), tol_eq);
  }
  if (q > 0) {
    double highest = -kInf;
    for (int s = 0; s < n_samples; ++s) highest = std::max(highest, rayleigh(a, sample_negative_vector(sig, cfg, rng)));
    r.add_le("negative_cone_max", {1}, highest, spec.mu(1), tol);
    r.add_eq("negative_cone_witness", {1}, rayleigh(a, eb->w.col(0)), spec.mu(1), tol_eq);
  }

  for (int k = 1; k <= p; ++k) {
    // min over positive x J-orthogonal to v_1..v_{k-1}
    double lowest = kInf;
    for (int s = 0; s < n_samples; ++s)
      lowest = std::min(lowest, rayleigh(a, sample_dominated(eb->v.rightCols(p - k + 1), eb->w, rng)));
    r.add_ge("lambda_min_orthogonal", {k}, lowest, spec.lambda(k), tol);
    // max over span(v) J-orthogonal to v_{k+1}..v_p
    double highest = -kInf;
    for (int s = 0; s < n_samples; ++s)
      highest = std::max(highest, rayleigh(a, sample_dominated(eb->v.leftCols(k), ComplexMatrix(sig.n(), 0), rng)));
    r.add_le("lambda_max_in_span", {k}, highest, spec.lambda(k), tol);
    r.add_eq("lambda_witness", {k}, rayleigh(a, eb->v.col(k - 1)), spec.lambda(k), tol_eq);
  }
  for (int l = 1; l <= q; ++l) {
    double highest = -kInf;
    for (int s = 0; s < n_samples; ++s)
      highest = std::max(highest, rayleigh(a, sample_dominated(eb->w.rightCols(q - l + 1), eb->v, rng)));
    r.add_le("mu_max_orthogonal", {l}, highest, spec.mu(l), tol);
    double lowest = kInf;
    for (int s = 0; s < n_samples; ++s)
      lowest = std::min(lowest, rayleigh(a, sample_dominated(eb->w.leftCols(l), ComplexMatrix(sig.n(), 0), rng)));
    r.add_ge("mu_min_in_span", {l}, lowest, spec.mu(l), tol);
    r.add_eq("mu_witness", {l}, rayleigh(a, eb->w.col(l - 1)), spec.mu(l), tol_eq);
  }
  return r;
}

CheckReport check_courant_fischer(const PseudoHermitianMatrix& a, int n_subspaces, Rng& rng, const SamplerConfig& cfg,
                                  double tol, double tol_eq) {
  const Signature sig = a.signature();
  CheckReport r("courant_fischer", describe(sig));
  const auto eb = eigenbasis_or_fail(a, r);
  if (!eb) return r;
  const int p = sig.p();
  const auto& spec = eb->spectrum;
  for (int k = 1; k <= p; ++k) {
    double lowest_top = std::numeric_limits<double>::infinity();
    for (int s = 0; s < n_subspaces; ++s) {
      const auto frame = pseudo_orthonormalize(sample_positive_subspace(sig, k, cfg, rng).columns(), sig);
      lowest_top = std::min(lowest_top, compress(a, frame).top());
    }
    r.add_ge("subspace_max", {k}, lowest_top, spec.lambda(k), tol);
    r.add_eq("eigen_subspace_max", {k}, compress(a, frame_from_columns(sig, eb->v.leftCols(k))).top(), spec.lambda(k),
             tol_eq);

    double lowest = std::numeric_limits<double>::infinity();
    for (int s = 0; s < n_subspaces; ++s)
      lowest = std::min(lowest, rayleigh(a, sample_dominated(eb->v.rightCols(p - k + 1), eb->w, rng)));
    r.add_ge("maximin_orthogonal", {k}, lowest, spec.lambda(k), tol);
    r.add_eq("maximin_witness", {k}, rayleigh(a, eb->v.col(k - 1)), spec.lambda(k), tol_eq);
  }
  return r;
}

CheckReport check_ky_fan(const PseudoHermitianMatrix& a, int k, int n_frames, Rng& rng, const SamplerConfig& cfg,
                         double tol, double tol_eq) {
  const Signature sig = a.signature();
  CheckReport r("ky_fan", describe(sig));
  if (k < 1 || k > sig.p()) throw Error(ErrorKind::InvalidArgument, "ky_fan needs 1 <= k <= p");
  const auto eb = eigenbasis_or_fail(a, r);
  if (!eb) return r;
  const double target = sum_lambda(eb->spectrum, leading_indices(k));
  double lowest = std::numeric_limits<double>::infinity();
  double worst_consistency = 0.0;
  double consistency_scale = 1.0;
  for (int f = 0; f < n_frames; ++f) {
    const auto frame = pseudo_orthonormalize(sample_positive_subspace(sig, k, cfg, rng).columns(), sig);
    const double ratio_sum = rayleigh_sum(a, frame.vectors());
    lowest = std::min(lowest, ratio_sum);
    const double gap = std::abs(ratio_sum - compress(a, frame).trace());
    if (gap > worst_consistency) {
      worst_consistency = gap;
      consistency_scale = std::max(1.0, std::abs(ratio_sum));
    }
  }
  r.add_ge("sampled_frames", {k}, lowest, target, tol);
  r.add_eq("ratio_sum_equals_compression_trace", {k}, worst_consistency, 0.0, tol_eq * consistency_scale);
  r.add_eq("eigenframe", {k}, rayleigh_sum(a, eb->v.leftCols(k)), target, tol_eq);
  return r;
}

ComplexMatrix greedy_subordinate_frame(const PseudoHermitianMatrix& a, const PositiveFlag& flag) {
  const Signature sig = a.signature();
  ComplexMatrix x(sig.n(), flag.levels());
  for (int j = 0; j < flag.levels(); ++j) {
    const ComplexMatrix s = slot_subspace(flag.level(j), x.leftCols(j), sig);
    x.col(j) = top_in_subspace(a, s).second;
  }
  return x;
}

AscentResult maximize_subordinate_trace(const PseudoHermitianMatrix& a, const PositiveFlag& flag,
                                        const ComplexMatrix& start, int max_sweeps, double gain_tol) {
  const Signature sig = a.signature();
  const int m = flag.levels();
  std::vector<ComplexMatrix> level_q;
  for (int j = 0; j < m; ++j) {
    const ComplexMatrix level = flag.level(j);
    Eigen::HouseholderQR<ComplexMatrix> qr(level);
    level_q.push_back(qr.householderQ() * ComplexMatrix::Identity(level.rows(), level.cols()));
  }
  double step = 1.0 / std::max(1.0, a.matrix().norm());

  AscentResult out;
  out.frame = start;
  out.trace = rayleigh_sum(a, out.frame);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double before = out.trace;
    for (int j = 0; j < m; ++j) {
      ComplexMatrix others(sig.n(), m - 1);
      for (int k = 0, c = 0; k < m; ++k)
        if (k != j) others.col(c++) = out.frame.col(k);
      const auto [value, x] = top_in_subspace(a, slot_subspace(flag.level(j), others, sig));
      if (value > rayleigh(a, out.frame.col(j))) out.frame.col(j) = x;
    }
    // Single-slot moves stall when a slot has no room; a joint step on
    // tr(G^-1 H) moves every column inside its level at once.
    for (int g = 0; g < kGradientSteps; ++g) {
      ComplexMatrix dir = compression_trace_gradient(a, out.frame);
      for (int j = 0; j < m; ++j) dir.col(j) = level_q[j] * (level_q[j].adjoint() * dir.col(j));
      const double slope = dir.squaredNorm();
      if (slope < 1e-28) break;
      const double f0 = compression_trace(a, out.frame);
      bool moved = false;
      for (int halving = 0; halving < 40 && !moved; ++halving, step *= 0.5) {
        const ComplexMatrix trial = out.frame + step * dir;
        const double f1 = compression_trace(a, trial);
        if (f1 >= f0 + 1e-4 * step * slope) {
          try {
            out.frame = pseudo_orthonormalize(trial, sig).vectors();
            moved = true;
          } catch (const Error&) {
          }
        }
      }
      if (!moved) break;
      step *= 4.0;
    }
    out.trace = rayleigh_sum(a, out.frame);
    out.sweeps = sweep + 1;
    if (out.trace - before < gain_tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

CheckReport check_wielandt_flag(const PseudoHermitianMatrix& a, const IndexTuple& dims, Rng& rng,
                                const WielandtOptions& opt, const SamplerConfig& cfg) {
  const Signature sig = a.signature();
  CheckReport r("wielandt", describe(sig));
  if (dims.back() > sig.p()) throw Error(ErrorKind::InvalidArgument, "flag dimensions exceed p");
  const auto eb = eigenbasis_or_fail(a, r);
  if (!eb) return r;
  const int p = sig.p();
  const auto& spec = eb->spectrum;
  const std::vector<int> idx = dims.indices();
  const double target = sum_lambda(spec, idx);

  // Statement II on the eigenflag V_{i_j} = span(v_1..v_{i_j}).
  const PositiveFlag eigenflag(dims, SubspaceBasis(eb->v.leftCols(dims.back())));
  double highest = -std::numeric_limits<double>::infinity();
  for (int f = 0; f < opt.n_frames; ++f)
    highest = std::max(highest, compress(a, sample_subordinate_frame(eigenflag, sig, rng)).trace());
  r.add_le("eigenflag_subordinate_max", idx, highest, target, opt.tol);
  r.add_eq("eigenvector_frame", idx, compress(a, frame_from_columns(sig, select_columns(eb->v, idx))).trace(), target,
           opt.tol_eq);

  std::vector<double> worst_interlace(static_cast<std::size_t>(std::max(p - 1, 0)),
                                      std::numeric_limits<double>::infinity());
  std::vector<double> worst_xi(worst_interlace.size(), 0.0);
  int unconverged = 0;
  for (int f = 0; f < opt.n_flags; ++f) {
    auto [flag, frame] = sample_flag_with_subordinate(sig, dims, cfg, rng);

    // Statement I: some subordinate frame reaches the target.
    AscentResult best = maximize_subordinate_trace(a, flag, greedy_subordinate_frame(a, flag), opt.ascent_iters);
    for (int s = 0; s <= opt.restarts; ++s) {
      const ComplexMatrix start = s == 0 ? frame.vectors() : sample_subordinate_frame(flag, sig, rng).vectors();
      AscentResult run = maximize_subordinate_trace(a, flag, start, opt.ascent_iters);
      if (run.trace > best.trace) best = std::move(run);
    }
    if (!best.converged) ++unconverged;
    r.add_soft_ge("random_flag_ascent", {f}, best.trace, target, opt.soft_tol);

    // Interlacing on a (p-1)-dimensional positive subspace through a flag level.
    if (p >= 2) {
      int level = -1;
      for (int j = 0; j < flag.levels(); ++j)
        if (dims[j] <= p - 1) level = j;
      ComplexMatrix base = level >= 0 ? flag.level(level) : ComplexMatrix(sig.n(), 0);
      const int extra = p - 1 - static_cast<int>(base.cols());
      ComplexMatrix big(sig.n(), p - 1);
      big.leftCols(base.cols()) = base;
      if (extra > 0) {
        const ComplexMatrix host = j_orthogonal_complement(base, sig);
        big.rightCols(extra) = sample_positive_subspace_within(sig, host, extra, cfg, rng).columns();
      }
      const RealVector xi = compress(a, pseudo_orthonormalize(big, sig)).etas;
      for (int i = 1; i <= p - 1; ++i) {
        const double gap = xi(i - 1) - spec.lambda(i);
        if (gap < worst_interlace[static_cast<std::size_t>(i - 1)]) {
          worst_interlace[static_cast<std::size_t>(i - 1)] = gap;
          worst_xi[static_cast<std::size_t>(i - 1)] = xi(i - 1);
        }
      }
    }
  }
  if (opt.n_flags > 0)
    for (int i = 1; i <= p - 1; ++i)
      r.add_ge("interlace", {i}, worst_xi[static_cast<std::size_t>(i - 1)], spec.lambda(i), opt.tol);
  if (unconverged > 0) {
    std::ostringstream os;
    os << unconverged << " of " << opt.n_flags << " ascents hit the sweep cap";
    r.set_note(os.str());
  }
  return r;
}

CheckReport check_planted_recovery(const PlantedInstance& inst, double tol_factor, double tol_struct) {
  const Signature sig = inst.matrix.signature();
  CheckReport r("structural", describe(sig));
  const double cond = inst.unitary.condition();
  const double scale = std::max(1.0, inst.unitary.matrix().squaredNorm());
  r.add_le("pseudo_hermitian_residual", {}, pseudo_hermitian_residual(inst.matrix.matrix(), sig), 0.0, tol_struct);
  r.add_le("pseudo_unitary_residual", {}, pseudo_unitary_residual(inst.unitary.matrix(), sig), 0.0, 1e-12 * scale);
  r.add_le("dagger_is_inverse", {},
           max_abs(inst.unitary.matrix() * inst.unitary.inverse() - ComplexMatrix::Identity(sig.n(), sig.n())), 0.0,
           1e-12 * scale);
  std::optional<AdmissibleSpectrum> got;
  try {
    got = check_admissible(inst.matrix);
  } catch (const Error& e) {
    r.fail(Outcome::NotAdmissibleInput, e.what());
    return r;
  }
  const double tol = tol_factor * cond * cond;
  for (int k = 1; k <= sig.p(); ++k) r.add_eq("lambda", {k}, got->lambda(k), inst.spectrum.lambda(k), tol);
  for (int l = 1; l <= sig.q(); ++l) r.add_eq("mu", {l}, got->mu(l), inst.spectrum.mu(l), tol);
  return r;
}

}  // namespace kreinval
