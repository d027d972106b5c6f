#pragma once

// Spectral gap of the normalized Laplacian L = I - A/k of a k-regular
// multigraph. lambda1 is the second-smallest eigenvalue of L (0 when the
// graph is disconnected); the multiplicity of 0 equals the component count.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "thinlab/error.hpp"
#include "thinlab/graph.hpp"
#include "thinlab/parallel.hpp"

namespace thinlab {

enum class SolverMethod { automatic, dense, iterative };

inline std::string to_string(SolverMethod m) {
  switch (m) {
    case SolverMethod::dense: return "dense";
    case SolverMethod::iterative: return "iterative";
    default: return "auto";
  }
}

inline SolverMethod parse_solver_method(const std::string& s) {
  if (s == "auto") return SolverMethod::automatic;
  if (s == "dense") return SolverMethod::dense;
  if (s == "iterative") return SolverMethod::iterative;
  throw InvalidArgument("unknown solver '" + s + "' (expected auto, dense or iterative)");
}

/// Eigenvalues of L below this are counted as zero.
inline constexpr double kZeroEigenvalue = 1e-8;

struct SolverOptions {
  SolverMethod method = SolverMethod::automatic;
  std::size_t dense_crossover = 3000;  // auto uses dense for N <= crossover
  double dense_tolerance = 1e-9;       // absolute residual
  double iterative_tolerance = 1e-6;   // residual relative to ||x||
  std::size_t max_iterations = 0;      // matrix-vector products; 0 means 10 N
  std::size_t krylov_dimension = 40;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
  bool keep_eigenvector = false;
};

struct SpectralReport {
  std::string graph_id;
  std::size_t vertices = 0;
  std::size_t degree = 0;
  double lambda1 = 0.0;
  std::size_t zero_multiplicity = 0;
  std::size_t components = 0;
  SolverMethod solver = SolverMethod::dense;
  double residual = 0.0;   // ||L x - lambda1 x|| for the returned unit vector x
  double tolerance = 0.0;  // the residual bound the solver was held to
  double seconds = 0.0;
  std::size_t iterations = 0;
  std::vector<double> eigenvector;  // filled when SolverOptions::keep_eigenvector
};

/// y = L x.
inline void apply_laplacian(const MultiGraph& g, const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  const std::size_t n = g.vertex_count();
  const double inv_k = 1.0 / static_cast<double>(g.degree());
  y.resize(static_cast<Eigen::Index>(n));
  for (std::size_t u = 0; u < n; ++u) {
    double acc = 0.0;
    for (auto v : g.neighbors(u)) acc += x[v];
    y[u] = x[u] - inv_k * acc;
  }
}

inline Eigen::MatrixXd dense_laplacian(const MultiGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  const double inv_k = 1.0 / static_cast<double>(g.degree());
  Eigen::MatrixXd l = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index u = 0; u < n; ++u)
    for (auto v : g.neighbors(static_cast<std::size_t>(u))) l(u, v) -= inv_k;
  return l;
}

namespace detail {

struct KrylovResult {
  double theta = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;
  std::size_t matvecs = 0;
  bool converged = false;
};

/// Largest eigenpair of a symmetric operator by thick-restart Lanczos
/// (Krylov-Schur) with full reorthogonalization. `op(x, y)` writes y = M x.
/// `accept(theta, x)` returns the true residual of a candidate; the search
/// stops once it is <= tol.
template <class Op, class Accept>
KrylovResult largest_eigenpair(Op&& op, Accept&& accept, Eigen::VectorXd start, Eigen::Index space_dim,
                               std::size_t krylov_dim, double tol, std::size_t max_matvecs) {
  const Eigen::Index n = start.size();
  const Eigen::Index m = std::max<Eigen::Index>(
      1, std::min<Eigen::Index>(static_cast<Eigen::Index>(krylov_dim), space_dim));
  Eigen::MatrixXd basis(n, m + 1);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd w(n), coeff, extra;
  basis.col(0) = start / start.norm();

  KrylovResult best;
  best.residual = std::numeric_limits<double>::infinity();
  Eigen::Index first = 0;
  while (true) {
    Eigen::Index used = m;
    double beta = 0.0;
    bool breakdown = false;
    for (Eigen::Index j = first; j < m; ++j) {
      op(basis.col(j), w);
      ++best.matvecs;
      auto span = basis.leftCols(j + 1);
      coeff = span.transpose() * w;
      w -= span * coeff;
      extra = span.transpose() * w;
      w -= span * extra;
      coeff += extra;
      h.block(0, j, j + 1, 1) = coeff;
      h.block(j, 0, 1, j + 1) = coeff.transpose();
      beta = w.norm();
      if (beta <= 1e-12) {
        breakdown = true;
        used = j + 1;
        beta = 0.0;
        break;
      }
      basis.col(j + 1) = w / beta;
      if (j + 1 < m) h(j + 1, j) = h(j, j + 1) = beta;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(h.topLeftCorner(used, used));
    const double theta = ritz.eigenvalues()(used - 1);
    const Eigen::VectorXd y = ritz.eigenvectors().col(used - 1);
    const double estimate = std::abs(beta * y(used - 1));
    if (estimate <= tol || breakdown || best.matvecs >= max_matvecs) {
      Eigen::VectorXd x = basis.leftCols(used) * y;
      x /= x.norm();
      const double true_residual = accept(theta, x);
      ++best.matvecs;
      if (true_residual < best.residual) {
        best.theta = theta;
        best.vector = x;
        best.residual = true_residual;
      }
      if (true_residual <= tol) {
        best.converged = true;
        return best;
      }
      if (breakdown || best.matvecs >= max_matvecs) return best;
    }

    // Keep the top half of the Ritz vectors and continue from the residual.
    const Eigen::Index keep = std::max<Eigen::Index>(1, std::min<Eigen::Index>(m / 2, used - 1));
    const Eigen::MatrixXd top = ritz.eigenvectors().rightCols(keep);
    const Eigen::MatrixXd kept = basis.leftCols(used) * top;
    basis.leftCols(keep) = kept;
    basis.col(keep) = basis.col(used);
    h.setZero();
    for (Eigen::Index i = 0; i < keep; ++i) {
      h(i, i) = ritz.eigenvalues()(used - keep + i);
      h(i, keep) = h(keep, i) = beta * top(used - 1, i);
    }
    first = keep;
  }
}

inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

inline SpectralReport dense_lambda1(const MultiGraph& g, const SolverOptions& opts) {
  SpectralReport r;
  r.solver = SolverMethod::dense;
  r.tolerance = opts.dense_tolerance;
  const Eigen::MatrixXd l = dense_laplacian(g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l);
  if (es.info() != Eigen::Success) throw ConvergenceFailure("dense eigensolver failed", 0.0, 0.0);
  const auto& vals = es.eigenvalues();
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (vals(i) < kZeroEigenvalue) ++r.zero_multiplicity;
  const Eigen::VectorXd x = es.eigenvectors().col(1);
  const double raw = vals(1);
  r.residual = (l * x - raw * x).norm();
  r.lambda1 = r.zero_multiplicity >= 2 ? 0.0 : raw;
  r.iterations = 1;
  if (opts.keep_eigenvector) r.eigenvector.assign(x.data(), x.data() + x.size());
  if (r.residual > opts.dense_tolerance)
    throw ConvergenceFailure("dense eigenpair residual above tolerance", raw, r.residual);
  return r;
}

inline SpectralReport iterative_lambda1(const MultiGraph& g, const SolverOptions& opts,
                                        const std::vector<std::vector<std::uint32_t>>& comps) {
  SpectralReport r;
  r.solver = SolverMethod::iterative;
  r.tolerance = opts.iterative_tolerance;
  const std::size_t n = g.vertex_count();
  const std::size_t c = comps.size();
  if (n == c) {
    // Every component is a single vertex: no nonzero eigenvalues at all.
    r.zero_multiplicity = c;
    r.lambda1 = 0.0;
    return r;
  }

  // Remove the component indicators (the exact kernel of L).
  auto deflate = [&comps](Eigen::VectorXd& x) {
    for (const auto& comp : comps) {
      double mean = 0.0;
      for (auto v : comp) mean += x[v];
      mean /= static_cast<double>(comp.size());
      for (auto v : comp) x[v] -= mean;
    }
  };
  // M = I - L/2 has spectrum in [0, 1]; the top of M off the kernel is the
  // bottom of L.
  Eigen::VectorXd lx(static_cast<Eigen::Index>(n));
  auto op = [&](const auto& x, Eigen::VectorXd& y) {
    Eigen::VectorXd in = x;
    apply_laplacian(g, in, lx);
    y = in - 0.5 * lx;
    deflate(y);
  };
  auto accept = [&](double theta, const Eigen::VectorXd& x) {
    apply_laplacian(g, x, lx);
    return (lx - 2.0 * (1.0 - theta) * x).norm();
  };

  std::mt19937_64 rng(opts.seed);
  Eigen::VectorXd start(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < start.size(); ++i) start[i] = uniform_unit(rng);
  deflate(start);

  const std::size_t max_matvecs = opts.max_iterations ? opts.max_iterations : 10 * n;
  auto result = largest_eigenpair(op, accept, std::move(start), static_cast<Eigen::Index>(n - c),
                                  opts.krylov_dimension, opts.iterative_tolerance, max_matvecs);
  const double deflated = std::max(0.0, 2.0 * (1.0 - result.theta));
  r.iterations = result.matvecs;
  r.residual = result.residual;
  if (!result.converged)
    throw ConvergenceFailure("iterative eigensolver did not converge in " + std::to_string(max_matvecs) +
                                 " matrix-vector products",
                             deflated, result.residual);
  r.zero_multiplicity = c + (deflated < kZeroEigenvalue ? 1 : 0);
  r.lambda1 = c >= 2 ? 0.0 : deflated;
  if (c >= 2) r.residual = 0.0;  // the difference of two indicators is exact
  if (opts.keep_eigenvector && c == 1) r.eigenvector.assign(result.vector.data(), result.vector.data() + n);
  return r;
}

}  // namespace detail

/// Second-smallest eigenvalue of L = I - A/k with zero multiplicity and a
/// residual certificate.
inline SpectralReport lambda1(const MultiGraph& g, const SolverOptions& opts = {}) {
  if (g.vertex_count() == 0) throw InvalidArgument("lambda1: empty graph");
  if (g.degree() == 0) throw InvalidArgument("lambda1: graph must have degree k >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  const auto comps = components(g);
  SpectralReport r;
  const bool dense = opts.method == SolverMethod::dense ||
                     (opts.method == SolverMethod::automatic && g.vertex_count() <= opts.dense_crossover);
  if (g.vertex_count() == 1) {
    // A single vertex has no second eigenvalue; report a zero gap.
    r.solver = dense ? SolverMethod::dense : SolverMethod::iterative;
    r.zero_multiplicity = 1;
    r.tolerance = dense ? opts.dense_tolerance : opts.iterative_tolerance;
  } else if (dense) {
    r = detail::dense_lambda1(g, opts);
  } else {
    r = detail::iterative_lambda1(g, opts, comps);
  }
  r.graph_id = g.id();
  r.vertices = g.vertex_count();
  r.degree = g.degree();
  r.components = comps.size();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

struct SweepEntry {
  std::int64_t prime = 0;
  std::optional<SpectralReport> report;
  std::string error;
};

/// One report per prime, computed concurrently and returned in input order.
/// A failing prime records its error and does not stop the sweep.
inline std::vector<SweepEntry> family_sweep(const std::function<MultiGraph(std::int64_t)>& builder,
                                            const std::vector<std::int64_t>& primes,
                                            const SolverOptions& opts = {}, std::size_t jobs = 0) {
  if (primes.empty()) throw InvalidArgument("family_sweep: no primes");
  std::vector<SweepEntry> out(primes.size());
  parallel_for(primes.size(), jobs, [&](std::size_t i) {
    out[i].prime = primes[i];
    try {
      out[i].report = lambda1(builder(primes[i]), opts);
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  });
  return out;
}

class InsufficientData : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct SeriesPoint {
  double vertices = 0.0;
  double lambda1 = 0.0;

  friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

/// lambda1 ~ c (log N)^(-A), fitted by least squares in log space with the
/// constraint A >= 0.
struct EsperantistFit {
  std::vector<SeriesPoint> series;
  double c = 0.0;
  double exponent = 0.0;
  double residual = 0.0;
  double min_lambda1 = 0.0;

  friend bool operator==(const EsperantistFit&, const EsperantistFit&) = default;
};

inline EsperantistFit esperantist_fit(const std::vector<SeriesPoint>& series) {
  if (series.size() < 3) throw InsufficientData("esperantist_fit: need at least 3 graphs");
  std::vector<double> xs, ys;
  for (const auto& p : series) {
    if (!(p.lambda1 > 0.0)) throw InsufficientData("esperantist_fit: series contains a disconnected graph");
    if (!(p.vertices > 1.0)) throw InsufficientData("esperantist_fit: need N > 1");
    xs.push_back(std::log(std::log(p.vertices)));
    ys.push_back(std::log(p.lambda1));
  }
  const double nn = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= nn;
  my /= nn;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx <= 0.0) throw InsufficientData("esperantist_fit: all graphs have the same size");
  // Slope of log lambda against log log N is -A; clamp to A >= 0.
  const double slope = std::min(0.0, sxy / sxx);
  const double intercept = my - slope * mx;
  EsperantistFit fit;
  fit.series = series;
  fit.exponent = -slope + 0.0;
  fit.c = std::exp(intercept);
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (intercept + slope * xs[i]);
    rss += e * e;
  }
  fit.residual = std::sqrt(rss);
  fit.min_lambda1 = series.front().lambda1;
  for (const auto& p : series) fit.min_lambda1 = std::min(fit.min_lambda1, p.lambda1);
  return fit;
}

inline constexpr const char* kReportCsvHeader = "graph_id,N,k,lambda1,zero_mult,solver,residual,seconds";

/// One CSV row. Seconds are written as 0 unless `with_timing` is set, so
/// that rows are reproducible byte for byte.
inline std::string to_csv_row(const SpectralReport& r, bool with_timing = false) {
  std::ostringstream os;
  os << r.graph_id << ',' << r.vertices << ',' << r.degree << ',' << std::setprecision(12) << r.lambda1 << ','
     << r.zero_multiplicity << ',' << to_string(r.solver) << ',' << std::setprecision(3) << std::scientific
     << r.residual << ',' << std::fixed << std::setprecision(3) << (with_timing ? r.seconds : 0.0);
  return os.str();
}

}  // namespace thinlab
