// measures.hpp
// Entanglement quantities for the Bell-diagonal family: pure-state
// entanglement, the PPT-assisted distillation bound, the twirl-preimage
// minimum epsilon (phase optimization on the torus), convex envelopes and
// the one-parameter sweep lambda(nu).
//
// All entropies are in bits.

#pragma once

#include "irrev/qcore.hpp"
#include "irrev/symstates.hpp"
#include "irrev/uncertainty.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <span>
#include <thread>
#include <utility>
#include <vector>

namespace irrev {

/// E(phi) = S(tr_A |phi><phi|).
inline double pure_entanglement(const CVector& phi) {
  if (!phi.split()) throw DimensionError("pure_entanglement: ket has no bipartite split");
  if (!phi.is_normalized(kAssertTol)) throw ValidationError("pure_entanglement: ket is not normalized");
  return entanglement_entropy_bits(phi);
}

/// log2 d - S(lambda); negative rounding dust is clamped to 0.
inline double ed_plus(const ProbVector& lambda) {
  const double v = std::log2(static_cast<double>(lambda.dim())) - lambda.entropy_bits();
  return std::max(v, 0.0);
}

struct OptimizerConfig {
  int restarts = 32;
  std::uint64_t seed = 20020101;
  int max_iters = 20000;
  double step_tol = 1e-8;      // simplex size at which a local run stops
  double initial_step = 0.6;   // radians
  int polish_rounds = 3;       // fresh-simplex restarts from the incumbent
  unsigned threads = 1;        // 0: hardware concurrency
};

struct MeasureResult {
  double value = 0.0;
  std::vector<double> optimizer_phases;  // theta_0 == 0
  int restarts_used = 0;
  bool converged = false;
};

namespace detail {

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs body(i) for i in [0, n); each index is written by exactly one worker.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
  threads = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) err = std::current_exception();
        }
      }
    });
  pool.clear();
  if (err) std::rethrow_exception(err);
}

/// Uniform double in [0, 1) from the top 53 bits; stable across libraries.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// S(|dft(c)|^2) for c_l = sqrt(lambda_l) exp(i theta_l), restricted to the
// support of lambda. free_phases holds theta for support[1..].
class PhaseObjective {
 public:
  explicit PhaseObjective(const ProbVector& lambda) : d_(lambda.dim()) {
    for (std::size_t l = 0; l < d_; ++l)
      if (lambda[l] > 0.0) {
        support_.push_back(l);
        amp_.push_back(std::sqrt(lambda[l]));
      }
    const double s = 1.0 / std::sqrt(static_cast<double>(d_));
    table_.resize(d_ * support_.size());
    for (std::size_t k = 0; k < d_; ++k)
      for (std::size_t j = 0; j < support_.size(); ++j)
        table_[k * support_.size() + j] = s * amp_[j] * root_of_unity(d_, static_cast<long long>(k * support_[j]));
    buf_.resize(support_.size());
  }

  std::size_t free_dims() const { return support_.empty() ? 0 : support_.size() - 1; }
  const std::vector<std::size_t>& support() const { return support_; }

  double operator()(std::span<const double> free_phases) {
    const std::size_t m = support_.size();
    buf_[0] = {1.0, 0.0};
    for (std::size_t j = 1; j < m; ++j) buf_[j] = std::polar(1.0, free_phases[j - 1]);
    double s = 0.0;
    for (std::size_t k = 0; k < d_; ++k) {
      cplx acc{};
      const cplx* row = &table_[k * m];
      for (std::size_t j = 0; j < m; ++j) acc += row[j] * buf_[j];
      const double p = std::norm(acc);
      if (p > 0.0) s -= p * std::log2(p);
    }
    return s;
  }

  std::vector<double> full_phases(std::span<const double> free_phases) const {
    std::vector<double> th(d_, 0.0);
    for (std::size_t j = 1; j < support_.size(); ++j) {
      double t = std::fmod(free_phases[j - 1], 2.0 * std::numbers::pi);
      if (t < 0) t += 2.0 * std::numbers::pi;
      th[support_[j]] = t;
    }
    return th;
  }

 private:
  std::size_t d_;
  std::vector<std::size_t> support_;
  std::vector<double> amp_;
  std::vector<cplx> table_;
  std::vector<cplx> buf_;
};

struct LocalResult {
  std::vector<double> x;
  double value = std::numeric_limits<double>::infinity();
  bool converged = false;
};

inline double gsl_trampoline(const gsl_vector* v, void* params) {
  auto* obj = static_cast<PhaseObjective*>(params);
  return (*obj)(std::span<const double>(v->data, v->size));
}

struct GslMinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* p) const { gsl_multimin_fminimizer_free(p); }
};
struct GslVectorDeleter {
  void operator()(gsl_vector* p) const { gsl_vector_free(p); }
};

/// Nelder-Mead (GSL nmsimplex2) from `start`, re-seeded with a fresh simplex
/// around the incumbent for a few rounds to escape collapsed simplices.
inline LocalResult nelder_mead(PhaseObjective& obj, std::vector<double> start, const OptimizerConfig& cfg) {
  static const bool handler_off = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)handler_off;

  const std::size_t n = start.size();
  LocalResult best;
  best.x = start;
  best.value = obj(best.x);
  if (n == 0) {
    best.converged = true;
    return best;
  }

  gsl_multimin_function fn{&gsl_trampoline, n, &obj};
  std::unique_ptr<gsl_multimin_fminimizer, GslMinimizerDeleter> s(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));
  std::unique_ptr<gsl_vector, GslVectorDeleter> x(gsl_vector_alloc(n));
  std::unique_ptr<gsl_vector, GslVectorDeleter> step(gsl_vector_alloc(n));

  double step_size = cfg.initial_step;
  for (int round = 0; round <= cfg.polish_rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x.get(), i, best.x[i]);
    gsl_vector_set_all(step.get(), step_size);
    gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), step.get());
    // Near a smooth minimum the simplex can stall around sqrt(machine eps)
    // in theta; a run whose best value has not moved for a while is done.
    bool conv = false;
    double last_best = std::numeric_limits<double>::infinity();
    int stale = 0;
    const int stale_limit = 20 * static_cast<int>(n + 1);
    for (int it = 0; it < cfg.max_iters; ++it) {
      if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
      const double size = gsl_multimin_fminimizer_size(s.get());
      if (gsl_multimin_test_size(size, cfg.step_tol) == GSL_SUCCESS) {
        conv = true;
        break;
      }
      const double fx = gsl_multimin_fminimizer_minimum(s.get());
      stale = fx < last_best ? 0 : stale + 1;
      last_best = std::min(last_best, fx);
      if (stale > stale_limit && size < 1e-5) {
        conv = true;
        break;
      }
    }
    const double fx = gsl_multimin_fminimizer_minimum(s.get());
    const bool improved = fx < best.value - 1e-15;
    if (fx <= best.value) {
      best.value = fx;
      const gsl_vector* xm = gsl_multimin_fminimizer_x(s.get());
      best.x.assign(xm->data, xm->data + n);
    }
    best.converged = conv;
    if (round > 0 && !improved) break;
    step_size = std::max(cfg.initial_step * 0.1, 1e-3);
  }
  return best;
}

}  // namespace detail

/// S(|dft(c)|^2) with c_l = sqrt(lambda_l) exp(i theta_l), theta of length d.
inline double epsilon_objective(const ProbVector& lambda, std::span<const double> theta) {
  if (theta.size() != lambda.dim()) throw DimensionError("epsilon_objective: phase vector length != d");
  detail::PhaseObjective obj(lambda);
  std::vector<double> free;
  for (std::size_t j = 1; j < obj.support().size(); ++j)
    free.push_back(theta[obj.support()[j]] - theta[obj.support()[0]]);
  return obj(free);
}

/// Minimum of S(|dft(c)|^2) over the phases of c with |c_l|^2 = lambda_l.
/// Restart 0 starts at all-zero phases; further starts are uniform on the
/// torus, drawn from `seed` in order. The reduction is an ordered min, so
/// the result does not depend on thread scheduling.
inline MeasureResult epsilon_min(const ProbVector& lambda, const OptimizerConfig& cfg = {}) {
  if (cfg.restarts < 1) throw ValidationError("epsilon_min: restarts must be >= 1");
  detail::PhaseObjective proto(lambda);
  const std::size_t n = proto.free_dims();

  MeasureResult out;
  if (n == 0) {
    std::vector<double> none;
    out.value = proto(none);
    out.optimizer_phases.assign(lambda.dim(), 0.0);
    out.restarts_used = 1;
    out.converged = true;
    return out;
  }

  std::vector<std::vector<double>> starts(static_cast<std::size_t>(cfg.restarts), std::vector<double>(n, 0.0));
  std::mt19937_64 rng(cfg.seed);
  for (std::size_t r = 1; r < starts.size(); ++r)
    for (auto& t : starts[r]) t = 2.0 * std::numbers::pi * detail::unit_uniform(rng);

  std::vector<detail::LocalResult> results(starts.size());
  detail::parallel_for(starts.size(), cfg.threads, [&](std::size_t r) {
    detail::PhaseObjective obj(lambda);
    results[r] = detail::nelder_mead(obj, starts[r], cfg);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r)
    if (results[r].value < results[best].value) best = r;

  out.value = results[best].value;
  out.optimizer_phases = proto.full_phases(results[best].x);
  out.restarts_used = cfg.restarts;
  out.converged = results[best].converged;
  return out;
}

/// Exhaustive minimum over theta in {2 pi k / K}^{d-1}, theta_0 = 0.
/// Evaluates the transform term by term; shares no code with epsilon_min.
inline double epsilon_bruteforce(const ProbVector& lambda, std::size_t grid) {
  const std::size_t d = lambda.dim();
  if (d > 5) throw DimensionError("epsilon_bruteforce: d > 5 is too large for an exhaustive grid");
  if (grid == 0) throw ValidationError("epsilon_bruteforce: grid size must be positive");

  std::vector<std::size_t> idx(d, 0);
  std::vector<cplx> c(d);
  double best = std::numeric_limits<double>::infinity();
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  while (true) {
    for (std::size_t l = 0; l < d; ++l)
      c[l] = std::sqrt(lambda[l]) *
             std::exp(cplx(0.0, 2.0 * std::numbers::pi * static_cast<double>(idx[l]) / static_cast<double>(grid)));
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      cplx acc{};
      for (std::size_t l = 0; l < d; ++l)
        acc += std::exp(cplx(0.0, 2.0 * std::numbers::pi * static_cast<double>(k * l) / static_cast<double>(d))) * c[l];
      const double p = std::norm(acc * inv_sqrt_d);
      if (p > 0.0) s -= p * std::log2(p);
    }
    best = std::min(best, s);

    std::size_t pos = 1;
    while (pos < d && ++idx[pos] == grid) idx[pos++] = 0;
    if (pos >= d) break;
  }
  return best;
}

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Lower convex envelope of sampled (x, y), evaluated back at every x.
/// Monotone-chain lower hull plus linear interpolation between vertices.
inline std::vector<Point2> convex_envelope_1d(std::span<const Point2> pts) {
  if (pts.size() < 2) throw ValidationError("convex_envelope_1d: need at least 2 points");
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (!(pts[i].x > pts[i - 1].x)) throw ValidationError("convex_envelope_1d: x must be strictly increasing");

  std::vector<std::size_t> hull;
  auto cross = [&](std::size_t o, std::size_t a, std::size_t b) {
    return (pts[a].x - pts[o].x) * (pts[b].y - pts[o].y) - (pts[a].y - pts[o].y) * (pts[b].x - pts[o].x);
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), i) <= 0.0) hull.pop_back();
    hull.push_back(i);
  }

  // The first and last samples are always hull vertices.
  std::vector<Point2> out(pts.size());
  std::size_t seg = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (hull[seg + 1] < i) ++seg;
    if (i == hull[seg] || i == hull[seg + 1]) {
      out[i] = pts[i];
      continue;
    }
    const auto& p = pts[hull[seg]];
    const auto& q = pts[hull[seg + 1]];
    const double t = (pts[i].x - p.x) / (q.x - p.x);
    out[i] = {pts[i].x, std::min(pts[i].y, p.y + t * (q.y - p.y))};
  }
  return out;
}

/// lambda(nu) = (nu + (1-nu)/d, (1-nu)/d, ..., (1-nu)/d).
inline ProbVector lambda_nu(double nu, std::size_t d) {
  if (!(nu >= 0.0 && nu <= 1.0)) throw ValidationError("lambda_nu: nu outside [0, 1]");
  if (d == 0) throw ValidationError("lambda_nu: d must be positive");
  const double rest = (1.0 - nu) / static_cast<double>(d);
  std::vector<double> p(d, rest);
  p[0] = nu + rest;
  return ProbVector(std::move(p));
}

struct GapPoint {
  double nu = 0.0;
  double f = 0.0;
  double ed_plus = 0.0;
  double epsilon = 0.0;
  double co_epsilon = 0.0;
  double gap = 0.0;           // co_epsilon - ed_plus
  double relative_gap = 0.0;  // gap / co_epsilon, 0 when co_epsilon vanishes
};

/// co_epsilon values below this are treated as zero when forming ratios.
inline constexpr double kZeroEntanglement = 1e-12;

/// Sweeps lambda(nu) over `nu_grid`. co_epsilon is the lower convex envelope
/// of epsilon along the sampled nu-slice. The gap is taken against E_D^+, so
/// it is a lower bound on the LOCC preparation/distillation gap.
inline std::vector<GapPoint> gap_sweep(std::size_t d, std::span<const double> nu_grid, const OptimizerConfig& cfg = {}) {
  if (d == 0) throw ValidationError("gap_sweep: d must be positive");
  if (nu_grid.empty()) throw ValidationError("gap_sweep: empty grid");
  for (std::size_t i = 0; i < nu_grid.size(); ++i) {
    if (!(nu_grid[i] >= 0.0 && nu_grid[i] <= 1.0)) throw ValidationError("gap_sweep: nu outside [0, 1]");
    if (i > 0 && !(nu_grid[i] > nu_grid[i - 1])) throw ValidationError("gap_sweep: grid must be strictly increasing");
  }

  std::vector<GapPoint> pts(nu_grid.size());
  OptimizerConfig inner = cfg;
  inner.threads = 1;
  detail::parallel_for(pts.size(), cfg.threads, [&](std::size_t i) {
    OptimizerConfig local = inner;
    local.seed = cfg.seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(i);
    const auto lam = lambda_nu(nu_grid[i], d);
    auto& g = pts[i];
    g.nu = nu_grid[i];
    g.f = nu_grid[i] + (1.0 - nu_grid[i]) / static_cast<double>(d);
    g.ed_plus = ed_plus(lam);
    g.epsilon = epsilon_min(lam, local).value;
  });

  if (pts.size() == 1) {
    pts[0].co_epsilon = pts[0].epsilon;
  } else {
    std::vector<Point2> raw(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) raw[i] = {pts[i].nu, pts[i].epsilon};
    const auto env = convex_envelope_1d(raw);
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i].co_epsilon = env[i].y;
  }
  for (auto& g : pts) {
    g.gap = g.co_epsilon - g.ed_plus;
    g.relative_gap = g.co_epsilon > kZeroEntanglement ? g.gap / g.co_epsilon : 0.0;
  }
  return pts;
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i)
    out[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

// ---------------------------------------------------------------------------
// The one-parameter pure family sqrt(nu) Psi_0 + sqrt(1-nu) |00>

struct PhiNuReport {
  double nu = 0.0;
  std::size_t d = 0;
  double raw_norm = 0.0;          // norm before normalizing
  CVector phi;                    // normalized
  std::vector<double> twirl_lambda;   // Column-convention diagonal of twirl_G(|phi><phi|)
  std::vector<double> target_lambda;  // lambda(nu)
  double lambda_discrepancy = 0.0;    // max |twirl_lambda - target_lambda|
  double entanglement = 0.0;          // E(phi)
  double ed_plus_target = 0.0;        // E_D^+(lambda(nu))
  double isotropic_fidelity = 0.0;    // nu + (1-nu)/d
};

/// The superposition is not normalized for d > 1 (<Psi_0|00> = d^{-1/2}), so
/// it is normalized here and its actual twirl image is reported next to
/// lambda(nu) rather than assumed equal to it.
inline PhiNuReport phi_nu(double nu, std::size_t d) {
  if (!(nu >= 0.0 && nu <= 1.0)) throw ValidationError("phi_nu: nu outside [0, 1]");
  if (d == 0) throw ValidationError("phi_nu: d must be positive");
  PhiNuReport r;
  r.nu = nu;
  r.d = d;
  Eigen::VectorXcd v = std::sqrt(nu) * bell_state(WeylIndex(0, 0, d)).data() +
                       std::sqrt(1.0 - nu) * product_ket(0, 0, {d, d}).data();
  r.raw_norm = v.norm();
  r.phi = CVector(v / r.raw_norm, BipartiteDims{d, d});

  const auto tw = twirl_G(CMatrix::projector(r.phi));
  const auto diag = bell_diagonal(tw);
  r.twirl_lambda = diag[0];
  r.target_lambda = lambda_nu(nu, d).vec();
  for (std::size_t l = 0; l < d; ++l)
    r.lambda_discrepancy = std::max(r.lambda_discrepancy, std::abs(r.twirl_lambda[l] - r.target_lambda[l]));
  r.entanglement = pure_entanglement(r.phi);
  r.ed_plus_target = ed_plus(lambda_nu(nu, d));
  r.isotropic_fidelity = nu + (1.0 - nu) / static_cast<double>(d);
  return r;
}

}  // namespace irrev
