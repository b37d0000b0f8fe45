#include "ris/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ris/bfgs.hpp"
#include "ris/error.hpp"
#include "ris/kernels.hpp"
#include "ris/rng.hpp"
#include "ris/scaling.hpp"

namespace ris::opt {

void Objective::validate() const {
  realization.validate();
  if (realization.n_i() != topology.n_i()) {
    throw DomainError("channel length does not match the topology");
  }
  if (!(p_t >= 0.0) || !std::isfinite(p_t)) throw DomainError("transmit power must be finite and >= 0");
}

void SolverConfig::validate() const {
  if (!(gradient_tolerance > 0.0) || !(step_tolerance > 0.0) || !(bound_tolerance >= 0.0)) {
    throw DomainError("solver tolerances must be positive");
  }
  if (!(reactance_cap > 0.0)) throw DomainError("reactance cap must be positive");
  if (max_iterations == 0) throw DomainError("max_iterations must be positive");
}

double align_direct_phase(cplx h_rt, cplx cascade, double p_t) {
  const double a = std::abs(h_rt) + std::abs(cascade);
  return p_t * a * a;
}

namespace {

constexpr cplx kJ{0.0, 1.0};

// c(P) = sum_g h_g Theta_g(P_g) g_g with Theta_g = I - 2 (j P_g + I)^-1, P in
// units of Z0. Block g's free entries are the packed upper triangle of P_g.
class BlockModel {
 public:
  BlockModel(std::span<const cplx> h, std::span<const cplx> g, std::size_t n_g)
      : h_(h.begin(), h.end()),
        g_(g.begin(), g.end()),
        n_g_(n_g),
        groups_(h.size() / n_g),
        block_params_(n_g * (n_g + 1) / 2),
        aug_(n_g * (n_g + 2)),
        u_(h.size()),
        v_(h.size()) {
    base_ = kernels::cdotu(h_, g_);
  }

  std::size_t dim() const noexcept { return groups_ * block_params_; }
  std::size_t n_g() const noexcept { return n_g_; }
  std::size_t groups() const noexcept { return groups_; }

  // Cascade c; when grad is non-empty it receives d|c|^2 / dP.
  cplx evaluate(std::span<const double> p, std::span<double> grad) {
    cplx c = base_;
    for (std::size_t b = 0; b < groups_; ++b) {
      solve_block(p, b);
      c -= 2.0 * kernels::cdotu(std::span<const cplx>(h_).subspan(b * n_g_, n_g_),
                                std::span<const cplx>(v_).subspan(b * n_g_, n_g_));
    }
    if (grad.empty()) return c;
    // dc/dP_kl = 2j (u_k v_l + u_l v_k), diagonal 2j u_k v_k;
    // d|c|^2 = 2 Re(conj(c) dc).
    const cplx w = 2.0 * std::conj(c) * 2.0 * kJ;
    for (std::size_t b = 0; b < groups_; ++b) {
      const cplx* u = u_.data() + b * n_g_;
      const cplx* v = v_.data() + b * n_g_;
      double* out = grad.data() + b * block_params_;
      std::size_t idx = 0;
      for (std::size_t k = 0; k < n_g_; ++k) {
        out[idx++] = (w * u[k] * v[k]).real();
        for (std::size_t l = k + 1; l < n_g_; ++l) out[idx++] = (w * (u[k] * v[l] + u[l] * v[k])).real();
      }
    }
    return c;
  }

  ComplexMatrix block_theta(std::span<const double> p, std::size_t b) const {
    ComplexMatrix a = ComplexMatrix::identity(n_g_);
    const double* pb = p.data() + b * block_params_;
    for (std::size_t k = 0; k < n_g_; ++k)
      for (std::size_t l = 0; l < n_g_; ++l) a(k, l) += kJ * pb[arch::packed_index(n_g_, k, l)];
    const ComplexMatrix eye = ComplexMatrix::identity(n_g_);
    return eye - LuDecomposition(a).solve(2.0 * eye);
  }

  cplx block_cascade(const ComplexMatrix& theta_b, std::size_t b) const {
    cplx c{};
    for (std::size_t k = 0; k < n_g_; ++k) {
      c += h_[b * n_g_ + k] *
           kernels::cdotu(theta_b.row_span(k), std::span<const cplx>(g_).subspan(b * n_g_, n_g_));
    }
    return c;
  }

 private:
  // Gaussian elimination on [A | g_b | h_b^T], A = j P_b + I symmetric, so
  // v = A^-1 g_b and u = A^-1 h_b^T = A^-T h_b^T.
  void solve_block(std::span<const double> p, std::size_t b) {
    const std::size_t n = n_g_, w = n_g_ + 2;
    const double* pb = p.data() + b * block_params_;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t l = k; l < n; ++l) {
        const cplx a = kJ * pb[arch::packed_index(n, k, l)];
        aug_[k * w + l] = a;
        aug_[l * w + k] = a;
      }
      aug_[k * w + k] += 1.0;
      aug_[k * w + n] = g_[b * n + k];
      aug_[k * w + n + 1] = h_[b * n + k];
    }
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t piv = k;
      double best = std::norm(aug_[k * w + k]);
      for (std::size_t i = k + 1; i < n; ++i) {
        const double m = std::norm(aug_[i * w + k]);
        if (m > best) {
          best = m;
          piv = i;
        }
      }
      if (piv != k) std::swap_ranges(aug_.begin() + k * w, aug_.begin() + (k + 1) * w, aug_.begin() + piv * w);
      const cplx inv = 1.0 / aug_[k * w + k];
      const std::size_t tail = w - k - 1;
      std::span<const cplx> pivot_row(aug_.data() + k * w + k + 1, tail);
      for (std::size_t i = k + 1; i < n; ++i) {
        const cplx f = aug_[i * w + k] * inv;
        if (f != cplx{}) kernels::caxpy(-f, pivot_row, std::span<cplx>(aug_.data() + i * w + k + 1, tail));
      }
    }
    cplx* v = v_.data() + b * n;
    cplx* u = u_.data() + b * n;
    for (std::size_t i = n; i-- > 0;) {
      cplx sv = aug_[i * w + n], su = aug_[i * w + n + 1];
      for (std::size_t j = i + 1; j < n; ++j) {
        sv -= aug_[i * w + j] * v[j];
        su -= aug_[i * w + j] * u[j];
      }
      const cplx inv = 1.0 / aug_[i * w + i];
      v[i] = sv * inv;
      u[i] = su * inv;
    }
  }

  std::vector<cplx> h_, g_;
  std::size_t n_g_, groups_, block_params_;
  cplx base_{};
  std::vector<cplx> aug_, u_, v_;
};

std::vector<cplx> normalized(std::span<const cplx> x) {
  const double nrm = std::sqrt(kernels::cnorm2(x));
  std::vector<cplx> out(x.begin(), x.end());
  for (cplx& v : out) v /= nrm;
  return out;
}

double circular_distance_to_zero(double theta) {
  const double w = arch::wrap_angle(theta);
  return std::min(w, 2.0 * std::numbers::pi - w);
}

// Closed-form single-connected phases plus a common offset that keeps every
// phase away from 0 (Theta = +1 needs infinite reactance); x = cot(theta/2).
std::vector<double> single_connected_start(std::span<const cplx> h, std::span<const cplx> g) {
  const auto closed = scaling::single_connected_optimum(h, g);
  const auto th = closed.theta.thetas();
  double best_phi = 0.0, best_margin = -1.0;
  constexpr int kCandidates = 64;
  for (int c = 0; c < kCandidates; ++c) {
    const double phi = 2.0 * std::numbers::pi * c / kCandidates;
    double margin = std::numbers::pi;
    for (double t : th) margin = std::min(margin, circular_distance_to_zero(t + phi));
    if (margin > best_margin) {
      best_margin = margin;
      best_phi = phi;
    }
  }
  std::vector<double> x(th.size());
  for (std::size_t n = 0; n < th.size(); ++n) x[n] = 1.0 / std::tan(0.5 * (th[n] + best_phi));
  return x;
}

std::vector<double> pack_diagonal(std::span<const double> x, std::size_t n_g, std::size_t dim) {
  std::vector<double> p(dim, 0.0);
  const std::size_t bp = n_g * (n_g + 1) / 2;
  for (std::size_t n = 0; n < x.size(); ++n) {
    p[(n / n_g) * bp + arch::packed_index(n_g, n % n_g, n % n_g)] = x[n];
  }
  return p;
}

// Rotate every block so its cascade term shares the phase of the total
// (which can only increase |c|), with a common extra phase chosen to keep
// the reactances small, and map back through the inverse Cayley map.
std::vector<double> reanchor(BlockModel& model, std::span<const double> p) {
  const std::size_t ng = model.n_g(), bp = ng * (ng + 1) / 2;
  std::vector<ComplexMatrix> thetas;
  std::vector<cplx> cs;
  cplx total{};
  for (std::size_t b = 0; b < model.groups(); ++b) {
    thetas.push_back(model.block_theta(p, b));
    cs.push_back(model.block_cascade(thetas.back(), b));
    total += cs.back();
  }
  const double psi = std::arg(total);
  const net::ReferenceImpedance unit(1.0);
  std::vector<double> best(p.begin(), p.end());
  double best_max = std::numeric_limits<double>::infinity();
  constexpr int kCandidates = 16;
  for (int c = 0; c < kCandidates; ++c) {
    const double phi = 2.0 * std::numbers::pi * c / kCandidates;
    std::vector<double> cand(p.size());
    double max_abs = 0.0;
    bool ok = true;
    for (std::size_t b = 0; b < thetas.size() && ok; ++b) {
      const cplx rot = std::polar(1.0, psi - arch::phase_of(cs[b]) + phi);
      try {
        const ComplexMatrix z = net::s_to_z(rot * thetas[b], unit);
        for (std::size_t k = 0; k < ng; ++k) {
          for (std::size_t l = k; l < ng; ++l) {
            const double x = 0.5 * (z(k, l) + z(l, k)).imag();
            cand[b * bp + arch::packed_index(ng, k, l)] = x;
            max_abs = std::max(max_abs, std::abs(x));
          }
        }
      } catch (const DomainError&) {
        ok = false;
      }
    }
    if (ok && max_abs < best_max) {
      best_max = max_abs;
      best = std::move(cand);
    }
  }
  return best;
}

std::vector<double> central_difference(BlockModel& model, std::span<const double> p) {
  std::vector<double> x(p.begin(), p.end()), grad(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(p[i]));
    x[i] = p[i] + h;
    const double fp = std::norm(model.evaluate(x, {}));
    x[i] = p[i] - h;
    const double fm = std::norm(model.evaluate(x, {}));
    x[i] = p[i];
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

// Analytic gradient against central differences on a spread of coordinates.
bool gradient_self_check(BlockModel& model, std::span<const double> p) {
  std::vector<double> grad(p.size());
  const double f = std::norm(model.evaluate(p, grad));
  double scale = 1e-8 * std::max(f, 1e-12);
  for (double g : grad) scale = std::max(scale, std::abs(g));
  std::vector<double> x(p.begin(), p.end());
  const std::size_t checks = std::min<std::size_t>(p.size(), 8);
  for (std::size_t c = 0; c < checks; ++c) {
    const std::size_t i = c * p.size() / checks;
    const double h = 1e-5 * std::max(1.0, std::abs(p[i]));
    x[i] = p[i] + h;
    const double fp = std::norm(model.evaluate(x, {}));
    x[i] = p[i] - h;
    const double fm = std::norm(model.evaluate(x, {}));
    x[i] = p[i];
    if (std::abs((fp - fm) / (2.0 * h) - grad[i]) > 1e-4 * scale) return false;
  }
  return true;
}

struct StartOutcome {
  std::vector<double> p;
  double f = 0.0;  // normalized |c|^2
  std::size_t iterations = 0;
  bool converged = false;
  bool capped = false;
};

class GroupSolver {
 public:
  GroupSolver(BlockModel& model, const SolverConfig& cfg, double bound, double z0,
              const IterateTrace& trace, const arch::Topology& topo, double raw_scale)
      : model_(model), cfg_(cfg), bound_(bound), z0_(z0), trace_(trace), topo_(topo), raw_scale_(raw_scale) {}

  bool finite_difference = false;

  double gap(double f) const { return bound_ > 0.0 ? (bound_ - f) / bound_ : 0.0; }

  StartOutcome run(std::vector<double> p) {
    BfgsOptions opt;
    opt.max_iterations = cfg_.max_iterations;
    opt.gradient_tolerance = cfg_.gradient_tolerance;
    opt.step_tolerance = cfg_.step_tolerance;
    opt.bound = cfg_.reactance_cap / z0_;

    const ObjectiveFn fn = [this](std::span<const double> x, std::span<double> g) {
      if (finite_difference) {
        const auto fd = central_difference(model_, x);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] = -fd[i];
        return -std::norm(model_.evaluate(x, {}));
      }
      const double f = std::norm(model_.evaluate(x, g));
      for (double& v : g) v = -v;
      return -f;
    };
    IterateCallback cb;
    if (trace_) {
      cb = [this](std::size_t, std::span<const double> x, double f) {
        std::vector<double> ohms(x.begin(), x.end());
        for (double& v : ohms) v *= z0_;
        trace_(arch::ReactanceParams(topo_, std::move(ohms)), -f * raw_scale_);
      };
    }

    StartOutcome out;
    for (std::size_t round = 0;; ++round) {
      const BfgsResult r = bfgs_minimize(fn, std::move(p), opt, cb);
      out.iterations += r.iterations;
      out.capped = out.capped || r.hit_bound;
      out.converged = r.converged();
      out.p = r.x;
      out.f = -r.f;
      if (gap(out.f) <= cfg_.bound_tolerance || round >= cfg_.max_reanchors) break;
      p = reanchor(model_, out.p);
      const double f_new = std::norm(model_.evaluate(p, {}));
      // No gain from re-aligning: the start has settled.
      if (!(f_new > out.f * (1.0 + 1e-12))) break;
    }
    out.converged = out.converged || gap(out.f) <= cfg_.bound_tolerance;
    return out;
  }

 private:
  BlockModel& model_;
  const SolverConfig& cfg_;
  double bound_;
  double z0_;
  const IterateTrace& trace_;
  const arch::Topology& topo_;
  double raw_scale_;
};

cplx cascade_of(const chan::ChannelRealization& real, const ComplexMatrix& theta) {
  chan::ChannelRealization no_direct = real;
  no_direct.h_rt = 0.0;
  return chan::assemble_simplified_channel(no_direct, theta);
}

void finish(SolveResult& res, const Objective& obj, cplx cascade, double cascade_bound) {
  const cplx h_rt = obj.include_direct ? obj.realization.h_rt : cplx{};
  res.cascade_power = obj.p_t * std::norm(cascade);
  res.power = align_direct_phase(h_rt, cascade, obj.p_t);
  const double root = std::sqrt(cascade_bound);
  res.bound = obj.p_t * (std::abs(h_rt) + root) * (std::abs(h_rt) + root);
  res.gap = res.bound > 0.0 ? (res.bound - res.power) / res.bound : 0.0;
  if (obj.include_direct && h_rt != cplx{} && cascade != cplx{}) {
    // Common phase rotation keeps Theta symmetric unitary and aligns c with h_rt.
    res.theta *= std::polar(1.0, std::arg(h_rt) - std::arg(cascade));
  }
}

}  // namespace

SolveResult solve_single(const Objective& obj) {
  obj.validate();
  if (obj.topology.kind() != arch::TopologyKind::Single) {
    throw DomainError("solve_single needs a single-connected topology");
  }
  const auto& real = obj.realization;
  const auto closed = scaling::single_connected_optimum(real.h_ri, real.h_it);
  SolveResult res;
  res.topology = obj.topology;
  res.theta = arch::theta_from_phases(closed.theta);
  res.iterations = 0;
  res.converged = true;
  const cplx cascade{std::sqrt(closed.power), 0.0};
  finish(res, obj, cascade, closed.power);
  res.gap = 0.0;
  return res;
}

SolveResult solve_group(const Objective& obj, const SolverConfig& cfg, const IterateTrace& trace) {
  obj.validate();
  cfg.validate();
  const arch::Topology& topo = obj.topology;
  const auto& real = obj.realization;
  const double z0 = obj.z0.ohms();

  SolveResult res;
  res.topology = topo;
  res.seed = cfg.seed;

  const double raw_bound = scaling::topology_bound(real.h_ri, real.h_it, topo);
  const double nh = kernels::cnorm2(real.h_ri), ng2 = kernels::cnorm2(real.h_it);
  const std::size_t ng = topo.n_g();

  if (nh == 0.0 || ng2 == 0.0) {
    // Zero channel: every Theta gives c = 0.
    arch::ReactanceParams x(topo);
    res.theta = arch::theta_from_reactance(x, obj.z0);
    res.reactance = x;
    res.converged = true;
    finish(res, obj, cplx{}, 0.0);
    return res;
  }

  const auto h = normalized(real.h_ri);
  const auto g = normalized(real.h_it);
  BlockModel model(h, g, ng);
  const double bound = scaling::topology_bound(h, g, topo);
  GroupSolver solver(model, cfg, bound, z0, trace, topo, nh * ng2);

  const auto x_diag = single_connected_start(h, g);
  std::vector<double> p0 = pack_diagonal(x_diag, ng, model.dim());
  solver.finite_difference = !gradient_self_check(model, p0);
  res.finite_difference_gradient = solver.finite_difference;

  StartOutcome best = solver.run(p0);
  std::size_t iterations = best.iterations;
  RandomStream rng(cfg.seed, 0x6f7074ull);
  for (std::size_t r = 0; r < cfg.restarts && solver.gap(best.f) > cfg.bound_tolerance; ++r) {
    std::vector<double> p = p0;
    const std::size_t bp = topo.block_params();
    for (std::size_t b = 0; b < topo.groups(); ++b)
      for (std::size_t k = 0; k < ng; ++k)
        for (std::size_t l = k + 1; l < ng; ++l) p[b * bp + arch::packed_index(ng, k, l)] = rng.uniform(-1.0, 1.0);
    StartOutcome s = solver.run(std::move(p));
    iterations += s.iterations;
    if (s.f > best.f) best = std::move(s);
  }

  std::vector<double> ohms = best.p;
  for (double& v : ohms) v *= z0;
  arch::ReactanceParams x(topo, std::move(ohms));
  res.theta = arch::theta_from_reactance(x, obj.z0);
  res.iterations = iterations;
  res.converged = best.converged;
  res.capped = best.capped;
  const cplx cascade = cascade_of(real, res.theta);
  finish(res, obj, cascade, raw_bound);
  if (obj.include_direct && real.h_rt != cplx{}) {
    try {
      res.reactance = arch::reactance_from_theta(res.theta, topo, obj.z0);
    } catch (const DomainError&) {
      res.reactance.reset();  // rotated Theta has an eigenvalue at +1
    }
  } else {
    res.reactance = std::move(x);
  }
  return res;
}

SolveResult solve(const Objective& obj, const SolverConfig& cfg) {
  if (obj.topology.kind() == arch::TopologyKind::Single) {
    SolveResult r = solve_single(obj);
    r.seed = cfg.seed;
    return r;
  }
  return solve_group(obj, cfg);
}

namespace {

void require_matching(const Objective& obj, const arch::ReactanceParams& x) {
  obj.validate();
  if (!(x.topology() == obj.topology)) throw DomainError("reactance topology does not match objective");
}

}  // namespace

double objective_value(const Objective& obj, const arch::ReactanceParams& x) {
  require_matching(obj, x);
  return std::norm(cascade_of(obj.realization, arch::theta_from_reactance(x, obj.z0)));
}

std::vector<double> objective_gradient(const Objective& obj, const arch::ReactanceParams& x) {
  require_matching(obj, x);
  const double z0 = obj.z0.ohms();
  BlockModel model(obj.realization.h_ri, obj.realization.h_it, obj.topology.n_g());
  std::vector<double> p(x.values().begin(), x.values().end());
  for (double& v : p) v /= z0;
  std::vector<double> grad(p.size());
  model.evaluate(p, grad);
  for (double& v : grad) v /= z0;
  return grad;
}

}  // namespace ris::opt
