#include "alab/dynamics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <stdexcept>

namespace alab {
namespace {

Eigen::Index ix(std::size_t v) { return static_cast<Eigen::Index>(v); }

struct Coefficient {
  std::size_t g, a, b;
  Expr value;
};

// Precomputed symbolic data for evaluating the vector field quickly.
class MechField {
 public:
  explicit MechField(const MechSystem& S) : S_(S) {
    const std::size_t l = S.algebroid().ell();
    const Connection& c = S.connection();
    for (std::size_t g = 0; g < l; ++g) {
      for (std::size_t a = 0; a < l; ++a) {
        for (std::size_t b = 0; b < l; ++b) {
          if (!c(g, a, b).is_zero()) gamma_.push_back({g, a, b, c(g, a, b)});
        }
      }
    }
  }

  // Returns (x', y') at state (x, y) under control u.
  std::pair<Vector, Vector> operator()(const Vector& x, const Vector& y,
                                       const Vector& u) const {
    PointEvaluator ev(x);
    const LieAlgebroid& A = S_.algebroid();
    Vector xd = A.anchor().eval(ev) * y;
    Vector yd = -S_.potential_gradient().eval(ev);
    for (const Coefficient& k : gamma_) {
      yd(ix(k.g)) -= ev(k.value) * y(ix(k.a)) * y(ix(k.b));
    }
    const auto& inputs = S_.effective_inputs();
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      if (u(ix(i)) != 0.0) yd += u(ix(i)) * inputs[i].eval(ev);
    }
    return {xd, yd};
  }

 private:
  const MechSystem& S_;
  std::vector<Coefficient> gamma_;
};

bool finite_within(const Vector& v, double bound) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i)) || std::abs(v(i)) > bound) return false;
  }
  return true;
}

// Steps per piece so that each step is at most h.
std::size_t steps_for(double duration, double h) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(duration / h - 1e-9)));
}

template <class Step>
Trajectory run(const ControlSchedule& sched, Vector x, Vector y, double h,
               const IntegrateOptions& opt, Step&& step) {
  if (!(h > 0.0)) throw std::invalid_argument("step size must be positive");
  Trajectory tr;
  tr.schedule = sched;
  double t = 0.0;
  Vector zero_u = Vector::Zero(ix(sched.inputs()));
  tr.t.push_back(t);
  tr.x.push_back(x);
  tr.y.push_back(y);
  for (const ControlPiece& piece : sched.pieces()) {
    if (tr.size() > 1) tr.switches.push_back(tr.size() - 1);
    const std::size_t n = steps_for(piece.duration, h);
    const double dt = piece.duration / static_cast<double>(n);
    for (std::size_t s = 0; s < n; ++s) {
      tr.u.push_back(piece.values);
      try {
        step(x, y, piece.values, dt);
      } catch (const std::exception&) {
        tr.blew_up = true;
      }
      if (tr.blew_up || !finite_within(x, opt.blowup) || !finite_within(y, opt.blowup)) {
        tr.blew_up = true;
        return tr;
      }
      t += dt;
      tr.t.push_back(t);
      tr.x.push_back(x);
      tr.y.push_back(y);
    }
  }
  tr.u.push_back(sched.pieces().empty() ? zero_u : sched.pieces().back().values);
  return tr;
}

// Interior indices whose five-point stencil stays within one schedule piece.
std::vector<std::size_t> smooth_interior(const Trajectory& tr) {
  std::vector<std::size_t> out;
  if (tr.size() < 5) return out;
  for (std::size_t k = 2; k + 2 < tr.size(); ++k) {
    bool clear = std::none_of(tr.switches.begin(), tr.switches.end(),
                              [k](std::size_t s) { return s + 2 > k && s < k + 2; });
    if (clear) out.push_back(k);
  }
  return out;
}

template <class F>
Vector stencil(const Trajectory& tr, std::size_t k, F&& f) {
  const double dt = tr.t[k + 1] - tr.t[k];
  return (f(k - 2) - 8.0 * f(k - 1) + 8.0 * f(k + 1) - f(k + 2)) / (12.0 * dt);
}

}  // namespace

ControlSchedule::ControlSchedule(std::size_t inputs, std::vector<ControlPiece> pieces)
    : inputs_(inputs), pieces_(std::move(pieces)) {
  for (const ControlPiece& p : pieces_) {
    if (!(p.duration > 0.0)) throw std::invalid_argument("piece durations must be positive");
    if (static_cast<std::size_t>(p.values.size()) != inputs_) {
      throw std::invalid_argument("control piece has wrong number of values");
    }
  }
}

ControlSchedule ControlSchedule::zero(std::size_t inputs, double horizon) {
  std::vector<ControlPiece> pieces;
  if (horizon > 0.0) pieces.push_back({horizon, Vector::Zero(ix(inputs))});
  return ControlSchedule(inputs, std::move(pieces));
}

double ControlSchedule::horizon() const {
  double t = 0.0;
  for (const ControlPiece& p : pieces_) t += p.duration;
  return t;
}

Trajectory integrate(const MechSystem& S, const Point& x0, const Vector& y0,
                     const ControlSchedule& sched, double h,
                     const IntegrateOptions& opt) {
  const LieAlgebroid& A = S.algebroid();
  if (static_cast<std::size_t>(x0.size()) != A.n() ||
      static_cast<std::size_t>(y0.size()) != A.ell()) {
    throw std::invalid_argument("initial state has wrong dimensions");
  }
  if (sched.inputs() != S.inputs().size()) {
    throw std::invalid_argument("schedule does not match the number of inputs");
  }
  MechField field(S);
  Vector y = y0;
  bool projected = false;
  const auto& proj = S.constraint();
  if (proj) {
    Vector py = proj->matrix().eval(x0) * y0;
    projected = (py - y0).norm() > 1e-12 * (1.0 + y0.norm());
    y = py;
  }
  auto step = [&](Vector& x, Vector& v, const Vector& u, double dt) {
    auto [k1x, k1y] = field(x, v, u);
    auto [k2x, k2y] = field(x + 0.5 * dt * k1x, v + 0.5 * dt * k1y, u);
    auto [k3x, k3y] = field(x + 0.5 * dt * k2x, v + 0.5 * dt * k2y, u);
    auto [k4x, k4y] = field(x + dt * k3x, v + dt * k3y, u);
    x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    if (proj && opt.reproject) v = proj->matrix().eval(x) * v;
  };
  Trajectory tr = run(sched, x0, y, h, opt, step);
  tr.projected_initial = projected;
  return tr;
}

Trajectory integrate(const GeneralSystem& S, const Point& x0,
                     const ControlSchedule& sched, double h,
                     const IntegrateOptions& opt) {
  const LieAlgebroid& A = S.algebroid;
  if (static_cast<std::size_t>(x0.size()) != A.n()) {
    throw std::invalid_argument("initial point has wrong dimension");
  }
  if (sched.inputs() != S.inputs.size()) {
    throw std::invalid_argument("schedule does not match the number of inputs");
  }
  auto section = [&](const Vector& x, const Vector& u) {
    PointEvaluator ev(x);
    Vector a = S.drift.eval(ev);
    for (std::size_t i = 0; i < S.inputs.size(); ++i) {
      if (u(ix(i)) != 0.0) a += u(ix(i)) * S.inputs[i].eval(ev);
    }
    return a;
  };
  auto rhs = [&](const Vector& x, const Vector& u) {
    return Vector(A.anchor_at(x) * section(x, u));
  };
  auto step = [&](Vector& x, Vector& a, const Vector& u, double dt) {
    Vector k1 = rhs(x, u);
    Vector k2 = rhs(x + 0.5 * dt * k1, u);
    Vector k3 = rhs(x + 0.5 * dt * k2, u);
    Vector k4 = rhs(x + dt * k3, u);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    a = section(x, u);
  };
  Vector a0 = section(x0, sched.pieces().empty() ? Vector::Zero(ix(sched.inputs()))
                                                 : sched.pieces().front().values);
  // Stored curve points take the control of the interval ending there.
  return run(sched, x0, a0, h, opt, step);
}

double energy(const MechSystem& S, const Point& x, const Vector& y) {
  PointEvaluator ev(x);
  Matrix g = S.metric().matrix().eval(ev);
  return 0.5 * y.dot(g * y) + ev(S.potential());
}

double admissibility_residual(const LieAlgebroid& A, const Trajectory& tr) {
  double worst = 0.0;
  for (std::size_t k : smooth_interior(tr)) {
    Vector xd = stencil(tr, k, [&](std::size_t j) { return tr.x[j]; });
    Vector r = xd - A.anchor_at(tr.x[k]) * tr.y[k];
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  return worst;
}

double euler_lagrange_residual(const MechSystem& S, const Trajectory& tr) {
  if (tr.size() < 3) throw std::invalid_argument("trajectory too short");
  const LieAlgebroid& A = S.algebroid();
  const std::size_t n = A.n();
  const std::size_t l = A.ell();
  const ExprMatrix& G = S.metric().matrix();

  std::vector<Expr> dg(n * l * l);
  std::vector<Expr> dv(n);
  for (std::size_t i = 0; i < n; ++i) {
    dv[i] = diff(S.potential(), i);
    for (std::size_t a = 0; a < l; ++a) {
      for (std::size_t b = 0; b < l; ++b) dg[(i * l + a) * l + b] = diff(G(a, b), i);
    }
  }
  auto momentum = [&](std::size_t j) {
    return Vector(G.eval(tr.x[j]) * tr.y[j]);
  };

  double worst = 0.0;
  for (std::size_t k : smooth_interior(tr)) {
    PointEvaluator ev(tr.x[k]);
    const Vector& y = tr.y[k];
    Vector p = G.eval(ev) * y;
    Vector r = stencil(tr, k, momentum);
    for (std::size_t a = 0; a < l; ++a) {
      double acc = 0.0;
      for (std::size_t b = 0; b < l; ++b) {
        for (std::size_t g = 0; g < l; ++g) {
          const Expr& c = A.structure(g, a, b);
          if (!c.is_zero()) acc += ev(c) * y(ix(b)) * p(ix(g));
        }
      }
      r(ix(a)) += acc;
    }
    Vector dldx(ix(n));
    for (std::size_t i = 0; i < n; ++i) {
      double q = 0.0;
      for (std::size_t a = 0; a < l; ++a) {
        for (std::size_t b = 0; b < l; ++b) {
          const Expr& d = dg[(i * l + a) * l + b];
          if (!d.is_zero()) q += ev(d) * y(ix(a)) * y(ix(b));
        }
      }
      dldx(ix(i)) = 0.5 * q - ev(dv[i]);
    }
    r -= A.anchor().eval(ev).transpose() * dldx;
    for (std::size_t i = 0; i < S.forces().size(); ++i) {
      r -= tr.u[k](ix(i)) * S.forces()[i].eval(ev);
    }
    if (S.constraint()) r = S.constraint()->matrix().eval(ev).transpose() * r;
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  return std::max(worst, admissibility_residual(A, tr));
}

ReachableSample sample_reachable(const MechSystem& S, const Point& m, double T,
                                 int nsamples, double bound, std::uint64_t seed,
                                 const SampleOptions& opt) {
  const LieAlgebroid& A = S.algebroid();
  const std::size_t n = A.n();
  const std::size_t l = A.ell();
  const std::size_t k = S.inputs().size();
  if (nsamples < static_cast<int>(n + l + 1)) {
    throw std::invalid_argument("need at least n + l + 1 samples");
  }
  if (!(T > 0.0) || opt.pieces < 1) throw std::invalid_argument("bad horizon or piece count");

  ReachableSample out;
  std::vector<Vector> base;
  const auto lo = static_cast<std::uint32_t>(seed);
  const auto hi = static_cast<std::uint32_t>(seed >> 32);
  for (int i = 0; i < nsamples; ++i) {
    std::seed_seq seq{lo, hi, static_cast<std::uint32_t>(i)};
    std::mt19937_64 gen(seq);
    std::uniform_real_distribution<double> dist(-bound, bound);
    std::vector<ControlPiece> pieces;
    for (int p = 0; p < opt.pieces; ++p) {
      Vector v(ix(k));
      for (std::size_t j = 0; j < k; ++j) v(ix(j)) = dist(gen);
      pieces.push_back({T / opt.pieces, v});
    }
    Trajectory tr = integrate(S, m, Vector::Zero(ix(l)),
                              ControlSchedule(k, std::move(pieces)), opt.h);
    if (tr.blew_up) {
      ++out.dropped;
      continue;
    }
    Vector end(ix(n + l));
    end << tr.x.back(), tr.y.back();
    out.endpoints.push_back(end);
    base.push_back(tr.x.back());
  }
  if (2 * out.dropped > nsamples) {
    throw std::runtime_error("more than half of the sampled trajectories blew up");
  }
  out.base_rank = affine_rank(base, opt.rank_tol);
  out.full_rank = affine_rank(out.endpoints, opt.rank_tol);
  return out;
}

std::string trajectory_csv(const Trajectory& tr) {
  const std::size_t n = tr.x.empty() ? 0 : static_cast<std::size_t>(tr.x[0].size());
  const std::size_t l = tr.y.empty() ? 0 : static_cast<std::size_t>(tr.y[0].size());
  const std::size_t k = tr.schedule.inputs();
  std::string out = "t";
  for (std::size_t i = 1; i <= n; ++i) out += ",x" + std::to_string(i);
  for (std::size_t i = 1; i <= l; ++i) out += ",y" + std::to_string(i);
  for (std::size_t i = 1; i <= k; ++i) out += ",u" + std::to_string(i);
  out += '\n';
  // A zero-horizon run holds only the initial state; it is header-only.
  if (tr.size() < 2) return out;

  char buf[32];
  auto put = [&](double v) {
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
  };
  for (std::size_t j = 0; j < tr.size(); ++j) {
    put(tr.t[j]);
    for (std::size_t i = 0; i < n; ++i) { out += ','; put(tr.x[j](ix(i))); }
    for (std::size_t i = 0; i < l; ++i) { out += ','; put(tr.y[j](ix(i))); }
    for (std::size_t i = 0; i < k; ++i) { out += ','; put(tr.u[j](ix(i))); }
    out += '\n';
  }
  return out;
}

}  // namespace alab
