#include "nbgas/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include <Eigen/LU>

#include "nbgas/errors.hpp"
#include "nbgas/structfun.hpp"

namespace nbgas {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx reduce(cplx z) {
  return z - cplx(0.0, kTwoPi * std::round(z.imag() / kTwoPi));
}

cplx log_f(cplx x, cplx y, cplx c) { return std::log(f_fun(x, y, c)); }

}  // namespace

BetheSystem BetheSystem::continuum(int a, int b, double length, double kappa) {
  BetheSystem s;
  s.a = a;
  s.b = b;
  s.c = cplx(0.0, -kappa);
  s.variant = BetheVariant::TcbgContinuum;
  s.length = length;
  s.r1 = [](cplx) { return cplx(1.0); };
  s.r3 = [length](cplx u) { return std::exp(I_unit * length * u); };
  return s;
}

BetheSystem BetheSystem::lattice(int a, int b, const LatticeParams& p) {
  p.validate();
  BetheSystem s;
  s.a = a;
  s.b = b;
  s.c = p.coupling();
  s.variant = BetheVariant::TcbgLattice;
  s.length = p.length;
  s.sites = p.sites;
  s.spacing = p.spacing();
  const int n = p.sites;
  const double d = p.spacing();
  s.r1 = [](cplx) { return cplx(1.0); };
  s.r3 = [n, d](cplx u) { return ipow(r0_fun(u, d), n); };
  return s;
}

BetheSystem BetheSystem::generic(int a, int b, cplx c, std::function<cplx(cplx)> r1,
                                 std::function<cplx(cplx)> r3) {
  BetheSystem s;
  s.a = a;
  s.b = b;
  s.c = c;
  s.r1 = std::move(r1);
  s.r3 = std::move(r3);
  return s;
}

BetheSystem BetheSystem::from_model(const Model& model, int a, int b) {
  switch (model.kind()) {
    case ModelKind::TcbgFull:
    case ModelKind::TcbgSmall:
    case ModelKind::Gl2Full:
    case ModelKind::Gl2Small: {
      LatticeParams p = model.lattice();
      p.sites = model.length();
      p.length = p.sites * model.spacing();
      return lattice(a, b, p);
    }
    default: {
      // The model is captured by value; slices share the underlying space.
      Model m = model;
      return generic(a, b, model.coupling(), [m](cplx u) { return m.r1(u); },
                     [m](cplx u) { return m.r3(u); });
    }
  }
}

cplx BetheSystem::log_r1(cplx u) const {
  if (variant != BetheVariant::GenericGl3) return 0.0;
  return std::log(r1(u));
}

cplx BetheSystem::log_r3(cplx v) const {
  switch (variant) {
    case BetheVariant::TcbgContinuum: return I_unit * length * v;
    case BetheVariant::TcbgLattice:
      r0_fun(v, spacing);  // pole check
      return static_cast<double>(sites) * 2.0 * I_unit * std::atan(v * spacing / 2.0);
    default: return std::log(r3(v));
  }
}

std::vector<cplx> bethe_residual_unreduced(const BetheSystem& sys,
                                           const std::vector<cplx>& u,
                                           const std::vector<cplx>& v) {
  if (static_cast<int>(u.size()) != sys.a || static_cast<int>(v.size()) != sys.b)
    throw ArgumentError("bethe_residual: parameter counts do not match the system");
  require_distinct(u, "Bethe parameters u");
  require_distinct(v, "Bethe parameters v");
  std::vector<cplx> out;
  out.reserve(u.size() + v.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    cplx rhs = 0.0;
    for (std::size_t l = 0; l < u.size(); ++l)
      if (l != i) rhs += log_f(u[i], u[l], sys.c) - log_f(u[l], u[i], sys.c);
    for (cplx vk : v) rhs += log_f(vk, u[i], sys.c);
    out.push_back(sys.log_r1(u[i]) - rhs);
  }
  for (std::size_t j = 0; j < v.size(); ++j) {
    cplx rhs = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k)
      if (k != j) rhs += log_f(v[k], v[j], sys.c) - log_f(v[j], v[k], sys.c);
    for (cplx ul : u) rhs += log_f(v[j], ul, sys.c);
    out.push_back(sys.log_r3(v[j]) - rhs);
  }
  return out;
}

std::vector<cplx> bethe_residual(const BetheSystem& sys, const std::vector<cplx>& u,
                                 const std::vector<cplx>& v) {
  auto r = bethe_residual_unreduced(sys, u, v);
  for (auto& z : r) z = reduce(z);
  return r;
}

double collision_margin(const BetheParams& p) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto* w : {&p.u, &p.v})
    for (std::size_t i = 0; i < w->size(); ++i)
      for (std::size_t j = i + 1; j < w->size(); ++j)
        m = std::min(m, std::abs((*w)[i] - (*w)[j]));
  return m;
}

namespace {

// Log-form residual with fixed branch offsets and continuity tracking.
struct Tracked {
  const BetheSystem& sys;
  std::vector<double> offsets;  // multiples of 2 pi

  Eigen::VectorXcd raw(const Eigen::VectorXcd& x) const {
    std::vector<cplx> u(x.data(), x.data() + sys.a);
    std::vector<cplx> v(x.data() + sys.a, x.data() + sys.a + sys.b);
    auto r = bethe_residual_unreduced(sys, u, v);
    return Eigen::Map<Eigen::VectorXcd>(r.data(), static_cast<Index>(r.size()));
  }

  // Unwraps raw(x) against a reference value of the tracked residual.
  Eigen::VectorXcd eval(const Eigen::VectorXcd& x, const Eigen::VectorXcd& ref) const {
    Eigen::VectorXcd r = raw(x);
    for (Index k = 0; k < r.size(); ++k) {
      const double jump = std::round((ref[k] - r[k]).imag() / kTwoPi);
      r[k] += cplx(0.0, kTwoPi * jump);
    }
    return r;
  }

  Eigen::VectorXcd shifted(const Eigen::VectorXcd& tracked) const {
    Eigen::VectorXcd r = tracked;
    for (Index k = 0; k < r.size(); ++k) r[k] -= cplx(0.0, kTwoPi * offsets[k]);
    return r;
  }
};

double inf_norm(const Eigen::VectorXcd& r) {
  return r.size() == 0 ? 0.0 : r.cwiseAbs().maxCoeff();
}

BetheParams unpack(const Eigen::VectorXcd& x, int a, cplx c) {
  BetheParams p;
  p.u.assign(x.data(), x.data() + a);
  p.v.assign(x.data() + a, x.data() + x.size());
  p.c = c;
  return p;
}

}  // namespace

SolveReport solve_bethe(const BetheSystem& sys, const BetheParams& initial,
                        const SolveConfig& config) {
  if (static_cast<int>(initial.u.size()) != sys.a ||
      static_cast<int>(initial.v.size()) != sys.b)
    throw ArgumentError("solve_bethe: initial guess does not match the system");
  const Index n = sys.a + sys.b;
  Eigen::VectorXcd x(n);
  for (int i = 0; i < sys.a; ++i) x[i] = initial.u[i];
  for (int j = 0; j < sys.b; ++j) x[sys.a + j] = initial.v[j];

  Tracked tr{sys, {}};
  Eigen::VectorXcd tracked = tr.raw(x);
  for (Index k = 0; k < n; ++k)
    tr.offsets.push_back(std::round(tracked[k].imag() / kTwoPi));
  Eigen::VectorXcd res = tr.shifted(tracked);

  SolveReport rep;
  rep.residual_inf = inf_norm(res);
  auto finish = [&](bool ok, std::string msg) {
    rep.roots = unpack(x, sys.a, sys.c);
    rep.converged = ok;
    rep.collision_margin = collision_margin(rep.roots);
    rep.message = std::move(msg);
    return rep;
  };
  if (rep.residual_inf < config.tolerance) return finish(true, "converged");

  for (int it = 1; it <= config.max_iterations; ++it) {
    rep.iterations = it;
    Eigen::MatrixXcd jac(n, n);
    for (Index k = 0; k < n; ++k) {
      const double h = config.fd_step * std::max(1.0, std::abs(x[k]));
      Eigen::VectorXcd xp = x;
      xp[k] += h;
      jac.col(k) = (tr.eval(xp, tracked) - tracked) / h;
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(jac);
    if (!lu.isInvertible() || std::abs(lu.determinant()) == 0.0 ||
        !std::isfinite(std::abs(lu.determinant())))
      throw SingularityError("solve_bethe: singular Jacobian");
    const Eigen::VectorXcd dx = lu.solve(-res);

    double t = 1.0;
    Eigen::VectorXcd xn, tn, rn;
    bool accepted = false;
    for (int h = 0; h <= config.max_halvings; ++h, t /= 2.0) {
      xn = x + t * dx;
      try {
        tn = tr.eval(xn, tracked);
      } catch (const PoleError&) {
        continue;
      }
      rn = tr.shifted(tn);
      if (inf_norm(rn) < rep.residual_inf) {
        accepted = true;
        break;
      }
    }
    if (!accepted) return finish(false, "line search failed");
    x = xn;
    tracked = tn;
    res = rn;
    rep.residual_inf = inf_norm(res);

    const double margin = collision_margin(unpack(x, sys.a, sys.c));
    if (margin < config.collision)
      throw CollisionError("solve_bethe: Bethe parameters merged (distance " +
                           std::to_string(margin) + ")");
    if (x.cwiseAbs().maxCoeff() > config.escape)
      return finish(false, "iterates escaped to infinity");
    if (rep.residual_inf < config.tolerance) return finish(true, "converged");
  }
  return finish(false, "maximum iterations reached");
}

namespace {

std::vector<cplx> sorted(std::vector<cplx> w) {
  std::sort(w.begin(), w.end(), [](cplx x, cplx y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return w;
}

double set_distance(const BetheParams& p, const BetheParams& q) {
  double d = 0.0;
  auto pu = sorted(p.u), qu = sorted(q.u), pv = sorted(p.v), qv = sorted(q.v);
  for (std::size_t i = 0; i < pu.size(); ++i) d = std::max(d, std::abs(pu[i] - qu[i]));
  for (std::size_t i = 0; i < pv.size(); ++i) d = std::max(d, std::abs(pv[i] - qv[i]));
  return d;
}

}  // namespace

std::vector<SolveReport> solve_seeds(const BetheSystem& sys,
                                     const std::vector<BetheParams>& seeds,
                                     const SolveConfig& config, int workers,
                                     double dedup) {
  std::vector<std::optional<SolveReport>> out(seeds.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        auto r = solve_bethe(sys, seeds[i], config);
        if (r.converged) out[i] = std::move(r);
      } catch (const Error&) {
      }
    }
  };
  const int nw = std::max(1, std::min<int>(workers, static_cast<int>(seeds.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < nw; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  // Deduplicate in seed order, so the result does not depend on scheduling.
  std::vector<SolveReport> roots;
  for (auto& r : out) {
    if (!r) continue;
    const bool dup = std::any_of(roots.begin(), roots.end(), [&](const SolveReport& s) {
      return set_distance(s.roots, r->roots) < dedup;
    });
    if (!dup) roots.push_back(std::move(*r));
  }
  return roots;
}

cplx transfer_rayleigh(const Model& model, cplx w, const Vector& x) {
  return x.dot(model.apply_transfer(w, x)) / x.squaredNorm();
}

double certify_onshell(const Model& model, const BetheParams& params,
                       const std::vector<cplx>& probes) {
  const Vector b = bethe_vector(model, params);
  if (b.norm() == 0.0) throw DegenerateError("certify_onshell: Bethe vector vanishes");
  double worst = 0.0;
  for (cplx w : probes) {
    const Vector tb = model.apply_transfer(w, b);
    const double nt = tb.norm();
    const cplx q = b.dot(tb) / b.squaredNorm();
    if (nt == 0.0) continue;
    worst = std::max(worst, (tb - q * b).norm() / nt);
  }
  return worst;
}

double transfer_commutator(const Model& model, cplx w1, cplx w2, const Vector& x) {
  const Vector a = model.apply_transfer(w1, model.apply_transfer(w2, x));
  const Vector b = model.apply_transfer(w2, model.apply_transfer(w1, x));
  const double n = a.norm();
  return n == 0.0 ? (a - b).norm() : (a - b).norm() / n;
}

}  // namespace nbgas
