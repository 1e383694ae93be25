#include "doctest.h"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "nbgas/errors.hpp"
#include "nbgas/solver.hpp"
#include "nbgas/structfun.hpp"

using namespace nbgas;

namespace {

constexpr double pi = std::numbers::pi;

// Ratio form: LHS/RHS of each equation.
std::vector<cplx> ratios(const BetheSystem& s, const std::vector<cplx>& u,
                         const std::vector<cplx>& v) {
  std::vector<cplx> out;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cplx rhs = 1.0;
    for (std::size_t l = 0; l < u.size(); ++l)
      if (l != i) rhs *= f_fun(u[i], u[l], s.c) / f_fun(u[l], u[i], s.c);
    for (cplx x : v) rhs *= f_fun(x, u[i], s.c);
    out.push_back(s.r1(u[i]) / rhs);
  }
  for (std::size_t j = 0; j < v.size(); ++j) {
    cplx rhs = 1.0;
    for (std::size_t k = 0; k < v.size(); ++k)
      if (k != j) rhs *= f_fun(v[k], v[j], s.c) / f_fun(v[j], v[k], s.c);
    for (cplx x : u) rhs *= f_fun(v[j], x, s.c);
    out.push_back(s.r3(v[j]) / rhs);
  }
  return out;
}

double max_abs(const std::vector<cplx>& r) {
  double m = 0.0;
  for (cplx z : r) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

TEST_CASE("single-particle roots") {
  auto cont = BetheSystem::continuum(0, 1, 2.0, 1.0);
  CHECK(max_abs(bethe_residual(cont, {}, {cplx(pi)})) < 1e-14);
  auto rep = solve_bethe(cont, {{}, {cplx(5.0 / 2.0)}, cont.c});
  CHECK(rep.converged);
  CHECK(std::abs(rep.roots.v[0] - pi) < 1e-12);
  CHECK(rep.residual_inf < 1e-12);

  LatticeParams lp{1.0, 6, 1.0, 2};
  auto lat = BetheSystem::lattice(0, 1, lp);
  for (int n = -2; n <= 2; ++n) {
    const cplx v = 2.0 / lp.spacing() * std::tan(pi * n / lp.sites);
    CHECK(max_abs(bethe_residual(lat, {}, {v})) < 1e-12);
  }
  auto r2 = solve_bethe(lat, {{}, {cplx(5.0)}, lat.c});
  CHECK(r2.converged);
  CHECK(std::abs(r2.roots.v[0] - 2.0 / lp.spacing() * std::tan(pi / 6)) < 1e-10);
}

TEST_CASE("two second-level parameters in the continuum") {
  auto s = BetheSystem::continuum(0, 2, 1.0, 1.0);
  auto rep = solve_bethe(s, {{}, {cplx(2 * pi + 0.2), cplx(4 * pi - 0.1)}, s.c});
  REQUIRE(rep.converged);
  CHECK(rep.residual_inf < 1e-10);
  CHECK(rep.collision_margin > 1.0);
  for (cplx r : ratios(s, rep.roots.u, rep.roots.v)) CHECK(std::abs(r - 1.0) < 1e-10);
}

TEST_CASE("log form matches ratio form; permutation equivariance") {
  auto s = BetheSystem::lattice(2, 3, LatticeParams{1.0, 5, 0.7, 2});
  std::vector<cplx> u{cplx(0.3, -0.2), cplx(-1.1, 0.4)};
  std::vector<cplx> v{cplx(0.8, 0.1), cplx(2.0, -0.3), cplx(-0.6, 0.05)};
  auto raw = bethe_residual_unreduced(s, u, v);
  auto rat = ratios(s, u, v);
  for (std::size_t k = 0; k < raw.size(); ++k)
    CHECK(std::abs(std::exp(raw[k]) - rat[k]) < 1e-12 * std::abs(rat[k]));
  auto red = bethe_residual(s, u, v);
  for (std::size_t k = 0; k < raw.size(); ++k) {
    CHECK(std::abs(red[k].imag()) <= pi + 1e-12);
    CHECK(std::abs(std::exp(red[k]) - std::exp(raw[k])) < 1e-12 * std::abs(rat[k]));
  }
  auto sw = bethe_residual(s, {u[1], u[0]}, v);
  CHECK(std::abs(sw[0] - red[1]) < 1e-12);
  CHECK(std::abs(sw[1] - red[0]) < 1e-12);
  CHECK(std::abs(sw[3] - red[3]) < 1e-12);

  auto g = BetheSystem::generic(1, 1, cplx(0, -1), [](cplx) { return cplx(1.0); },
                                [](cplx x) { return std::exp(I_unit * x); });
  CHECK_THROWS_AS(bethe_residual(g, {cplx(0.5)}, {cplx(0.5)}), PoleError);
  CHECK_THROWS_AS(bethe_residual(s, {cplx(1), cplx(1)}, v), PoleError);
  CHECK_THROWS_AS(bethe_residual(s, u, {}), ArgumentError);
}

TEST_CASE("obstructed and singular sectors") {
  auto s = BetheSystem::lattice(1, 1, LatticeParams{1.0, 4, 1.0, 3});
  auto rep = solve_bethe(s, {{cplx(3.0)}, {cplx(1.0)}, s.c});
  CHECK_FALSE(rep.converged);
  CHECK(rep.residual_inf > 1e-10);

  auto flat = BetheSystem::generic(0, 1, cplx(0, -1), [](cplx) { return cplx(1.0); },
                                   [](cplx) { return cplx(2.0); });
  CHECK_THROWS_AS(solve_bethe(flat, {{}, {cplx(0.5)}, flat.c}), SingularityError);
}

TEST_CASE("first-level root in closed form") {
  // With a=1, b=2 the first equation forces u = (v1 + v2 + c)/2.
  LatticeParams lp{1.0, 4, 1.0, 3};
  auto s = BetheSystem::lattice(1, 2, lp);
  auto rep = solve_bethe(s, {{cplx(3.0, -0.3)}, {cplx(1.0), cplx(7.0)}, s.c});
  REQUIRE(rep.converged);
  const auto& v = rep.roots.v;
  CHECK(std::abs(rep.roots.u[0] - (v[0] + v[1] + s.c) / 2.0) < 1e-10);
}

TEST_CASE("seeded scans deduplicate and are deterministic") {
  auto s = BetheSystem::continuum(0, 1, 1.0, 1.0);
  std::vector<BetheParams> seeds;
  for (int k = 0; k < 12; ++k) seeds.push_back({{}, {cplx(0.5 + 1.3 * k)}, s.c});
  auto one = solve_seeds(s, seeds, {}, 1);
  auto many = solve_seeds(s, seeds, {}, 4);
  REQUIRE(one.size() == many.size());
  CHECK(one.size() < seeds.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].roots.v[0] == many[i].roots.v[0]);
    const double n = one[i].roots.v[0].real() / (2 * pi);
    CHECK(std::abs(n - std::round(n)) < 1e-10);
  }
}

TEST_CASE("on-shell certification") {
  const std::vector<cplx> probes{cplx(0.3, 0.1), cplx(-0.7, 0.2), cplx(1.1, -0.4)};
  Model m = Model::tcbg_full(LatticeParams{1.0, 4, 1.0, 3});
  CHECK(certify_onshell(m, {{}, {}, m.coupling()}, probes) < 1e-12);

  auto s = BetheSystem::from_model(m, 0, 2);
  auto rep = solve_bethe(s, {{}, {cplx(1.0), cplx(7.0)}, s.c});
  REQUIRE(rep.converged);
  CHECK(certify_onshell(m, rep.roots, probes) < 1e-10);
  BetheParams off = rep.roots;
  off.v[0] += 0.37;
  CHECK(certify_onshell(m, off, probes) > 1e-3);

  // Applying t(w2) first leaves the t(w1) eigenvalue unchanged.
  const Vector b = bethe_vector(m, rep.roots);
  const Vector tb = m.apply_transfer(probes[1], b);
  CHECK(std::abs(transfer_rayleigh(m, probes[0], tb) - transfer_rayleigh(m, probes[0], b)) <
        1e-10 * std::abs(transfer_rayleigh(m, probes[0], b)));
  CHECK(transfer_commutator(m, probes[0], probes[1], b) < 1e-10);

  CHECK_THROWS_AS(certify_onshell(m, {{cplx(0.1), cplx(0.2)}, {cplx(0.3)}, m.coupling()}, probes),
                  DegenerateError);
}

TEST_CASE("two-site spin chain against dense diagonalization") {
  const cplx c(0, -1);
  Model x = Model::xxx_chain(2, {}, c);
  auto s = BetheSystem::from_model(x, 1, 0);
  auto rep = solve_bethe(s, {{cplx(0.3, 0.1)}, {}, c});
  REQUIRE(rep.converged);
  CHECK(std::abs(rep.roots.u[0]) < 1e-9);
  const cplx w(0.4, 0.25);
  CHECK(certify_onshell(x, rep.roots, {w, cplx(-0.2, 0.5)}) < 1e-10);

  DenseMatrix t(4, 4);
  for (int k = 0; k < 4; ++k) t.col(k) = x.apply_transfer(w, basis_vector(4, k));
  Eigen::ComplexEigenSolver<DenseMatrix> es(t);
  const cplx q = transfer_rayleigh(x, w, bethe_vector(x, rep.roots));
  double best = 1e300;
  for (Index k = 0; k < 4; ++k) best = std::min(best, std::abs(es.eigenvalues()[k] - q));
  CHECK(best < 1e-10);
}
