#include "doctest.h"

#include <cmath>
#include <random>

#include "nbgas/errors.hpp"
#include "nbgas/models.hpp"
#include "nbgas/structfun.hpp"

using namespace nbgas;

namespace {

cplx rnd(std::mt19937& rng, double r = 1.5) {
  std::uniform_real_distribution<double> ud(-r, r);
  return {ud(rng), ud(rng)};
}

double vec_dist(const Vector& a, const Vector& b) { return (a - b).norm(); }

}  // namespace

TEST_CASE("single-site vacuum action") {
  LatticeParams p{1.0, 3, 0.8, 3};
  Model m = Model::tcbg_full(p);
  const Vector vac = m.vacuum();
  const cplx u(0.7, -0.2);
  AuxMatrix l = m.l_operator(2, u);
  CHECK(vec_dist(l(0, 0).apply(vac), vac) < 1e-14);
  CHECK(vec_dist(l(1, 1).apply(vac), vac) < 1e-14);
  CHECK(vec_dist(l(2, 2).apply(vac), r0_fun(u, p.spacing()) * vac) < 1e-14);
  CHECK(l(0, 1).apply(vac).norm() < 1e-15);
  CHECK((vac.adjoint() * l(1, 0).to_dense()).norm() < 1e-15);
  CHECK_THROWS_AS(m.l_operator(1, cplx(0, -2.0 / p.spacing())), PoleError);
}

TEST_CASE("lattice operator agrees with the rescaled discrete-boson operator") {
  LatticeParams p{1.0, 2, 1.7, 3};
  const double dl = p.spacing();
  Model full = Model::tcbg_full(p);
  Model db = Model::discrete_boson(2, 3, 4.0 / (p.kappa * dl));
  const auto safe = full.space().sector(2);
  std::mt19937 rng(4);
  for (int k = 0; k < 3; ++k) {
    const cplx u = rnd(rng);
    const cplx w = (u + 2.0 * I_unit / dl) / (I_unit * p.kappa);
    // site_scale of the discrete boson is 1/w; undo it.
    AuxMatrix la = db.l_operator(1, w) * w;
    AuxMatrix rhs(3, full.space().dim(), true);
    const cplx pref = p.kappa * dl / 2.0 / (1.0 - I_unit * u * dl / 2.0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) rhs(i, j) = la(i, j) * (pref * (j == 2 ? -1.0 : 1.0));
    CHECK(max_entry_difference(full.l_operator(1, u), rhs, safe) < 1e-12);
  }
}

TEST_CASE("monodromy ordering and polynomial form") {
  LatticeParams p{1.0, 2, 1.0, 3};
  Model m = Model::tcbg_full(p);
  const cplx u(0.3, 0.4);
  AuxMatrix hand = compose(m.l_operator(2, u), m.l_operator(1, u));
  CHECK(max_entry_difference(hand, m.monodromy(u)) < 1e-14);
  const Vector vac = m.vacuum();
  CHECK(vec_dist(hand(2, 2).apply(vac), std::pow(r0_fun(u, p.spacing()), 2) * vac) < 1e-13);
  // Entry propagation agrees with the full product.
  Vector x = Vector::Random(m.space().dim());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(vec_dist(m.apply_entry(i, j, u, x), hand(i, j).apply(x)) < 1e-12);

  OperatorPolynomial q = m.monodromy_poly();
  CHECK(q.degree() == 2);
  std::mt19937 rng(5);
  for (int k = 0; k < 5; ++k) {
    const cplx w = rnd(rng);
    AuxMatrix t = eval(q, w) * (1.0 / std::pow(1.0 - I_unit * w * p.spacing() / 2.0, 2));
    CHECK(max_entry_difference(t, m.monodromy(w)) < 1e-12);
  }
  Model one = Model::tcbg_full(LatticeParams{1.0, 1, 1.0, 2});
  CHECK(one.monodromy_poly().degree() == 1);
  CHECK(max_entry_difference(one.monodromy(u), one.l_operator(1, u)) == 0.0);
}

TEST_CASE("vacuum eigenvalues of every model") {
  LatticeParams p{1.0, 3, 1.2, 3};
  const cplx u(0.45, -0.3);
  for (auto mk : {Model::tcbg_full(p), Model::tcbg_small(p), Model::gl2_full(p),
                  Model::gl2_small(p), Model::discrete_boson(3, 3, 2.0),
                  Model::xxx_chain(4, {0.1, -0.3, 0.5, 0.2}, cplx(0, -1))}) {
    const Vector vac = mk.vacuum();
    const int d = mk.auxdim();
    auto lam = mk.vacuum_eigenvalues(u);
    for (int label = 0; label < 3; ++label) {
      auto a = mk.aux_index(label);
      if (!a) continue;
      CHECK(vec_dist(mk.apply_entry(*a, *a, u, vac), lam[label] * vac) < 1e-12);
    }
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < i; ++j) CHECK(mk.apply_entry(i, j, u, vac).norm() < 1e-14);
    // Dual vacuum: <0| T_ij = 0 for i < j.
    AuxMatrix t = mk.monodromy(u);
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        CHECK(t(i, j).to_dense().row(0).norm() < 1e-14);
  }
}

TEST_CASE("exchange relations for all models") {
  std::mt19937 rng(6);
  LatticeParams p{1.0, 2, 0.9, 3};
  std::vector<Model> models = {Model::tcbg_full(p), Model::gl2_full(p),
                               Model::discrete_boson(2, 3, 1.5),
                               Model::xxx_chain(3, {0.2, -0.1, 0.4}, 0.7)};
  for (const auto& m : models) {
    auto T = [&](cplx u) { return m.monodromy(u); };
    const int sector = m.space().cutoff() ? *m.space().cutoff() - 2 : 3;
    for (int k = 0; k < 3; ++k) {
      const cplx u = rnd(rng), v = rnd(rng);
      CHECK(rtt_residual(T, u, v, m.coupling(), m.space(), sector) < 1e-10);
      auto safe = m.space().sector(sector);
      AuxMatrix tu = m.monodromy(u), tv = m.monodromy(v);
      auto tr_u = tu.trace(), tr_v = tv.trace();
      CHECK(commutator(tr_u, tr_v).columns(safe).cwiseAbs().maxCoeff() < 1e-10);
      if (m.auxdim() == 3) {
        auto lhs = commutator(tv(1, 0), tu(0, 1));
        auto rhs = (tu(0, 0) * tv(1, 1) - tv(0, 0) * tu(1, 1)) * g_fun(v, u, m.coupling());
        CHECK((lhs - rhs).columns(safe).cwiseAbs().maxCoeff() < 1e-10);
        const Vector vac = m.vacuum();
        CHECK(tv(1, 0).apply(tu(0, 1).apply(vac)).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("spin chain operator") {
  const cplx c(0, -1);
  Model x = Model::xxx_chain(2, {}, c);
  CHECK(std::abs(x.inhomogeneities()[0] - c / 2.0) < 1e-15);
  const cplx u(0.4, 0.1);
  AuxMatrix l = x.l_operator(1, u);
  const cplx w = u - c / 2.0;
  SpinBasis s(2);
  auto id = LocalOperator::identity(4, true);
  auto e00 = (id * w + (id + sigma_z(s, 1)) * (c / 2.0)) * (1.0 / w);
  CHECK((l(0, 0) - e00).max_abs() < 1e-14);
  CHECK((l(0, 1) - sigma_minus(s, 1) * (c / w)).max_abs() < 1e-14);
}

TEST_CASE("r0 and its power limit") {
  CHECK(std::abs(r0_fun(0.0, 0.1) - 1.0) < 1e-15);
  CHECK(std::abs(r0_fun(cplx(0, 2.0 / 0.1), 0.1)) < 1e-14);
  CHECK_THROWS_AS(r0_fun(cplx(0, -2.0 / 0.1), 0.1), PoleError);
  double prev = r0_power_limit(1.0, 1.0, 1.0 / 8);
  for (int n = 16; n <= 64; n *= 2) {
    double cur = r0_power_limit(1.0, 1.0, 1.0 / n);
    CHECK(std::log2(prev / cur) > 1.9);
    prev = cur;
  }
}

TEST_CASE("truncated and full operators differ at first order on occupied states") {
  // The dropped terms are Delta^2 psi^dag psi with psi ~ Delta^{-1/2}, so the
  // operator-norm difference is O(Delta), not O(Delta^2).
  const cplx u(0.7, -0.3);
  double prev = 0.0;
  for (int n : {4, 8, 16, 32}) {
    LatticeParams p{1.0, n, 1.0, 2};
    Model s = Model::tcbg_small(p, {32, 2'000'000});
    Model f = Model::tcbg_full(p, {32, 2'000'000});
    const auto one = f.space().sector(1);
    const double d = max_entry_difference(s.monodromy(u), f.monodromy(u), one);
    const Vector vac = f.vacuum();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(vec_dist(s.monodromy(u)(i, j).apply(vac), f.monodromy(u)(i, j).apply(vac)) < 1e-12);
    if (prev > 0.0) CHECK(std::abs(std::log2(prev / d) - 1.0) < 0.15);
    prev = d;
  }
}
