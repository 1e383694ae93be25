#include "doctest.h"

#include <cmath>

#include "nbgas/bethe.hpp"
#include "nbgas/errors.hpp"
#include "nbgas/structfun.hpp"

using namespace nbgas;

namespace {
LatticeParams lat(int n, int p) { return LatticeParams{1.0, n, 1.3, p}; }
}  // namespace

TEST_CASE("subset enumeration") {
  CHECK(subsets(4, 2).size() == 6);
  CHECK(subsets(3, 0).size() == 1);
  CHECK(subsets(2, 3).empty());
  auto [in, out] = split_by({1.0, 2.0, 3.0}, {1});
  CHECK(in.size() == 1);
  CHECK(in[0] == cplx(2.0));
  CHECK(out.size() == 2);
}

TEST_CASE("small nested Bethe vectors") {
  Model m = Model::tcbg_full(lat(3, 3));
  const auto T = entry_action(m);
  const cplx c = m.coupling();
  const Vector vac = m.vacuum();
  CHECK((bv_gl3(T, {{}, {}, c}, vac) - vac).norm() == 0.0);
  const cplx v(0.4, -0.3), u(-0.6, 0.2);
  CHECK((bv_gl3(T, {{}, {v}, c}, vac) - T(1, 2, v, vac)).norm() < 1e-14);
  // a = b = 1 hand expansion: n = 0 term and n = 1 term.
  Vector hand = (T(1, 2, v, T(0, 1, u, vac)) + g_fun(v, u, c) * T(0, 2, v, vac)) / f_fun(v, u, c);
  CHECK((bv_gl3(T, {{u}, {v}, c}, vac) - hand).norm() < 1e-13);
  Vector b11 = bv_tcbg(T, {{u}, {v}, c}, vac);
  CHECK((b11 - g_fun(v, u, c) / f_fun(v, u, c) * T(0, 2, v, vac)).norm() < 1e-13);
  CHECK(bv_tcbg(T, {{u, u + 0.5}, {v}, c}, vac).norm() == 0.0);
  CHECK_THROWS_AS(bv_tcbg(T, {{u}, {v, v}, c}, vac), PoleError);
}

TEST_CASE("single-set form equals the double sum and is symmetric") {
  Model m = Model::tcbg_full(lat(3, 3));
  const auto T = entry_action(m);
  const cplx c = m.coupling();
  const std::vector<cplx> us = {cplx(0.2, 0.1), cplx(-0.5, 0.3)};
  const std::vector<cplx> vs = {cplx(0.9, -0.2), cplx(-0.4, -0.1)};
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b) {
      BetheParams p{{us.begin(), us.begin() + a}, {vs.begin(), vs.begin() + b}, c};
      Vector x = bv_tcbg(T, p, m.vacuum());
      Vector y = bv_gl3(T, p, m.vacuum());
      CHECK((x - y).norm() < 1e-12 * std::max(1.0, y.norm()));
      BetheParams q = p;
      std::reverse(q.u.begin(), q.u.end());
      std::reverse(q.v.begin(), q.v.end());
      CHECK((bv_tcbg(T, q, m.vacuum()) - x).norm() < 1e-10 * std::max(1.0, x.norm()));
      // grading: only total occupation b.
      for (std::size_t i = 0; i < m.space().dim(); ++i)
        if (m.space().total(i) != b) CHECK(std::abs(x[i]) == 0.0);
    }
  // Creation operators commute among themselves on the vacuum.
  const Vector vac = m.vacuum();
  CHECK((T(0, 2, vs[0], T(0, 2, vs[1], vac)) - T(0, 2, vs[1], T(0, 2, vs[0], vac))).norm() < 1e-12);
}

TEST_CASE("colour content of the two-component vector") {
  Model m = Model::tcbg_small(lat(3, 3));
  BetheParams p{{cplx(0.3, 0.2)}, {cplx(0.7, 0.1), cplx(-0.2, -0.4)}, m.coupling()};
  auto content = color_content(*m.fock(), bethe_vector(m, p));
  for (const auto& [nn, w] : content) {
    CHECK(nn.first == 1);
    CHECK(nn.second == 1);
  }
}

TEST_CASE("GL(2) vectors") {
  Model m = Model::gl2_small(LatticeParams{1.0, 1, 2.0, 2});
  const double dl = m.spacing();
  Vector b1 = bethe_vector(m, {{}, {cplx(0.3)}, m.coupling()});
  const auto idx = *m.fock()->index({0, 1});
  // -i Delta sqrt(kappa) psi^+ |0>, with the 1/(1 - iv Delta/2) normalization.
  const cplx expect = -I_unit * dl * std::sqrt(2.0) / std::sqrt(dl) / (1.0 - I_unit * 0.3 * dl / 2.0);
  CHECK(std::abs(b1[idx] - expect) < 1e-14);
  CHECK((bethe_vector(m, {{}, {}, m.coupling()}) - m.vacuum()).norm() == 0.0);
}

TEST_CASE("spin-chain coordinate coefficients") {
  const cplx c(0.0, -1.0);
  const std::vector<cplx> xi = {0.3, -0.2, 0.1};
  const cplx u(0.7, 0.4);
  CHECK(std::abs(omega({1}, {u}, {xi[0]}, c) - g_fun(u, xi[0], c)) < 1e-15);
  CHECK(std::abs(omega({1}, {u}, {xi[0], xi[1]}, c) - f_fun(u, xi[1], c) * g_fun(u, xi[0], c)) < 1e-15);
  for (int mm = 1; mm <= 6; ++mm) {
    std::vector<cplx> x;
    for (int k = 0; k < mm; ++k) x.emplace_back(0.13 * k - 0.2, 0.05 * k);
    Model chain = Model::xxx_chain(mm, x, c);
    for (int a = 0; a <= std::min(3, mm); ++a) {
      std::vector<cplx> us;
      for (int k = 0; k < a; ++k) us.emplace_back(0.4 - 0.3 * k, 0.2 + 0.1 * k);
      Vector alg = bethe_vector(chain, {us, {}, c});
      Vector crd = spin_state(static_cast<const SpinBasis&>(chain.space()), omega_coeffs(us, x, c));
      CHECK((alg - crd).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, alg.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("coordinate wave function") {
  const double kappa = 1.1;
  const cplx c(0, -kappa);
  const cplx v1(0.8, 0.1), v2(-0.3, 0.2);
  CHECK(std::abs(chi_wavefunction({}, {0.3}, {}, {v1}, kappa) - std::exp(I_unit * 0.3 * v1)) < 1e-14);
  const double z1 = 0.2, z2 = 0.7;
  cplx hand = f_fun(v2, v1, c) * std::exp(I_unit * (z1 * v1 + z2 * v2)) +
              f_fun(v1, v2, c) * std::exp(I_unit * (z1 * v2 + z2 * v1));
  CHECK(std::abs(chi_wavefunction({}, {z1, z2}, {}, {v1, v2}, kappa) - hand) < 1e-13);
  CHECK_THROWS_AS(chi_wavefunction({}, {z2, z1}, {}, {v1, v2}, kappa), DomainError);
}

TEST_CASE("lattice coordinate vector") {
  Model g = Model::gl2_small(LatticeParams{1.0, 3, 1.0, 2});
  const double dl = g.spacing();
  const cplx v(0.6, -0.1);
  Vector x = lattice_coordinate_bv(g, {{}, {v}, g.coupling()});
  for (int j = 1; j <= 3; ++j) {
    std::vector<int> occ(6, 0);
    occ[2 * (j - 1) + 1] = 1;
    const cplx expect = -I_unit * dl * std::pow(r0_fun(v, dl), j - 1) / std::sqrt(dl);
    CHECK(std::abs(x[*g.fock()->index(occ)] - expect) < 1e-14);
  }
  // a = 0 two-colour form coincides with the GL(2) form.
  Model t = Model::tcbg_small(LatticeParams{1.0, 3, 1.0, 2});
  CHECK((lattice_coordinate_bv(t, {{}, {v, -v + 0.2}, t.coupling()}) -
         lattice_coordinate_bv(g, {{}, {v, -v + 0.2}, g.coupling()})).norm() < 1e-14);
}
