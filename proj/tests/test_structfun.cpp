#include "doctest.h"

#include <algorithm>
#include <random>

#include "nbgas/errors.hpp"
#include "nbgas/models.hpp"
#include "nbgas/structfun.hpp"

using namespace nbgas;

namespace {
cplx rnd(std::mt19937& rng) {
  std::uniform_real_distribution<double> ud(-2, 2);
  return {ud(rng), ud(rng)};
}
}  // namespace

TEST_CASE("g and f") {
  CHECK(std::abs(g_fun(3.0, 1.0, 2.0) - 1.0) < 1e-15);
  CHECK(std::abs(g_fun(I_unit, 0.0, -I_unit) + 1.0) < 1e-15);
  CHECK_THROWS_AS(g_fun(1.0, 1.0, 1.0), PoleError);
  std::mt19937 rng(1);
  for (int k = 0; k < 20; ++k) {
    cplx x = rnd(rng), y = rnd(rng), c = rnd(rng);
    CHECK(std::abs(g_fun(x, y, c) + g_fun(y, x, c)) < 1e-12);
    CHECK(std::abs(f_fun(x, y, c) * f_fun(y, x, c) - (1.0 - std::pow(g_fun(x, y, c), 2))) < 1e-10);
    CHECK(std::abs(f_fun(x, y + c, c) - 1.0 / f_fun(y, x, c)) < 1e-10);
    CHECK(std::abs(g_fun(x, y + c, c) + g_fun(y, x, c) / f_fun(y, x, c)) < 1e-10);
  }
  CHECK(std::abs(f_fun(1.0 - 0.5, 1.0, 0.5)) < 1e-15);
  CHECK(f_prod(2.0, std::vector<cplx>{}, 1.0) == cplx(1.0));
}

TEST_CASE("R-matrix relations") {
  std::mt19937 rng(2);
  for (int d : {2, 3})
    for (int k = 0; k < 20; ++k) {
      cplx x = rnd(rng), y = rnd(rng), z = rnd(rng), c = rnd(rng);
      CHECK(ybe_residual(x, y, z, c, d) < 1e-12);
      CHECK(unitarity_residual(x, y, c, d) < 1e-12);
    }
  // Corrupted sign must break the relation.
  CHECK(ybe_residual(0.3, -0.7, 1.1, 0.5, 3, -1.0) > 1e-3);
  DenseMatrix r = r_matrix(1e9, 0.0, 1.0, 3);
  CHECK((r - DenseMatrix::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("Izergin determinant") {
  const cplx c(0.3, -0.8);
  CHECK(std::abs(izergin_k({0.4}, {-0.2}, c) - g_fun(0.4, -0.2, c)) < 1e-14);
  // Hand expansion at x = (2c, 3c), y = (0, c): prefactor
  // g(3c,2c) g(0,c) = 1 * (-1); f/g over the four pairs = 72;
  // det [[g^2/f]] = (1/12)(1/6) - (1/2)(1/9) ... gives K_2 = 1.
  for (cplx cc : {cplx(1.0), c, cplx(0, -2.0)})
    CHECK(std::abs(izergin_k({2.0 * cc, 3.0 * cc}, {0.0, cc}, cc) - 1.0) < 1e-12);
  std::mt19937 rng(3);
  std::vector<cplx> x(3), y(3);
  for (auto& v : x) v = rnd(rng);
  for (auto& v : y) v = rnd(rng);
  const cplx k0 = izergin_k(x, y, c);
  auto xs = x;
  std::sort(xs.begin(), xs.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  do {
    auto ys = y;
    std::reverse(ys.begin(), ys.end());
    CHECK(std::abs(izergin_k(xs, y, c) - k0) < 1e-12 * std::max(1.0, std::abs(k0)));
    CHECK(std::abs(izergin_k(xs, ys, c) - k0) < 1e-12 * std::max(1.0, std::abs(k0)));
  } while (std::next_permutation(xs.begin(), xs.end(), [](cplx a, cplx b) { return a.real() < b.real(); }));
  CHECK_THROWS_AS(izergin_k({1.0}, {1.0, 2.0}, c), ArgumentError);
}

TEST_CASE("RTT residual") {
  LatticeParams p{1.0, 2, 1.0, 3};
  Model m = Model::tcbg_full(p);
  auto T = [&](cplx u) { return m.monodromy(u); };
  CHECK(rtt_residual(T, 0.4, -0.9, m.coupling(), m.space(), 1) < 1e-10);
  auto I = [&](cplx) { return AuxMatrix::identity(3, m.space().dim(), true); };
  CHECK(rtt_residual(I, 0.4, -0.9, m.coupling(), m.space(), 1) == 0.0);
  CHECK_THROWS_AS(rtt_residual(T, 0.4, -0.9, m.coupling(), m.space(), 2), ArgumentError);
  Model db = Model::discrete_boson(2, 3, 2.5);
  auto Td = [&](cplx u) { return db.monodromy(u); };
  CHECK(rtt_residual(Td, 0.7, cplx(-1.1, 0.3), -1.0, db.space(), 1) < 1e-10);
}
