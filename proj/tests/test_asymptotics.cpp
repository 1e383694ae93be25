#include "doctest.h"

#include <cmath>

#include "nbgas/asymptotics.hpp"
#include "nbgas/errors.hpp"
#include "nbgas/solver.hpp"

using namespace nbgas;

namespace {

const StoragePolicy sparse{32, 2'000'000};

double on_sector(const LocalOperator& op, const Model& m, int tot) {
  return sector_norm(op, m.space().sector(tot));
}

LocalOperator lattice_bilinear(const Model& m, int i, int j) {
  const auto& b = *m.fock();
  LocalOperator t = LocalOperator::zero(b.dim(), b.dense());
  for (int n = m.first_site(); n <= m.last_site(); ++n)
    t += creator(b, i, n, m.spacing()) * annihilator(b, j, n, m.spacing());
  return t;
}

}  // namespace

TEST_CASE("series reproduces the infinitesimal monodromy") {
  const std::vector<cplx> us{cplx(0.7, -0.3), cplx(-1.2, 0.4), cplx(2.5, 0.1),
                             cplx(0.05, -1.1), cplx(-3.0, -0.2)};
  for (int n = 1; n <= 4; ++n) {
    Model s = Model::tcbg_small(LatticeParams{1.0, n, 1.3, 3});
    for (cplx u : us) {
      auto ts = series_terms(s, u);
      REQUIRE(ts.size() == static_cast<std::size_t>(n + 1));
      AuxMatrix sum = ts[0].term;
      for (int k = 1; k <= n; ++k) sum = sum + ts[k].term;
      CHECK(max_entry_difference(sum, s.monodromy(u)) < 1e-12);
      for (const auto& t : ts) CHECK(block_parity_residual(t) < 1e-14);
    }
  }
  Model s = Model::tcbg_small(LatticeParams{1.0, 3, 1.3, 2});
  const cplx u(0.4, 0.2);
  const cplx r0n = ipow(r0_fun(u, s.spacing()), 3);
  const auto t0 = series_term(s, u, 0);
  const std::size_t d = s.space().dim();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const cplx expect = i != j ? 0.0 : (i == 2 ? r0n : 1.0);
      CHECK((t0.term(i, j) - LocalOperator::identity(d, true, expect)).max_abs() < 1e-14);
    }
  // One site: the first-order term is the off-diagonal part of L.
  Model one = Model::tcbg_small(LatticeParams{1.0, 1, 1.3, 2});
  const auto t1 = series_term(one, u, 1);
  const AuxMatrix l = one.l_operator(1, u);
  for (int i = 0; i < 2; ++i) {
    CHECK((t1.term(i, 2) - l(i, 2)).max_abs() < 1e-14);
    CHECK((t1.term(2, i) - l(2, i)).max_abs() < 1e-14);
  }
  CHECK_THROWS_AS(series_term(s, u, 4), ArgumentError);
  CHECK_THROWS_AS(series_term(Model::tcbg_full(LatticeParams{1.0, 2, 1.0, 2}), u, 0), ArgumentError);
  CHECK_THROWS_AS(series_terms(s, cplx(0.0, 2.0 / s.spacing())), PoleError);
}

TEST_CASE("block sums equal the even-order diagonal blocks") {
  const cplx u(0.7, -0.3);
  for (int n = 2; n <= 4; ++n) {
    Model s = Model::tcbg_small(LatticeParams{1.0, n, 1.3, 3});
    auto ts = series_terms(s, u);
    for (int ell = 1; 2 * ell <= n; ++ell) {
      const BlockSums b = block_sums(s, u, ell);
      // Normal ordering differs from the product order only on the top
      // particle-number sector of the truncated space.
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          CHECK(on_sector(b.upper(i, j) - ts[2 * ell].term(i, j), s, 2) < 1e-12);
      CHECK(on_sector(b.lower - ts[2 * ell].term(2, 2), s, 2) < 1e-12);
    }
  }
  Model s = Model::tcbg_small(LatticeParams{1.0, 3, 1.0, 2});
  const BlockSums big = block_sums(s, u, 2);
  CHECK(big.lower.max_abs() == 0.0);
  CHECK(big.upper(0, 1).max_abs() == 0.0);
  const Vector vac = s.vacuum();
  CHECK(std::abs(vac.dot(block_sums(s, u, 1).lower.apply(vac))) < 1e-15);
  CHECK_THROWS_AS(block_sums(s, u, 0), ArgumentError);
}

TEST_CASE("field antimorphism") {
  Model f = Model::tcbg_full(LatticeParams{1.0, 3, 1.0, 3});
  const auto& b = *f.fock();
  const double dl = f.spacing();
  for (int c = 1; c <= 2; ++c)
    for (int n = 1; n <= 3; ++n) {
      const LocalOperator psi = annihilator(b, c, n, dl);
      CHECK((field_antimorphism(f, psi) + creator(b, c, 4 - n, dl)).max_abs() < 1e-14);
      CHECK((field_antimorphism(f, psi.adjoint()) + annihilator(b, c, 4 - n, dl)).max_abs() < 1e-14);
    }
  const LocalOperator x = creator(b, 1, 1, dl) * annihilator(b, 2, 3, dl);
  const LocalOperator y = annihilator(b, 1, 2, dl) + number(b, 2);
  CHECK((field_antimorphism(f, x * y) - field_antimorphism(f, y) * field_antimorphism(f, x))
            .max_abs() < 1e-13);

  for (cplx u : {cplx(0.7, -0.3), cplx(-1.5, 0.8)}) {
    for (int n = 1; n <= 3; ++n) {
      CHECK(antimorphism_residual(Model::tcbg_small(LatticeParams{1.0, n, 1.3, 3}), u) < 1e-12);
      CHECK(antimorphism_residual(Model::tcbg_full(LatticeParams{1.0, n, 1.3, 3}), u) < 1e-12);
    }
  }
  CHECK_THROWS_AS(antimorphism_residual(Model::gl2_full(LatticeParams{1.0, 2, 1.0, 2}), 0.3),
                  ArgumentError);
  CHECK_THROWS_AS(antimorphism_residual(f.slice(1, 2), 0.3), ArgumentError);
}

TEST_CASE("exact zero modes") {
  for (int n : {1, 2, 4, 8}) {
    Model f = Model::tcbg_full(LatticeParams{1.0, n, 0.8, 2}, sparse);
    const ZeroModes zm = zero_modes_exact(f);
    CHECK((zm.block(0, 0) + zm.block(1, 1) + zm.last).max_abs() < 1e-12);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        CHECK((zm.block(i, j) + lattice_bilinear(f, i + 1, j + 1) * f.spacing()).max_abs() < 1e-12);
        CHECK(zm.block(i, j).respects_grading(f.space(), 1e-14));
      }
    CHECK((zm.last - (lattice_bilinear(f, 1, 1) + lattice_bilinear(f, 2, 2)) * f.spacing())
              .max_abs() < 1e-12);
  }
  // The colour-2 density mode agrees with the one-component model.
  const LatticeParams lp{1.0, 3, 0.8, 2};
  const ZeroModes full = zero_modes_exact(Model::tcbg_full(lp));
  const ZeroModes one = zero_modes_exact(Model::gl2_full(lp));
  CHECK((full.block(1, 1) - one.block(0, 0)).max_abs() < 1e-12);
  CHECK_THROWS_AS(zero_modes_exact(Model::xxx_chain(2, {}, cplx(0, -1))), ArgumentError);
}

TEST_CASE("lowering zero mode annihilates on-shell vectors") {
  Model f = Model::tcbg_full(LatticeParams{1.0, 4, 1.0, 3});
  auto sys = BetheSystem::from_model(f, 1, 2);
  auto rep = solve_bethe(sys, {{cplx(3.0, -0.3)}, {cplx(1.0), cplx(7.0)}, sys.c});
  REQUIRE(rep.converged);
  const Vector on = bethe_vector(f, rep.roots);
  const ZeroModes zm = zero_modes_exact(f);
  CHECK(zm.block(1, 0).apply(on).norm() < 1e-8 * on.norm());
  BetheParams off = rep.roots;
  off.u[0] += 0.3;
  const Vector bo = bethe_vector(f, off);
  CHECK(zm.block(1, 0).apply(bo).norm() > 1e-3 * bo.norm());
}

TEST_CASE("windowed boundary modes") {
  const auto sig = sigma_schedule(0.25, 20);
  CHECK(sig.size() == 20);
  for (std::size_t k = 0; k + 1 < sig.size(); ++k) CHECK(sig[k] < sig[k + 1]);
  CHECK(sig.back() < 8.0);

  Model f = Model::tcbg_full(LatticeParams{1.0, 4, 1.0, 2}, sparse);
  const Vector vac = f.vacuum();
  for (int j : {1, 2}) {
    const auto est = boundary_mode(f, {3, j, Side::Right}, vac, sigma_schedule(f.spacing()));
    CHECK(est.value.norm() == 0.0);
    CHECK(est.plateau);
  }
  // Single quantum at the right end created from the vacuum: the schedule
  // runs into the lattice limit, so only the plateau precision remains.
  std::vector<double> err, hs;
  for (int n : {4, 8, 16}) {
    Model m = Model::tcbg_full(LatticeParams{1.0, n, 1.0, 1}, sparse);
    const BoundaryMode mode{2, 3, Side::Right};
    const auto est = boundary_mode(m, mode, m.vacuum(), sigma_schedule(m.spacing()));
    const Vector target = boundary_target(m, mode, m.vacuum());
    CHECK(est.plateau);
    hs.push_back(m.spacing());
    err.push_back((est.value - target).norm() / target.norm());
    CHECK(err.back() < 1e-5);
    CHECK(err.back() <= est.spread);
  }

  // Left plus right modes annihilate on-shell vectors as Delta -> 0.
  err.clear();
  for (int n : {4, 8, 16}) {
    Model m = Model::tcbg_full(LatticeParams{1.0, n, 1.0, 2}, sparse);
    auto sys = BetheSystem::from_model(m, 0, 2);
    auto rep = solve_bethe(sys, {{}, {cplx(1.0), cplx(7.0)}, sys.c});
    REQUIRE(rep.converged);
    const Vector b = bethe_vector(m, rep.roots);
    const auto s = sigma_schedule(m.spacing());
    const auto r = boundary_mode(m, {3, 2, Side::Right}, b, s);
    const auto l = boundary_mode(m, {3, 2, Side::Left}, b, s);
    err.push_back((r.value + l.value).norm() / r.value.norm());
  }
  CHECK(err[1] < 0.6 * err[0]);
  CHECK(err[2] < 0.6 * err[1]);
  CHECK(fitted_order(hs, err) > 0.9);

  CHECK_THROWS_AS(boundary_mode(f, {3, 3, Side::Right}, vac, sig), ArgumentError);
  CHECK_THROWS_AS(boundary_mode(f, {1, 2, Side::Right}, vac, sig), ArgumentError);
  CHECK_THROWS_AS(boundary_mode(Model::gl2_full(LatticeParams{1.0, 2, 1.0, 2}),
                                {1, 3, Side::Right}, vac, sig),
                  ArgumentError);
}

TEST_CASE("local operators from partial zero modes") {
  std::vector<double> hs, err;
  for (int n : {2, 4, 8}) {
    Model f = Model::tcbg_full(LatticeParams{1.0, n, 1.0, 2}, sparse);
    double creation = 0.0;
    for (int m : {1, n / 2, n}) {
      for (const auto& r : local_operator_extraction(f, m)) {
        if (r.name == "bilinear") CHECK(r.error < 1e-12);
        if (r.name == "annihilation") CHECK(r.error < 1e-5);
        if (r.name == "creation") creation = std::max(creation, r.error);
      }
    }
    hs.push_back(f.spacing());
    err.push_back(creation);
  }
  CHECK(fitted_order(hs, err) > 0.9);
  Model f = Model::tcbg_full(LatticeParams{1.0, 2, 1.0, 2});
  CHECK_THROWS_AS(local_operator_extraction(f, 0), ArgumentError);
  CHECK_THROWS_AS(local_operator_extraction(f, 3), ArgumentError);
}

TEST_CASE("convergence order fit") {
  const std::vector<double> h{0.25, 0.125, 0.0625};
  CHECK(fitted_order(h, {3 * 0.0625, 3 * 0.015625, 3 * 0.00390625}) == doctest::Approx(2.0));
  CHECK(fitted_order(h, {0.5, 0.25, 0.125}) == doctest::Approx(1.0));
  CHECK(std::isnan(fitted_order(h, {0.5, 0.0, 0.1})));
  CHECK_THROWS_AS(fitted_order({0.1}, {0.2}), ArgumentError);
}
