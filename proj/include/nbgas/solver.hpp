#pragma once

// Nested Bethe equations in logarithmic form, a damped Newton solver for
// them and on-shell certification through the transfer matrix.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nbgas/bethe.hpp"
#include "nbgas/models.hpp"

namespace nbgas {

enum class BetheVariant { GenericGl3, TcbgContinuum, TcbgLattice };

struct BetheSystem {
  int a = 0;
  int b = 0;
  cplx c{};
  BetheVariant variant = BetheVariant::GenericGl3;
  std::function<cplx(cplx)> r1;
  std::function<cplx(cplx)> r3;
  double length = 1.0;  // continuum
  int sites = 0;        // lattice
  double spacing = 0.0;

  // r1 = 1, r3 = e^{iLu}, c = -i kappa.
  static BetheSystem continuum(int a, int b, double length, double kappa);
  // r1 = 1, r3 = r0^N.
  static BetheSystem lattice(int a, int b, const LatticeParams& p);
  static BetheSystem generic(int a, int b, cplx c, std::function<cplx(cplx)> r1,
                             std::function<cplx(cplx)> r3);
  // Vacuum ratios taken from a model (lattice variant for the TCBG models).
  static BetheSystem from_model(const Model& model, int a, int b);

  // Logarithms of the vacuum ratios; exact (unwrapped) where known.
  cplx log_r1(cplx u) const;
  cplx log_r3(cplx v) const;
};

// log(LHS) - log(RHS) of every equation, first the a equations for u,
// then the b equations for v. Each entry is reduced to the principal
// strip |Im| <= pi, so an exact root gives zeros.
std::vector<cplx> bethe_residual(const BetheSystem& sys, const std::vector<cplx>& u,
                                 const std::vector<cplx>& v);
// Same sums without the reduction modulo 2 pi i.
std::vector<cplx> bethe_residual_unreduced(const BetheSystem& sys,
                                           const std::vector<cplx>& u,
                                           const std::vector<cplx>& v);

struct SolveConfig {
  int max_iterations = 200;
  double tolerance = 1e-10;
  double collision = 1e-8;
  // Iterates running off beyond this modulus are reported as divergent.
  double escape = 1e6;
  double fd_step = 1e-7;
  int max_halvings = 40;
};

struct SolveReport {
  BetheParams roots;
  double residual_inf = 0.0;
  int iterations = 0;
  bool converged = false;
  double collision_margin = 0.0;
  std::string message;
};

SolveReport solve_bethe(const BetheSystem& sys, const BetheParams& initial,
                        const SolveConfig& config = {});

// Runs every seed (in parallel with `workers` threads) and keeps distinct
// converged roots; sets closer than `dedup` after sorting are merged.
std::vector<SolveReport> solve_seeds(const BetheSystem& sys,
                                     const std::vector<BetheParams>& seeds,
                                     const SolveConfig& config, int workers,
                                     double dedup = 1e-6);

// Minimum pairwise distance inside each parameter set (infinity if none).
double collision_margin(const BetheParams& p);

// max over probes w of ||t(w)B - q B|| / ||t(w)B||, with q the Rayleigh
// quotient and t(w) = tr T(w).
double certify_onshell(const Model& model, const BetheParams& params,
                       const std::vector<cplx>& probes);

// Rayleigh quotient of tr T(w) on x.
cplx transfer_rayleigh(const Model& model, cplx w, const Vector& x);

// ||t(w1)t(w2)x - t(w2)t(w1)x|| / ||t(w1)t(w2)x||.
double transfer_commutator(const Model& model, cplx w1, cplx w2, const Vector& x);

}  // namespace nbgas
