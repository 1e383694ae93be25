#pragma once

// Lattice Bose fields on the truncated two-colour basis, and spin-1/2
// operators on a chain. Colours and sites are 1-based.

#include "nbgas/opalg.hpp"

namespace nbgas {

struct LatticeParams {
  double length = 1.0;  // L
  int sites = 3;        // N
  double kappa = 1.0;   // coupling, > 0
  int cutoff = 3;       // global particle cutoff P

  double spacing() const { return length / sites; }
  cplx coupling() const { return cplx(0.0, -kappa); }  // c = -i kappa
  void validate() const;
};

// Delta^{-1/2} a_k(n); pass spacing = 1 for the bare a_k(n).
LocalOperator annihilator(const FockBasis& basis, int color, int site,
                          double spacing);
LocalOperator creator(const FockBasis& basis, int color, int site,
                      double spacing);
// (n_1(n) + n_2(n)) / Delta.
LocalOperator density(const FockBasis& basis, int site, double spacing);
// Integer occupation a_1^+a_1 + a_2^+a_2 at a site.
LocalOperator number(const FockBasis& basis, int site);
// (kappa + kappa^2 Delta^2 rho_n / 4)^{1/2}, diagonal.
LocalOperator q_op(const FockBasis& basis, int site,
                   const LatticeParams& params);
// (m + rho)^{1/2} with integer rho; requires Re(m + rho) >= 0 on the basis.
LocalOperator sqrt_m_rho(const FockBasis& basis, int site, cplx m);

// Pauli-type operators on site n of a spin chain: sigma^+ raises the
// spin (down -> up), sigma^- lowers it.
LocalOperator sigma_plus(const SpinBasis& basis, int site);
LocalOperator sigma_minus(const SpinBasis& basis, int site);
LocalOperator sigma_z(const SpinBasis& basis, int site);

}  // namespace nbgas
