#pragma once

// Bethe vectors: the algebraic partition-sum forms (nested and GL(2)),
// spin-chain coordinate coefficients and the lattice/continuum
// coordinate forms of the two-component gas.

#include <functional>
#include <map>
#include <vector>

#include "nbgas/models.hpp"

namespace nbgas {

// y = T_ij(u) x with GL(3) labels i, j in {0, 1, 2}.
using EntryAction = std::function<Vector(int, int, cplx, const Vector&)>;

EntryAction entry_action(const Model& model);

struct BetheParams {
  std::vector<cplx> u;
  std::vector<cplx> v;
  cplx c{};
};

// Throws PoleError if two parameters of one set coincide.
void require_distinct(const std::vector<cplx>& w, const char* what);

// All k-element subsets of {0..n-1}, as increasing index lists, in
// lexicographic order.
std::vector<std::vector<int>> subsets(int n, int k);
// Split w by a subset of positions into (chosen, rest), order kept.
std::pair<std::vector<cplx>, std::vector<cplx>> split_by(
    const std::vector<cplx>& w, const std::vector<int>& chosen);

// T_ij(w_1) ... T_ij(w_k) x, the rightmost factor acting first.
Vector apply_product(const EntryAction& T, int i, int j,
                     const std::vector<cplx>& w, Vector x);

// Double partition sum with domain-wall weights, acting on `ref`.
Vector bv_gl3(const EntryAction& T, const BetheParams& p, const Vector& ref);
// Single-set sum valid when T_12 annihilates `ref` (checked when
// `check` is set); zero for a > b.
Vector bv_tcbg(const EntryAction& T, const BetheParams& p, const Vector& ref,
               bool check = true);
// Product of one creation entry over w.
Vector bv_gl2(const EntryAction& T, int i, int j, const std::vector<cplx>& w,
              const Vector& ref);

// Bethe vector of a model on its vacuum: the single-set form for 3x3
// models, T_12 products for the spin chain, T_23 products for 2x2 bosons.
Vector bethe_vector(const Model& model, const BetheParams& p);
Vector bethe_vector(const Model& model, const BetheParams& p, const Vector& ref);

using SpinAmplitudeMap = std::map<std::vector<int>, cplx>;

// Coordinate coefficient for down spins at sites j (1-based, increasing).
cplx omega(const std::vector<int>& j, const std::vector<cplx>& u,
           const std::vector<cplx>& xi, cplx c);
SpinAmplitudeMap omega_coeffs(const std::vector<cplx>& u,
                              const std::vector<cplx>& xi, cplx c);
// sum_j Omega_j prod sigma^-_{j_m} |up...up>.
Vector spin_state(const SpinBasis& basis, const SpinAmplitudeMap& amps);

// Continuum coordinate wave function at ordered points z, colour-1
// positions k (1-based, increasing), c = -i kappa.
cplx chi_wavefunction(const std::vector<int>& k, const std::vector<double>& z,
                      const std::vector<cplx>& u, const std::vector<cplx>& v,
                      double kappa);

// Nested lattice sum with r0 powers and single creation operators per
// site; 2x2 boson models use colour 2 only (u must be empty).
Vector lattice_coordinate_bv(const Model& model, const BetheParams& p);
// Coefficient of psi1^+ ... psi2^+ |0> in the same sum, for sites j
// (1-based increasing) and colour-1 positions k.
cplx lattice_coordinate_coefficient(const Model& model, const BetheParams& p,
                                    const std::vector<int>& j,
                                    const std::vector<int>& k);

// ||P(B - C)|| / ||P C|| with B the algebraic and C the lattice coordinate
// vector, P the projection on states with at most one particle per site.
// No normalization is fitted.
double coordinate_mismatch(const Model& model, const BetheParams& p);

// Largest relative deviation of the lattice coordinate amplitude (prefactor
// removed) from the continuum wave function at the points z, which must be
// lattice sites; taken over all colour-1 placements.
double chi_mismatch(const Model& model, const BetheParams& p,
                    const std::vector<double>& z);

// Occupation-number histogram of a vector: weight per (n1, n2) totals.
std::map<std::pair<int, int>, double> color_content(const FockBasis& basis,
                                                    const Vector& x);

}  // namespace nbgas
