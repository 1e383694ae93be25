#pragma once

// Operator series of the infinitesimal-lattice monodromy in powers of
// sqrt(kappa), the transposition antimorphism, and zero modes (exact
// Laurent coefficients at u = infinity plus windowed boundary modes).

#include <string>
#include <vector>

#include "nbgas/models.hpp"

namespace nbgas {

// term = kappa^{n/2} T_n(u), so that sum_n term = T(u).
struct SeriesTerm {
  int order = 0;
  AuxMatrix term;
};

// Terms of the W-expansion for the infinitesimal TCBG model; exact ordered
// lattice sums with r0 powers.
SeriesTerm series_term(const Model& model, cplx u, int n);
std::vector<SeriesTerm> series_terms(const Model& model, cplx u);

// Largest entry of the blocks that must vanish for this order: the
// off-diagonal blocks for even n, the diagonal ones for odd n.
double block_parity_residual(const SeriesTerm& t);

struct BlockSums {
  AuxMatrix upper;      // 2x2 upper-left block
  LocalOperator lower;  // (3,3) entry
};

// Even-order diagonal blocks written as explicit sums over ordered site
// tuples of field bilinears.
BlockSums block_sums(const Model& model, cplx u, int ell);

// Image of an operator under psi(n) -> -psi^dag(N+1-n),
// psi^dag(n) -> -psi(N+1-n), extended as an antimorphism.
LocalOperator field_antimorphism(const Model& model, const LocalOperator& x);

// Monodromy rebuilt from mapped, transposed and site-reversed L-operators,
// compared with T(u) entrywise on states with at most `max_total`
// particles (-1: cutoff - 2).
double antimorphism_residual(const Model& model, cplx u, int max_total = -1);

struct ZeroModes {
  AuxMatrix block;    // entries i,j below the last auxiliary index
  LocalOperator last; // last diagonal entry, after stripping r0^{-N}
};

// 1/u Laurent coefficients divided by c, from the denominator-cleared
// monodromy polynomial.
ZeroModes zero_modes_exact(const Model& model);

enum class Side { Left, Right };

// Entry (row, col) in GL(3) labels with exactly one label equal to 3.
struct BoundaryMode {
  int row = 1;
  int col = 3;
  Side side = Side::Right;
};

struct ModeEstimate {
  Vector value;
  double spread = 0.0;
  double sigma = 0.0;
  bool plateau = false;
};

// sigma_k = (2/Delta)(1 - 2^{-k}), k = 1..points.
std::vector<double> sigma_schedule(double spacing, int points = 20);

// (u/c) T(u) x at u = +-i sigma (times r0^{-N} on the lower half line),
// over the schedule; the plateau is the consecutive pair with the smallest
// difference.
ModeEstimate boundary_mode(const Model& model, const BoundaryMode& mode,
                           const Vector& x, const std::vector<double>& sigmas);

// The boundary field the mode should reproduce, applied to x.
Vector boundary_target(const Model& model, const BoundaryMode& mode, const Vector& x);

struct LocalRecord {
  std::string name;
  int row = 0;  // GL(3) labels
  int col = 0;
  double error = 0.0;
};

// Local fields at site m recovered from partial zero modes of sites 1..m:
// bilinears by a difference quotient, single fields from right modes.
// Errors are relative to the largest entry of the target.
std::vector<LocalRecord> local_operator_extraction(const Model& model, int m,
                                                   int max_total = -1);

// Least-squares slope of log(err) against log(h).
double fitted_order(const std::vector<double>& h, const std::vector<double>& err);

}  // namespace nbgas
