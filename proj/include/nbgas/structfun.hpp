#pragma once

// Rational structure functions of the rational GL(d) R-matrix, exchange
// relation residuals and the domain-wall partition function.

#include <functional>
#include <vector>

#include "nbgas/opalg.hpp"

namespace nbgas {

// Rejects |x - y| < 1e-12 max(1, |x|, |y|) with PoleError.
void pole_guard(cplx x, cplx y, const char* who);

cplx g_fun(cplx x, cplx y, cplx c);
cplx f_fun(cplx x, cplx y, cplx c);

// Fold helpers: products over sets, empty product = 1.
// f(x, ys) = prod_k f(x, ys[k]); f(xs, y) and f(xs, ys) likewise.
cplx f_prod(cplx x, const std::vector<cplx>& ys, cplx c);
cplx f_prod(const std::vector<cplx>& xs, cplx y, cplx c);
cplx f_prod(const std::vector<cplx>& xs, const std::vector<cplx>& ys, cplx c);
cplx g_prod(const std::vector<cplx>& xs, const std::vector<cplx>& ys, cplx c);
cplx prod_of(const std::vector<cplx>& xs, const std::function<cplx(cplx)>& fn);

// Permutation operator on C^d (x) C^d, basis index a*d + b.
DenseMatrix permutation_matrix(int d);
DenseMatrix r_matrix(cplx x, cplx y, cplx c, int d);

// Embeddings of an R-matrix on a pair of factors of (C^d)^{(x)3}.
DenseMatrix embed12(const DenseMatrix& r, int d);
DenseMatrix embed23(const DenseMatrix& r, int d);
DenseMatrix embed13(const DenseMatrix& r, int d);

// ||R12(x,y) R13(x,z) R23(y,z) - R23 R13 R12||. sign23 multiplies the
// g-part of R23 (1 for the genuine relation; -1 is a corrupted variant).
double ybe_residual(cplx x, cplx y, cplx z, cplx c, int d,
                    double sign23 = 1.0);
// ||R(x,y) P R(y,x) P - f(x,y) f(y,x) I||.
double unitarity_residual(cplx x, cplx y, cplx c, int d);

using MonodromyFn = std::function<AuxMatrix(cplx)>;

// Spectral norm of R T1(u) T2(v) - T2(v) T1(u) R restricted to input
// states of the sector. `space` supplies the totals; sector <= cutoff - 2.
double rtt_residual(const MonodromyFn& T, cplx u, cplx v, cplx c,
                    const HilbertSpace& space, int sector);

// Izergin determinant K_n(x|y).
cplx izergin_k(const std::vector<cplx>& x, const std::vector<cplx>& y, cplx c);

}  // namespace nbgas
