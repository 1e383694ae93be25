#include "nbgas/structfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nbgas/errors.hpp"

namespace nbgas {

void pole_guard(cplx x, cplx y, const char* who) {
  const double scale = std::max({1.0, std::abs(x), std::abs(y)});
  if (std::abs(x - y) < 1e-12 * scale)
    throw PoleError(std::string(who) + ": coincident arguments");
}

cplx g_fun(cplx x, cplx y, cplx c) {
  pole_guard(x, y, "g");
  return c / (x - y);
}

cplx f_fun(cplx x, cplx y, cplx c) {
  pole_guard(x, y, "f");
  return (x - y + c) / (x - y);
}

cplx f_prod(cplx x, const std::vector<cplx>& ys, cplx c) {
  cplx p = 1.0;
  for (cplx y : ys) p *= f_fun(x, y, c);
  return p;
}

cplx f_prod(const std::vector<cplx>& xs, cplx y, cplx c) {
  cplx p = 1.0;
  for (cplx x : xs) p *= f_fun(x, y, c);
  return p;
}

cplx f_prod(const std::vector<cplx>& xs, const std::vector<cplx>& ys, cplx c) {
  cplx p = 1.0;
  for (cplx x : xs)
    for (cplx y : ys) p *= f_fun(x, y, c);
  return p;
}

cplx g_prod(const std::vector<cplx>& xs, const std::vector<cplx>& ys, cplx c) {
  cplx p = 1.0;
  for (cplx x : xs)
    for (cplx y : ys) p *= g_fun(x, y, c);
  return p;
}

cplx prod_of(const std::vector<cplx>& xs,
             const std::function<cplx(cplx)>& fn) {
  cplx p = 1.0;
  for (cplx x : xs) p *= fn(x);
  return p;
}

DenseMatrix permutation_matrix(int d) {
  DenseMatrix p = DenseMatrix::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) p(b * d + a, a * d + b) = 1.0;
  return p;
}

DenseMatrix r_matrix(cplx x, cplx y, cplx c, int d) {
  if (d != 2 && d != 3) throw ArgumentError("r_matrix: d must be 2 or 3");
  return DenseMatrix::Identity(d * d, d * d) + g_fun(x, y, c) * permutation_matrix(d);
}

namespace {

// Index of (a, b, e) in (C^d)^{(x)3}.
int idx3(int a, int b, int e, int d) { return (a * d + b) * d + e; }

// Embed an operator on factors (p, q) of a triple product.
DenseMatrix embed(const DenseMatrix& r, int d, int p, int q) {
  const int n = d * d * d;
  DenseMatrix out = DenseMatrix::Zero(n, n);
  for (int i0 = 0; i0 < d; ++i0)
    for (int i1 = 0; i1 < d; ++i1)
      for (int i2 = 0; i2 < d; ++i2)
        for (int j0 = 0; j0 < d; ++j0)
          for (int j1 = 0; j1 < d; ++j1)
            for (int j2 = 0; j2 < d; ++j2) {
              const int in[3] = {i0, i1, i2};
              const int jn[3] = {j0, j1, j2};
              const int spect = 3 - p - q;
              if (in[spect] != jn[spect]) continue;
              out(idx3(i0, i1, i2, d), idx3(j0, j1, j2, d)) =
                  r(in[p] * d + in[q], jn[p] * d + jn[q]);
            }
  return out;
}

}  // namespace

DenseMatrix embed12(const DenseMatrix& r, int d) { return embed(r, d, 0, 1); }
DenseMatrix embed23(const DenseMatrix& r, int d) { return embed(r, d, 1, 2); }
DenseMatrix embed13(const DenseMatrix& r, int d) { return embed(r, d, 0, 2); }

double ybe_residual(cplx x, cplx y, cplx z, cplx c, int d, double sign23) {
  const DenseMatrix r12 = embed12(r_matrix(x, y, c, d), d);
  const DenseMatrix r13 = embed13(r_matrix(x, z, c, d), d);
  const DenseMatrix r23 =
      embed23(DenseMatrix::Identity(d * d, d * d) +
                  sign23 * g_fun(y, z, c) * permutation_matrix(d),
              d);
  return spectral_norm(r12 * r13 * r23 - r23 * r13 * r12);
}

double unitarity_residual(cplx x, cplx y, cplx c, int d) {
  const DenseMatrix p = permutation_matrix(d);
  const DenseMatrix swapped = p * r_matrix(y, x, c, d) * p;
  const DenseMatrix lhs = r_matrix(x, y, c, d) * swapped;
  const cplx s = f_fun(x, y, c) * f_fun(y, x, c);
  return spectral_norm(lhs - s * DenseMatrix::Identity(d * d, d * d));
}

double rtt_residual(const MonodromyFn& T, cplx u, cplx v, cplx c,
                    const HilbertSpace& space, int sector) {
  if (auto p = space.cutoff(); p && sector > *p - 2)
    throw ArgumentError("rtt_residual: sector " + std::to_string(sector) +
                        " exceeds cutoff - 2");
  const cplx g = g_fun(u, v, c);
  const AuxMatrix tu = T(u);
  const AuxMatrix tv = T(v);
  const int d = tu.auxdim();
  const auto cols = space.sector(sector);
  const Index ncol = static_cast<Index>(cols.size());
  const Index dim = static_cast<Index>(space.dim());

  // Columns of T_{ab}(w) restricted to the sector, for reuse.
  auto cols_of = [&](const AuxMatrix& t) {
    std::vector<DenseMatrix> out(d * d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) out[a * d + b] = t(a, b).columns(cols);
    return out;
  };
  const auto cu = cols_of(tu);
  const auto cv = cols_of(tv);

  // Residual block (i1 i2),(j1 j2):
  //   T_{i1j1}(u)T_{i2j2}(v) + g T_{i2j1}(u)T_{i1j2}(v)
  // - T_{i2j2}(v)T_{i1j1}(u) - g T_{i2j1}(v)T_{i1j2}(u)
  DenseMatrix big = DenseMatrix::Zero(d * d * dim, d * d * ncol);
  for (int i1 = 0; i1 < d; ++i1)
    for (int i2 = 0; i2 < d; ++i2)
      for (int j1 = 0; j1 < d; ++j1)
        for (int j2 = 0; j2 < d; ++j2) {
          DenseMatrix blk = tu(i1, j1).apply(cv[i2 * d + j2]);
          blk += g * tu(i2, j1).apply(cv[i1 * d + j2]);
          blk -= tv(i2, j2).apply(cu[i1 * d + j1]);
          blk -= g * tv(i2, j1).apply(cu[i1 * d + j2]);
          big.block((i1 * d + i2) * dim, (j1 * d + j2) * ncol, dim, ncol) = blk;
        }
  return spectral_norm(big);
}

cplx izergin_k(const std::vector<cplx>& x, const std::vector<cplx>& y, cplx c) {
  const std::size_t n = x.size();
  if (n != y.size() || n == 0)
    throw ArgumentError("izergin_k: sets must have equal nonzero size");
  cplx pre = 1.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < j; ++k)
      pre *= g_fun(x[j], x[k], c) * g_fun(y[k], y[j], c);
  pre *= f_prod(x, y, c) / g_prod(x, y, c);
  DenseMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      const cplx g = g_fun(x[j], y[k], c);
      m(j, k) = g * g / f_fun(x[j], y[k], c);
    }
  return pre * m.determinant();
}

}  // namespace nbgas
