#include "nbgas/fock.hpp"

#include <cmath>
#include <string>

#include "nbgas/errors.hpp"

namespace nbgas {

void LatticeParams::validate() const {
  if (!(length > 0)) throw ArgumentError("lattice: length must be positive");
  if (sites < 1) throw ArgumentError("lattice: need at least one site");
  if (!(kappa > 0)) throw ArgumentError("lattice: kappa must be positive");
  if (cutoff < 0) throw ArgumentError("lattice: negative cutoff");
}

namespace {

void check_mode(const FockBasis& b, int color, int site) {
  if (color < 1 || color > 2)
    throw ArgumentError("colour must be 1 or 2, got " + std::to_string(color));
  if (site < 1 || site > b.sites())
    throw ArgumentError("site " + std::to_string(site) + " out of range");
}

}  // namespace

LocalOperator annihilator(const FockBasis& basis, int color, int site,
                          double spacing) {
  check_mode(basis, color, site);
  const int mode = 2 * (site - 1) + (color - 1);
  const double scale = 1.0 / std::sqrt(spacing);
  std::vector<Eigen::Triplet<cplx>> t;
  std::vector<int> occ;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const int n = basis.state(i)[mode];
    if (n == 0) continue;
    occ = basis.state(i);
    --occ[mode];
    const auto j = basis.index(occ);
    t.emplace_back(static_cast<Index>(*j), static_cast<Index>(i),
                   scale * std::sqrt(static_cast<double>(n)));
  }
  return LocalOperator::from_triplets(basis.dim(), basis.dense(), t, -1);
}

LocalOperator creator(const FockBasis& basis, int color, int site,
                      double spacing) {
  // Rows above the cutoff are absent from the basis: projection is implicit.
  return annihilator(basis, color, site, spacing).adjoint();
}

LocalOperator number(const FockBasis& basis, int site) {
  if (site < 1 || site > basis.sites())
    throw ArgumentError("site " + std::to_string(site) + " out of range");
  Vector d(static_cast<Index>(basis.dim()));
  for (std::size_t i = 0; i < basis.dim(); ++i)
    d[static_cast<Index>(i)] =
        basis.occupation(i, 1, site) + basis.occupation(i, 2, site);
  return LocalOperator::diagonal(d, basis.dense());
}

LocalOperator density(const FockBasis& basis, int site, double spacing) {
  return number(basis, site) * cplx(1.0 / spacing);
}

LocalOperator q_op(const FockBasis& basis, int site,
                   const LatticeParams& params) {
  const double k = params.kappa;
  const double dl = params.spacing();
  const LocalOperator n = number(basis, site);
  Vector d(static_cast<Index>(basis.dim()));
  for (Index i = 0; i < d.size(); ++i) {
    const double rho = n.coeff(i, i).real() / dl;
    d[i] = std::sqrt(k + k * k * dl * dl * rho / 4.0);
  }
  return LocalOperator::diagonal(d, basis.dense());
}

LocalOperator sqrt_m_rho(const FockBasis& basis, int site, cplx m) {
  const LocalOperator n = number(basis, site);
  Vector d(static_cast<Index>(basis.dim()));
  for (Index i = 0; i < d.size(); ++i) {
    const cplx arg = m + n.coeff(i, i);
    if (arg.real() < 0.0 && arg.imag() == 0.0)
      throw DomainError("sqrt(m + rho): negative argument on a retained state");
    d[i] = std::sqrt(arg);
  }
  return LocalOperator::diagonal(d, basis.dense());
}

namespace {

void check_spin_site(const SpinBasis& b, int site) {
  if (site < 1 || site > b.sites())
    throw ArgumentError("spin site " + std::to_string(site) + " out of range");
}

}  // namespace

LocalOperator sigma_minus(const SpinBasis& basis, int site) {
  check_spin_site(basis, site);
  std::vector<Eigen::Triplet<cplx>> t;
  const std::size_t bit = std::size_t{1} << (site - 1);
  for (std::size_t s = 0; s < basis.dim(); ++s)
    if (!(s & bit)) t.emplace_back(static_cast<Index>(s | bit), static_cast<Index>(s), 1.0);
  // Flipping a spin down raises the "total" (number of down spins).
  return LocalOperator::from_triplets(basis.dim(), basis.dense(), t, 1);
}

LocalOperator sigma_plus(const SpinBasis& basis, int site) {
  return sigma_minus(basis, site).adjoint();
}

LocalOperator sigma_z(const SpinBasis& basis, int site) {
  check_spin_site(basis, site);
  Vector d(static_cast<Index>(basis.dim()));
  for (std::size_t s = 0; s < basis.dim(); ++s)
    d[static_cast<Index>(s)] = basis.down(s, site) ? -1.0 : 1.0;
  return LocalOperator::diagonal(d, basis.dense());
}

}  // namespace nbgas
