#include "nbgas/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "nbgas/bethe.hpp"
#include "nbgas/errors.hpp"

namespace nbgas {

namespace {

bool lattice_kind(ModelKind k) {
  return k == ModelKind::TcbgFull || k == ModelKind::TcbgSmall ||
         k == ModelKind::Gl2Full || k == ModelKind::Gl2Small;
}

const FockBasis& fock_of(const Model& model, const char* what) {
  if (!model.fock()) throw ArgumentError(std::string(what) + ": boson model required");
  return *model.fock();
}

void require_small(const Model& model, const char* what) {
  if (model.kind() != ModelKind::TcbgSmall)
    throw ArgumentError(std::string(what) + ": defined for the infinitesimal TCBG model");
}

// a = 1 - iu Delta/2, d = 1 + iu Delta/2.
std::pair<cplx, cplx> ad_pair(const Model& model, cplx u) {
  const cplx h = I_unit * u * model.spacing() / 2.0;
  if (std::abs(1.0 - h) < 1e-14 || std::abs(1.0 + h) < 1e-14)
    throw PoleError("series: u at +-2i/Delta");
  return {1.0 - h, 1.0 + h};
}

int default_total(const Model& model, int max_total, int shift) {
  if (max_total >= 0) return max_total;
  const auto cut = model.space().cutoff();
  return cut ? std::max(0, *cut - shift) : 1 << 30;
}

double sector_max(const LocalOperator& op, const std::vector<Index>& sector) {
  const DenseMatrix m = op.columns(sector);
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace

std::vector<SeriesTerm> series_terms(const Model& model, cplx u) {
  require_small(model, "series_terms");
  const auto [a, d] = ad_pair(model, u);
  const cplx r0 = d / a;
  const int n_sites = model.length();
  const std::size_t dim = model.space().dim();
  const bool dense = model.space().dense();

  // p[m] = sum over k_m > ... > k_1 <= j of tW_{k_m} ... tW_{k_1}.
  std::vector<AuxMatrix> p(static_cast<std::size_t>(n_sites + 1), AuxMatrix(3, dim, dense));
  p[0] = AuxMatrix::identity(3, dim, dense);
  for (int k = 1; k <= n_sites; ++k) {
    const SitePencil& sp = model.pencil(model.first_site() + k - 1);
    AuxMatrix w(3, dim, dense);
    for (int i = 0; i < 2; ++i) {
      w(i, 2) = sp.constant(i, 2) * (ipow(r0, k) / d);
      w(2, i) = sp.constant(2, i) * (ipow(r0, -k) / a);
    }
    for (int m = k; m >= 1; --m) p[m] = p[m] + compose(w, p[m - 1]);
  }
  std::vector<SeriesTerm> out;
  const cplx lead = ipow(r0, n_sites);
  for (int m = 0; m <= n_sites; ++m) {
    AuxMatrix t = p[m];
    for (int j = 0; j < 3; ++j) t(2, j) = t(2, j) * lead;
    out.push_back({m, std::move(t)});
  }
  return out;
}

SeriesTerm series_term(const Model& model, cplx u, int n) {
  if (n < 0 || n > model.length())
    throw ArgumentError("series_term: order out of range");
  return series_terms(model, u)[static_cast<std::size_t>(n)];
}

double block_parity_residual(const SeriesTerm& t) {
  double r = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const bool diagonal_block = (i < 2) == (j < 2);
      if (diagonal_block == (t.order % 2 == 1)) r = std::max(r, t.term(i, j).max_abs());
    }
  return r;
}

BlockSums block_sums(const Model& model, cplx u, int ell) {
  require_small(model, "block_sums");
  if (ell < 1) throw ArgumentError("block_sums: need ell >= 1");
  const auto [a, d] = ad_pair(model, u);
  const cplx r0 = d / a;
  const auto& basis = fock_of(model, "block_sums");
  const int n_sites = model.length();
  const std::size_t dim = basis.dim();
  const bool dense = basis.dense();
  const double dl = model.spacing();
  BlockSums out{AuxMatrix(2, dim, dense), LocalOperator::zero(dim, dense)};
  if (2 * ell > n_sites) return out;

  // psi[s][k], psid[s][k]: colour s+1 at relative site k+1.
  std::vector<std::vector<LocalOperator>> psi(2), psid(2);
  for (int s = 0; s < 2; ++s)
    for (int k = 0; k < n_sites; ++k) {
      psi[s].push_back(annihilator(basis, s + 1, model.first_site() + k, dl));
      psid[s].push_back(psi[s].back().adjoint());
    }
  auto hop = [&](int from, int to) {  // sum_s psi^dag_s(from) psi_s(to)
    return psid[0][from] * psi[0][to] + psid[1][from] * psi[1][to];
  };
  const cplx pref = ipow(model.lattice().kappa * dl * dl / (a * d), ell);
  const LocalOperator id = LocalOperator::identity(dim, dense);

  for (const auto& k : subsets(n_sites, 2 * ell)) {
    // k[0] < k[1] < ...: k[m] is k_{m+1}; all sites distinct, so the
    // products below are already normal ordered.
    int up = 0;
    for (int i = 0; i < ell; ++i) up += k[2 * i + 1] - k[2 * i];
    LocalOperator mid = id;
    for (int i = 1; i < ell; ++i) mid = mid * hop(k[2 * i - 1], k[2 * i]);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        out.upper(i, j) += psid[i][k[2 * ell - 1]] * mid * psi[j][k[0]] * (pref * ipow(r0, up));
    LocalOperator low = id;
    for (int i = 0; i < ell; ++i) low = low * hop(k[2 * i], k[2 * i + 1]);
    out.lower += low * (pref * ipow(r0, n_sites - up));
  }
  return out;
}

LocalOperator field_antimorphism(const Model& model, const LocalOperator& x) {
  const auto& basis = fock_of(model, "field_antimorphism");
  const int n = basis.sites();
  // U|s> = (-1)^{total(s)} |reflected s>; phi(x) = U x^T U^T.
  std::vector<Eigen::Triplet<cplx>> entries;
  for (std::size_t s = 0; s < basis.dim(); ++s) {
    const auto& occ = basis.state(s);
    std::vector<int> ref(occ.size());
    for (int site = 0; site < n; ++site)
      for (int c = 0; c < 2; ++c) ref[2 * (n - 1 - site) + c] = occ[2 * site + c];
    entries.emplace_back(static_cast<Index>(*basis.index(ref)), static_cast<Index>(s),
                         basis.total(s) % 2 ? -1.0 : 1.0);
  }
  const LocalOperator u = LocalOperator::from_triplets(basis.dim(), x.is_dense(), entries, 0);
  return u * x.transpose() * u.transpose();
}

double antimorphism_residual(const Model& model, cplx u, int max_total) {
  const auto& basis = fock_of(model, "antimorphism_residual");
  if (model.kind() != ModelKind::TcbgFull && model.kind() != ModelKind::TcbgSmall)
    throw ArgumentError("antimorphism_residual: TCBG model required");
  if (model.first_site() != 1 || model.last_site() != basis.sites())
    throw ArgumentError("antimorphism_residual: whole chain required");
  // phi(T_jk) = sum phi(L_1(.,k)) ... phi(L_N(j,.)) = (M_1^T ... M_N^T)_kj
  // with M_n the entrywise image of L_n; it should reproduce T_kj.
  AuxMatrix acc;
  for (int n = model.last_site(); n >= model.first_site(); --n) {
    const AuxMatrix l = model.l_operator(n, u);
    AuxMatrix mt(3, l.dim(), l.dense());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) mt(i, j) = field_antimorphism(model, l(j, i));
    acc = n == model.last_site() ? mt : compose(mt, acc);
  }
  const int tot = default_total(model, max_total, 2);
  return max_entry_difference(acc, model.monodromy(u), model.space().sector(tot));
}

ZeroModes zero_modes_exact(const Model& model) {
  if (!lattice_kind(model.kind()))
    throw ArgumentError("zero_modes_exact: lattice boson model required");
  const int n = model.length();
  const int last = model.auxdim() - 1;
  const std::size_t dim = model.space().dim();
  const bool dense = model.space().dense();
  const double dl = model.spacing();
  const cplx c = model.coupling();
  // Two leading coefficients of prod_n (A_n + u B_n), multiplied in from
  // the left site by site: q0 -> B q0, q1 -> B q1 + A q0.
  AuxMatrix q0 = AuxMatrix::identity(model.auxdim(), dim, dense);
  AuxMatrix q1(model.auxdim(), dim, dense);
  for (int site = model.first_site(); site <= model.last_site(); ++site) {
    const SitePencil& sp = model.pencil(site);
    q1 = compose(sp.linear, q1) + compose(sp.constant, q0);
    q0 = compose(sp.linear, q0);
  }

  // T = Q(u) / (u^N (s + z)^N), s = 1/u: t0 = Q_N / z^N and
  // t1 = (Q_{N-1} - N z^{N-1} t0) / z^N.
  auto laurent = [&](const LocalOperator& lead, const LocalOperator& next, cplx z,
                     bool diagonal) {
    const cplx d0 = ipow(z, n);
    const LocalOperator t0 = lead * (1.0 / d0);
    const LocalOperator expect = diagonal ? LocalOperator::identity(dim, dense)
                                          : LocalOperator::zero(dim, dense);
    if ((t0 - expect).max_abs() > 1e-8)
      throw StructuralError("zero_modes_exact: unexpected leading behaviour at u = infinity");
    return (next - t0 * (static_cast<double>(n) * ipow(z, n - 1))) * (1.0 / (d0 * c));
  };
  ZeroModes zm{AuxMatrix(last, dim, dense), LocalOperator::zero(dim, dense)};
  const cplx alpha = -I_unit * dl / 2.0;
  for (int i = 0; i < last; ++i)
    for (int j = 0; j < last; ++j) zm.block(i, j) = laurent(q0(i, j), q1(i, j), alpha, i == j);
  zm.last = laurent(q0(last, last), q1(last, last), -alpha, true);
  return zm;
}

std::vector<double> sigma_schedule(double spacing, int points) {
  std::vector<double> out;
  for (int k = 1; k <= points; ++k) out.push_back(2.0 / spacing * (1.0 - std::ldexp(1.0, -k)));
  return out;
}

namespace {

struct ModeSetup {
  int i, j;      // auxiliary indices
  int color;     // colour label of the non-last index
  bool creation; // entry in the last column
  bool lower;    // evaluated at u = -i sigma, stripped by r0^{-N}
};

ModeSetup setup(const Model& model, const BoundaryMode& mode) {
  if (!lattice_kind(model.kind()))
    throw ArgumentError("boundary modes: lattice boson model required");
  if ((mode.row == 3) == (mode.col == 3))
    throw ArgumentError("boundary modes: exactly one label must be 3");
  const auto i = model.aux_index(mode.row - 1), j = model.aux_index(mode.col - 1);
  if (!i || !j) throw ArgumentError("boundary modes: label not present in this model");
  ModeSetup s{*i, *j, mode.col == 3 ? mode.row : mode.col, mode.col == 3, false};
  s.lower = s.creation == (mode.side == Side::Right);
  return s;
}

}  // namespace

ModeEstimate boundary_mode(const Model& model, const BoundaryMode& mode,
                           const Vector& x, const std::vector<double>& sigmas) {
  const ModeSetup s = setup(model, mode);
  if (sigmas.size() < 2) throw ArgumentError("boundary_mode: need at least two sigma values");
  std::vector<Vector> vals;
  for (double sg : sigmas) {
    const cplx u = s.lower ? cplx(0.0, -sg) : cplx(0.0, sg);
    Vector e = model.apply_entry(s.i, s.j, u, x) * (u / model.coupling());
    if (s.lower) e *= ipow(r0_fun(u, model.spacing()), -model.length());
    vals.push_back(std::move(e));
  }
  ModeEstimate best;
  best.spread = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
    const double dk = (vals[k + 1] - vals[k]).norm();
    if (dk < best.spread) {
      best.spread = dk;
      best.value = vals[k + 1];
      best.sigma = sigmas[k + 1];
    }
  }
  const double scale = best.value.norm();
  best.plateau = best.spread <= 1e-4 * scale || scale == 0.0;
  return best;
}

Vector boundary_target(const Model& model, const BoundaryMode& mode, const Vector& x) {
  const ModeSetup s = setup(model, mode);
  const auto& basis = fock_of(model, "boundary_target");
  const int site = mode.side == Side::Right ? model.last_site() : model.first_site();
  LocalOperator field = annihilator(basis, s.color, site, model.spacing());
  if (s.creation) field = field.adjoint();
  const cplx pref = (mode.side == Side::Right ? 1.0 : -1.0) /
                    (I_unit * std::sqrt(model.lattice().kappa));
  return field.apply(x) * pref;
}

std::vector<LocalRecord> local_operator_extraction(const Model& model, int m,
                                                   int max_total) {
  if (!lattice_kind(model.kind()))
    throw ArgumentError("local_operator_extraction: lattice boson model required");
  if (m < 1 || m > model.length())
    throw ArgumentError("local_operator_extraction: site out of range");
  const auto& basis = *model.fock();
  const int site = model.first_site() + m - 1;
  const Model part = model.slice(model.first_site(), site);
  const ZeroModes zm = zero_modes_exact(part);
  const int last = model.auxdim() - 1;
  const std::size_t dim = basis.dim();
  const bool dense = basis.dense();
  AuxMatrix prev(last, dim, dense);
  if (m > 1) prev = zero_modes_exact(model.slice(model.first_site(), site - 1)).block;
  const auto sector = model.space().sector(default_total(model, max_total, 1));
  const double dl = model.spacing();

  // GL(3) label of each block index.
  std::vector<int> labels;
  for (int l = 1; l <= 3; ++l)
    if (auto k = model.aux_index(l - 1); k && *k < last) labels.push_back(l);

  std::vector<LocalRecord> out;
  for (int i = 0; i < last; ++i)
    for (int j = 0; j < last; ++j) {
      const LocalOperator dq = (zm.block(i, j) - prev(i, j)) * (1.0 / dl);
      const LocalOperator target = annihilator(basis, labels[i], site, dl).adjoint() *
                                   annihilator(basis, labels[j], site, dl);
      const double scale = std::max(sector_max(target, sector), 1e-300);
      out.push_back({"bilinear", labels[i], labels[j], sector_max(dq + target, sector) / scale});
    }
  const auto sigmas = sigma_schedule(dl);
  for (int l : labels)
    for (bool creation : {false, true}) {
      const BoundaryMode mode{creation ? l : 3, creation ? 3 : l, Side::Right};
      double err = 0.0, scale = 1e-300;
      for (Index col : sector) {
        const Vector e = basis_vector(dim, static_cast<std::size_t>(col));
        const Vector target = boundary_target(part, mode, e);
        const ModeEstimate est = boundary_mode(part, mode, e, sigmas);
        err = std::max(err, (est.value - target).cwiseAbs().maxCoeff());
        scale = std::max(scale, target.cwiseAbs().maxCoeff());
      }
      out.push_back({creation ? "creation" : "annihilation", mode.row, mode.col, err / scale});
    }
  return out;
}

double fitted_order(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size() || h.size() < 2)
    throw ArgumentError("fitted_order: need at least two matching points");
  const std::size_t n = h.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(h[k] > 0.0) || !(err[k] > 0.0)) return std::nan("");
    const double x = std::log(h[k]), y = std::log(err[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace nbgas
