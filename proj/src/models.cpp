#include "nbgas/models.hpp"

#include <cmath>
#include <string>

#include "nbgas/errors.hpp"
#include "nbgas/structfun.hpp"

namespace nbgas {

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::DiscreteBoson: return "discrete_boson";
    case ModelKind::TcbgFull: return "tcbg_full";
    case ModelKind::TcbgSmall: return "tcbg_small";
    case ModelKind::Gl2Full: return "gl2_full";
    case ModelKind::Gl2Small: return "gl2_small";
    case ModelKind::XxxChain: return "xxx";
  }
  return "?";
}

ModelKind model_kind_from_string(const std::string& name) {
  for (auto k : {ModelKind::DiscreteBoson, ModelKind::TcbgFull,
                 ModelKind::TcbgSmall, ModelKind::Gl2Full, ModelKind::Gl2Small,
                 ModelKind::XxxChain})
    if (name == to_string(k)) return k;
  throw ConfigError("unknown model kind '" + name + "'");
}

cplx r0_fun(cplx u, double spacing) {
  const cplx h = I_unit * u * spacing / 2.0;
  if (std::abs(1.0 - h) < 1e-14) throw PoleError("r0: pole at u = -2i/Delta");
  return (1.0 + h) / (1.0 - h);
}

double r0_power_limit(cplx u, double x, double spacing) {
  const int n = static_cast<int>(std::lround(x / spacing));
  return std::abs(ipow(r0_fun(u, spacing), n) - std::exp(I_unit * u * x));
}

// ---------------------------------------------------------------------------

Model Model::discrete_boson(int sites, int cutoff, cplx m,
                            StoragePolicy policy) {
  Model md;
  md.kind_ = ModelKind::DiscreteBoson;
  md.c_ = -1.0;
  md.lattice_ = LatticeParams{static_cast<double>(sites), sites, 1.0, cutoff};
  md.m_ = m;
  md.first_ = 1;
  md.last_ = sites;
  md.space_ = std::make_shared<FockBasis>(sites, cutoff, policy);
  md.build_boson_pencils();
  return md;
}

Model Model::tcbg_full(const LatticeParams& p, StoragePolicy policy) {
  p.validate();
  Model md;
  md.kind_ = ModelKind::TcbgFull;
  md.c_ = p.coupling();
  md.lattice_ = p;
  md.m_ = 4.0 / (p.kappa * p.spacing());
  md.first_ = 1;
  md.last_ = p.sites;
  md.space_ = std::make_shared<FockBasis>(p.sites, p.cutoff, policy);
  md.build_boson_pencils();
  return md;
}

Model Model::tcbg_small(const LatticeParams& p, StoragePolicy policy) {
  Model md = tcbg_full(p, policy);
  md.kind_ = ModelKind::TcbgSmall;
  md.build_boson_pencils();
  return md;
}

Model Model::gl2_full(const LatticeParams& p, StoragePolicy policy) {
  Model md = tcbg_full(p, policy);
  md.kind_ = ModelKind::Gl2Full;
  md.embedding_ = Embedding::Lower;
  md.build_boson_pencils();
  return md;
}

Model Model::gl2_small(const LatticeParams& p, StoragePolicy policy) {
  Model md = tcbg_full(p, policy);
  md.kind_ = ModelKind::Gl2Small;
  md.embedding_ = Embedding::Lower;
  md.build_boson_pencils();
  return md;
}

Model Model::xxx_chain(int sites, std::vector<cplx> xi, cplx c,
                       StoragePolicy policy) {
  if (c == cplx(0.0)) throw ArgumentError("xxx: coupling must be nonzero");
  if (xi.empty()) xi.assign(static_cast<std::size_t>(sites), c / 2.0);
  if (static_cast<int>(xi.size()) != sites)
    throw ArgumentError("xxx: need one inhomogeneity per site");
  Model md;
  md.kind_ = ModelKind::XxxChain;
  md.embedding_ = Embedding::Upper;
  md.c_ = c;
  md.lattice_ = LatticeParams{static_cast<double>(sites), sites, 1.0, sites};
  md.xi_ = std::move(xi);
  md.first_ = 1;
  md.last_ = sites;
  md.space_ = std::make_shared<SpinBasis>(sites, policy);
  md.build_spin_pencils();
  return md;
}

void Model::build_boson_pencils() {
  const auto& basis = static_cast<const FockBasis&>(*space_);
  const std::size_t dim = basis.dim();
  const bool dense = basis.dense();
  const int n_sites = basis.sites();
  auto pencils = std::make_shared<std::vector<SitePencil>>();
  pencils->reserve(static_cast<std::size_t>(n_sites));
  const LocalOperator id = LocalOperator::identity(dim, dense);

  for (int n = 1; n <= n_sites; ++n) {
    const int d = auxdim();
    SitePencil sp{AuxMatrix(d, dim, dense), AuxMatrix(d, dim, dense)};
    if (kind_ == ModelKind::DiscreteBoson) {
      // L = u + p with the bare Heisenberg operators.
      LocalOperator a[2] = {annihilator(basis, 1, n, 1.0),
                            annihilator(basis, 2, n, 1.0)};
      LocalOperator ad[2] = {a[0].adjoint(), a[1].adjoint()};
      const LocalOperator root = sqrt_m_rho(basis, n, m_);
      const LocalOperator rho = number(basis, n);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) sp.constant(i, j) = ad[i] * a[j];
        sp.constant(i, 2) = ad[i] * root * I_unit;
        sp.constant(2, i) = root * a[i] * I_unit;
      }
      sp.constant(2, 2) = -(rho + LocalOperator::identity(dim, dense, m_));
      sp.linear = AuxMatrix::identity(3, dim, dense);
      pencils->push_back(std::move(sp));
      continue;
    }

    const double dl = lattice_.spacing();
    const double k = lattice_.kappa;
    const bool full = kind_ == ModelKind::TcbgFull || kind_ == ModelKind::Gl2Full;
    const bool two = embedding_ == Embedding::Lower;
    // Colours carried by the auxiliary rows/columns before the last one.
    std::vector<int> colors = two ? std::vector<int>{2} : std::vector<int>{1, 2};
    const int last = static_cast<int>(colors.size());

    std::vector<LocalOperator> psi, psid;
    for (int col : colors) {
      psi.push_back(annihilator(basis, col, n, dl));
      psid.push_back(psi.back().adjoint());
    }
    // Site density restricted to the active colours.
    LocalOperator rho = LocalOperator::zero(dim, dense);
    for (std::size_t s = 0; s < colors.size(); ++s) rho += psid[s] * psi[s];
    LocalOperator q = LocalOperator::identity(dim, dense, std::sqrt(k));
    if (full) {
      Vector diag(static_cast<Index>(dim));
      for (Index i = 0; i < diag.size(); ++i)
        diag[i] = std::sqrt(k + k * k * dl * dl * rho.coeff(i, i).real() / 4.0);
      q = LocalOperator::diagonal(diag, dense);
    }
    const cplx half = k * dl * dl / 2.0;
    for (int i = 0; i < last; ++i) {
      for (int j = 0; j < last; ++j) {
        LocalOperator e = i == j ? id : LocalOperator::zero(dim, dense);
        if (full) e += psid[i] * psi[j] * half;
        sp.constant(i, j) = e;
      }
      sp.linear(i, i) = LocalOperator::identity(dim, dense, -I_unit * dl / 2.0);
      sp.constant(i, last) = psid[i] * q * (-I_unit * dl);
      sp.constant(last, i) = q * psi[i] * (I_unit * dl);
    }
    LocalOperator e33 = id;
    if (full) e33 += rho * half;
    sp.constant(last, last) = e33;
    sp.linear(last, last) = LocalOperator::identity(dim, dense, I_unit * dl / 2.0);
    pencils->push_back(std::move(sp));
  }
  pencils_ = std::move(pencils);
}

void Model::build_spin_pencils() {
  const auto& basis = static_cast<const SpinBasis&>(*space_);
  const std::size_t dim = basis.dim();
  const bool dense = basis.dense();
  auto pencils = std::make_shared<std::vector<SitePencil>>();
  const LocalOperator id = LocalOperator::identity(dim, dense);
  for (int n = 1; n <= basis.sites(); ++n) {
    const cplx xi = xi_[static_cast<std::size_t>(n - 1)];
    const LocalOperator sz = sigma_z(basis, n);
    SitePencil sp{AuxMatrix(2, dim, dense), AuxMatrix::identity(2, dim, dense)};
    sp.constant(0, 0) = id * (-xi) + (id + sz) * (c_ / 2.0);
    sp.constant(0, 1) = sigma_minus(basis, n) * c_;
    sp.constant(1, 0) = sigma_plus(basis, n) * c_;
    sp.constant(1, 1) = id * (-xi) + (id - sz) * (c_ / 2.0);
    pencils->push_back(std::move(sp));
  }
  pencils_ = std::move(pencils);
}

int Model::total_sites() const { return static_cast<int>(pencils_->size()); }

const FockBasis* Model::fock() const {
  return dynamic_cast<const FockBasis*>(space_.get());
}

Model Model::slice(int first, int last) const {
  if (first < 1 || last > total_sites() || first > last)
    throw ArgumentError("slice: invalid site range [" + std::to_string(first) +
                        ", " + std::to_string(last) + "]");
  Model m = *this;
  m.first_ = first;
  m.last_ = last;
  return m;
}

cplx Model::site_scale(int site, cplx u) const {
  switch (kind_) {
    case ModelKind::DiscreteBoson:
      if (std::abs(u) < 1e-14) throw PoleError("discrete boson: pole at u = 0");
      return 1.0 / u;
    case ModelKind::XxxChain: {
      const cplx xi = xi_[static_cast<std::size_t>(site - 1)];
      pole_guard(u, xi, "xxx L-operator");
      return 1.0 / (u - xi);
    }
    default: {
      const cplx nrm = 1.0 - I_unit * u * spacing() / 2.0;
      if (std::abs(nrm) < 1e-14)
        throw PoleError("L-operator normalization pole at u = -2i/Delta");
      return 1.0 / nrm;
    }
  }
}

cplx Model::scale(cplx u) const {
  cplx s = 1.0;
  for (int n = first_; n <= last_; ++n) s *= site_scale(n, u);
  return s;
}

const SitePencil& Model::pencil(int site) const {
  if (site < 1 || site > total_sites())
    throw ArgumentError("site " + std::to_string(site) + " out of range");
  return (*pencils_)[static_cast<std::size_t>(site - 1)];
}

AuxMatrix Model::l_operator(int site, cplx u) const {
  const SitePencil& p = pencil(site);
  return (p.constant + p.linear * u) * site_scale(site, u);
}

AuxMatrix Model::monodromy(cplx u) const {
  AuxMatrix t = l_operator(first_, u);
  for (int n = first_ + 1; n <= last_; ++n) t = compose(l_operator(n, u), t);
  return t;
}

OperatorPolynomial Model::monodromy_poly() const {
  if (kind_ == ModelKind::XxxChain)
    throw ArgumentError("monodromy_poly: not defined for the spin chain");
  OperatorPolynomial q{{pencil(first_).constant, pencil(first_).linear}};
  for (int n = first_ + 1; n <= last_; ++n)
    q = poly_compose(OperatorPolynomial{{pencil(n).constant, pencil(n).linear}}, q);
  return q;
}

std::vector<Vector> Model::apply_column(int j, cplx u, const Vector& x) const {
  const int d = auxdim();
  if (j < 0 || j >= d) throw ArgumentError("apply_column: index out of range");
  std::vector<Vector> cur(d, Vector::Zero(x.size()));
  cur[j] = x;
  std::vector<bool> live(d, false);
  live[j] = true;
  for (int n = first_; n <= last_; ++n) {
    const SitePencil& p = pencil(n);
    const cplx s = site_scale(n, u);
    std::vector<Vector> next(d, Vector::Zero(x.size()));
    std::vector<bool> nlive(d, false);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        if (!live[b]) continue;
        const bool c0 = !p.constant(a, b).known_zero();
        const bool c1 = !p.linear(a, b).known_zero();
        if (c0) next[a] += p.constant(a, b).apply(cur[b]);
        if (c1) next[a] += u * p.linear(a, b).apply(cur[b]);
        nlive[a] = nlive[a] || c0 || c1;
      }
    for (int a = 0; a < d; ++a) next[a] *= s;
    cur = std::move(next);
    live = std::move(nlive);
  }
  return cur;
}

Vector Model::apply_entry(int i, int j, cplx u, const Vector& x) const {
  if (i < 0 || i >= auxdim()) throw ArgumentError("apply_entry: index out of range");
  return apply_column(j, u, x)[static_cast<std::size_t>(i)];
}

Vector Model::apply_transfer(cplx u, const Vector& x) const {
  Vector y = Vector::Zero(x.size());
  for (int j = 0; j < auxdim(); ++j) y += apply_column(j, u, x)[j];
  return y;
}

std::optional<int> Model::aux_index(int label) const {
  switch (embedding_) {
    case Embedding::Full: return label;
    case Embedding::Upper: if (label < 2) return label; return std::nullopt;
    case Embedding::Lower: if (label > 0) return label - 1; return std::nullopt;
  }
  return std::nullopt;
}

Vector Model::vacuum() const { return basis_vector(space_->dim(), 0); }

std::vector<cplx> Model::vacuum_eigenvalues(cplx u) const {
  return {r1(u), 1.0, r3(u)};
}

cplx Model::r1(cplx u) const {
  if (kind_ == ModelKind::XxxChain) {
    cplx r = 1.0;
    for (int n = first_; n <= last_; ++n)
      r *= f_fun(u, xi_[static_cast<std::size_t>(n - 1)], c_);
    return r;
  }
  return 1.0;
}

cplx Model::r3(cplx u) const {
  switch (kind_) {
    case ModelKind::XxxChain: return 1.0;
    case ModelKind::DiscreteBoson: {
      if (std::abs(u) < 1e-14) throw PoleError("discrete boson: pole at u = 0");
      return ipow((u - m_) / u, length());
    }
    default: return ipow(r0_fun(u, spacing()), length());
  }
}

}  // namespace nbgas
