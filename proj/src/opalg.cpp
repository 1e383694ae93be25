#include "nbgas/opalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nbgas/errors.hpp"

namespace nbgas {

namespace {

SparseMatrix to_sparse(const DenseMatrix& m) {
  return m.sparseView(0.0, 0.0);
}

template <class F>
LocalOperator::Grading sum_grading(const LocalOperator& a,
                                   const LocalOperator& b) {
  if (a.known_zero()) return b.grading();
  if (b.known_zero()) return a.grading();
  if (a.grading() && b.grading() && *a.grading() == *b.grading())
    return a.grading();
  return std::nullopt;
}

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw DimensionError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(a) + " vs " + std::to_string(b) + ")");
}

}  // namespace

std::vector<Index> HilbertSpace::sector(int max_total) const {
  std::vector<Index> out;
  for (std::size_t i = 0; i < totals_.size(); ++i)
    if (totals_[i] <= max_total) out.push_back(static_cast<Index>(i));
  return out;
}

std::size_t FockBasis::count(int sites, int cutoff) {
  // sum_{p<=P} C(p + 2N - 1, 2N - 1) = C(P + 2N, 2N)
  const int modes = 2 * sites;
  long double c = 1.0L;
  for (int k = 1; k <= cutoff; ++k) c = c * (modes + k) / k;
  return static_cast<std::size_t>(std::llround(c));
}

FockBasis::FockBasis(int sites, int cutoff, StoragePolicy policy)
    : sites_(sites), max_particles_(cutoff) {
  if (sites < 1) throw ArgumentError("FockBasis: need at least one site");
  if (cutoff < 0) throw ArgumentError("FockBasis: negative cutoff");
  const std::size_t n = count(sites, cutoff);
  if (n > policy.max_dimension)
    throw CapacityError("FockBasis: dimension " + std::to_string(n) +
                            " exceeds bound " +
                            std::to_string(policy.max_dimension),
                        n);
  const int modes = 2 * sites;
  states_.reserve(n);
  std::vector<int> occ(modes, 0);
  // Lexicographic enumeration of all vectors with sum <= cutoff.
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == modes) {
      states_.push_back(occ);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      occ[pos] = k;
      self(self, pos + 1, left - k);
    }
    occ[pos] = 0;
  };
  rec(rec, 0, cutoff);
  totals_.reserve(n);
  for (std::size_t i = 0; i < states_.size(); ++i) {
    int t = 0;
    for (int v : states_[i]) t += v;
    totals_.push_back(t);
    index_.emplace(states_[i], i);
  }
  dense_ = n <= policy.dense_threshold;
  cutoff_ = cutoff;
}

int FockBasis::occupation(std::size_t i, int color, int site) const {
  return states_[i][2 * (site - 1) + (color - 1)];
}

std::optional<std::size_t> FockBasis::index(
    const std::vector<int>& occupations) const {
  auto it = index_.find(occupations);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

FockBasis build_basis(int sites, int cutoff, StoragePolicy policy) {
  return FockBasis(sites, cutoff, policy);
}

SpinBasis::SpinBasis(int sites, StoragePolicy policy) : sites_(sites) {
  if (sites < 1 || sites > 24)
    throw ArgumentError("SpinBasis: site count must be in [1, 24]");
  const std::size_t n = std::size_t{1} << sites;
  if (n > policy.max_dimension)
    throw CapacityError("SpinBasis: dimension too large", n);
  totals_.resize(n);
  for (std::size_t s = 0; s < n; ++s)
    totals_[s] = static_cast<int>(__builtin_popcountll(s));
  dense_ = n <= policy.dense_threshold;
}

// ---------------------------------------------------------------------------

LocalOperator LocalOperator::zero(std::size_t dim, bool dense) {
  LocalOperator op;
  op.dim_ = dim;
  const auto n = static_cast<Index>(dim);
  if (dense)
    op.m_ = DenseMatrix::Zero(n, n);
  else
    op.m_ = SparseMatrix(n, n);
  op.grading_ = 0;
  op.known_zero_ = true;
  return op;
}

LocalOperator LocalOperator::identity(std::size_t dim, bool dense, cplx scale) {
  LocalOperator op;
  op.dim_ = dim;
  const auto n = static_cast<Index>(dim);
  if (dense) {
    op.m_ = DenseMatrix(DenseMatrix::Identity(n, n) * scale);
  } else {
    SparseMatrix s(n, n);
    s.setIdentity();
    op.m_ = SparseMatrix(s * scale);
  }
  op.grading_ = 0;
  op.known_zero_ = scale == cplx(0.0);
  return op;
}

LocalOperator LocalOperator::diagonal(const Vector& diag, bool dense) {
  LocalOperator op;
  op.dim_ = static_cast<std::size_t>(diag.size());
  if (dense) {
    op.m_ = DenseMatrix(diag.asDiagonal());
  } else {
    SparseMatrix s(diag.size(), diag.size());
    s.reserve(Eigen::VectorXi::Constant(diag.size(), 1));
    for (Index i = 0; i < diag.size(); ++i)
      if (diag[i] != cplx(0.0)) s.insert(i, i) = diag[i];
    s.makeCompressed();
    op.m_ = std::move(s);
  }
  op.grading_ = 0;
  return op;
}

LocalOperator LocalOperator::from_triplets(
    std::size_t dim, bool dense,
    const std::vector<Eigen::Triplet<cplx>>& entries, Grading grading) {
  LocalOperator op;
  op.dim_ = dim;
  const auto n = static_cast<Index>(dim);
  SparseMatrix s(n, n);
  s.setFromTriplets(entries.begin(), entries.end());
  if (dense)
    op.m_ = DenseMatrix(s);
  else
    op.m_ = std::move(s);
  op.grading_ = grading;
  op.known_zero_ = entries.empty();
  return op;
}

LocalOperator LocalOperator::from_dense(const DenseMatrix& m, bool dense,
                                        Grading grading) {
  LocalOperator op;
  op.dim_ = static_cast<std::size_t>(m.rows());
  if (dense)
    op.m_ = m;
  else
    op.m_ = to_sparse(m);
  op.grading_ = grading;
  return op;
}

LocalOperator LocalOperator::operator*(const LocalOperator& rhs) const {
  require_same_dim(dim_, rhs.dim_, "operator product");
  LocalOperator out;
  out.dim_ = dim_;
  if (known_zero_ || rhs.known_zero_) return zero(dim_, is_dense());
  if (is_dense() && rhs.is_dense()) {
    out.m_ = DenseMatrix(std::get<DenseMatrix>(m_) *
                         std::get<DenseMatrix>(rhs.m_));
  } else {
    const SparseMatrix a = is_dense() ? to_sparse(std::get<DenseMatrix>(m_))
                                      : std::get<SparseMatrix>(m_);
    const SparseMatrix b = rhs.is_dense()
                               ? to_sparse(std::get<DenseMatrix>(rhs.m_))
                               : std::get<SparseMatrix>(rhs.m_);
    SparseMatrix p = (a * b).pruned();
    out.m_ = std::move(p);
  }
  if (grading_ && rhs.grading_)
    out.grading_ = *grading_ + *rhs.grading_;
  else
    out.grading_ = std::nullopt;
  return out;
}

LocalOperator LocalOperator::operator+(const LocalOperator& rhs) const {
  require_same_dim(dim_, rhs.dim_, "operator sum");
  if (rhs.known_zero_) return *this;
  if (known_zero_) return rhs;
  LocalOperator out;
  out.dim_ = dim_;
  if (is_dense() && rhs.is_dense()) {
    out.m_ = DenseMatrix(std::get<DenseMatrix>(m_) +
                         std::get<DenseMatrix>(rhs.m_));
  } else if (is_dense()) {
    out.m_ = DenseMatrix(std::get<DenseMatrix>(m_) +
                         DenseMatrix(std::get<SparseMatrix>(rhs.m_)));
  } else if (rhs.is_dense()) {
    out.m_ = DenseMatrix(DenseMatrix(std::get<SparseMatrix>(m_)) +
                         std::get<DenseMatrix>(rhs.m_));
  } else {
    out.m_ = SparseMatrix(std::get<SparseMatrix>(m_) +
                          std::get<SparseMatrix>(rhs.m_));
  }
  out.grading_ = sum_grading<void>(*this, rhs);
  return out;
}

LocalOperator LocalOperator::operator-() const { return *this * cplx(-1.0); }

LocalOperator LocalOperator::operator-(const LocalOperator& rhs) const {
  return *this + (-rhs);
}

LocalOperator LocalOperator::operator*(cplx s) const {
  LocalOperator out = *this;
  std::visit([s](auto& m) { m *= s; }, out.m_);
  if (s == cplx(0.0)) return zero(dim_, is_dense());
  return out;
}

LocalOperator& LocalOperator::operator+=(const LocalOperator& rhs) {
  *this = *this + rhs;
  return *this;
}

LocalOperator LocalOperator::adjoint() const {
  LocalOperator out;
  out.dim_ = dim_;
  if (is_dense())
    out.m_ = DenseMatrix(std::get<DenseMatrix>(m_).adjoint());
  else
    out.m_ = SparseMatrix(std::get<SparseMatrix>(m_).adjoint());
  out.grading_ = grading_ ? Grading(-*grading_) : std::nullopt;
  out.known_zero_ = known_zero_;
  return out;
}

LocalOperator LocalOperator::transpose() const {
  LocalOperator out;
  out.dim_ = dim_;
  if (is_dense())
    out.m_ = DenseMatrix(std::get<DenseMatrix>(m_).transpose());
  else
    out.m_ = SparseMatrix(std::get<SparseMatrix>(m_).transpose());
  out.grading_ = grading_ ? Grading(-*grading_) : std::nullopt;
  out.known_zero_ = known_zero_;
  return out;
}

Vector LocalOperator::apply(const Vector& x) const {
  require_same_dim(dim_, static_cast<std::size_t>(x.size()), "apply");
  if (known_zero_) return Vector::Zero(x.size());
  return std::visit([&x](const auto& m) -> Vector { return m * x; }, m_);
}

DenseMatrix LocalOperator::apply(const DenseMatrix& x) const {
  require_same_dim(dim_, static_cast<std::size_t>(x.rows()), "apply");
  if (known_zero_) return DenseMatrix::Zero(x.rows(), x.cols());
  return std::visit([&x](const auto& m) -> DenseMatrix { return m * x; }, m_);
}

DenseMatrix LocalOperator::to_dense() const {
  if (is_dense()) return std::get<DenseMatrix>(m_);
  return DenseMatrix(std::get<SparseMatrix>(m_));
}

DenseMatrix LocalOperator::columns(const std::vector<Index>& cols) const {
  DenseMatrix out(static_cast<Index>(dim_), static_cast<Index>(cols.size()));
  if (is_dense()) {
    const auto& m = std::get<DenseMatrix>(m_);
    for (std::size_t k = 0; k < cols.size(); ++k) out.col(k) = m.col(cols[k]);
  } else {
    const auto& m = std::get<SparseMatrix>(m_);
    for (std::size_t k = 0; k < cols.size(); ++k)
      out.col(k) = Vector(m.col(cols[k]));
  }
  return out;
}

cplx LocalOperator::coeff(Index row, Index col) const {
  if (is_dense()) return std::get<DenseMatrix>(m_)(row, col);
  return std::get<SparseMatrix>(m_).coeff(row, col);
}

double LocalOperator::max_abs() const {
  if (is_dense()) {
    const auto& m = std::get<DenseMatrix>(m_);
    return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
  }
  const auto& m = std::get<SparseMatrix>(m_);
  double best = 0.0;
  for (Index k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      best = std::max(best, std::abs(it.value()));
  return best;
}

bool LocalOperator::respects_grading(const HilbertSpace& space,
                                     double tol) const {
  if (!grading_) return true;
  const int g = *grading_;
  auto check = [&](Index r, Index c, cplx v) {
    return std::abs(v) <= tol ||
           space.total(static_cast<std::size_t>(r)) -
                   space.total(static_cast<std::size_t>(c)) ==
               g;
  };
  if (is_dense()) {
    const auto& m = std::get<DenseMatrix>(m_);
    for (Index c = 0; c < m.cols(); ++c)
      for (Index r = 0; r < m.rows(); ++r)
        if (!check(r, c, m(r, c))) return false;
    return true;
  }
  const auto& m = std::get<SparseMatrix>(m_);
  for (Index k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      if (!check(it.row(), it.col(), it.value())) return false;
  return true;
}

LocalOperator commutator(const LocalOperator& a, const LocalOperator& b) {
  return a * b - b * a;
}

// ---------------------------------------------------------------------------

AuxMatrix::AuxMatrix(int auxdim, std::size_t dim, bool dense)
    : auxdim_(auxdim), dim_(dim), dense_(dense) {
  blocks_.assign(static_cast<std::size_t>(auxdim * auxdim),
                 LocalOperator::zero(dim, dense));
}

AuxMatrix AuxMatrix::identity(int auxdim, std::size_t dim, bool dense) {
  AuxMatrix a(auxdim, dim, dense);
  for (int i = 0; i < auxdim; ++i)
    a(i, i) = LocalOperator::identity(dim, dense);
  return a;
}

AuxMatrix AuxMatrix::operator+(const AuxMatrix& rhs) const {
  if (auxdim_ != rhs.auxdim_) throw DimensionError("AuxMatrix sum: auxdim");
  require_same_dim(dim_, rhs.dim_, "AuxMatrix sum");
  AuxMatrix out = *this;
  for (std::size_t k = 0; k < blocks_.size(); ++k)
    out.blocks_[k] = blocks_[k] + rhs.blocks_[k];
  return out;
}

AuxMatrix AuxMatrix::operator-(const AuxMatrix& rhs) const {
  return *this + rhs * cplx(-1.0);
}

AuxMatrix AuxMatrix::operator*(cplx s) const {
  AuxMatrix out = *this;
  for (auto& b : out.blocks_) b = b * s;
  return out;
}

AuxMatrix AuxMatrix::transposed() const {
  AuxMatrix out(auxdim_, dim_, dense_);
  for (int i = 0; i < auxdim_; ++i)
    for (int j = 0; j < auxdim_; ++j) out(i, j) = (*this)(j, i);
  return out;
}

LocalOperator AuxMatrix::trace() const {
  LocalOperator t = LocalOperator::zero(dim_, dense_);
  for (int i = 0; i < auxdim_; ++i) t += (*this)(i, i);
  return t;
}

std::vector<Vector> AuxMatrix::apply(const std::vector<Vector>& x) const {
  if (static_cast<int>(x.size()) != auxdim_)
    throw DimensionError("AuxMatrix::apply: auxiliary size mismatch");
  std::vector<Vector> y(auxdim_, Vector::Zero(static_cast<Index>(dim_)));
  for (int i = 0; i < auxdim_; ++i)
    for (int j = 0; j < auxdim_; ++j) {
      const auto& b = (*this)(i, j);
      if (b.known_zero()) continue;
      y[i] += b.apply(x[j]);
    }
  return y;
}

AuxMatrix compose(const AuxMatrix& a, const AuxMatrix& b) {
  if (a.auxdim() != b.auxdim())
    throw DimensionError("compose: auxiliary dimension mismatch");
  require_same_dim(a.dim(), b.dim(), "compose");
  const int d = a.auxdim();
  AuxMatrix out(d, a.dim(), a.dense());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      LocalOperator acc = LocalOperator::zero(a.dim(), a.dense());
      for (int k = 0; k < d; ++k) {
        if (a(i, k).known_zero() || b(k, j).known_zero()) continue;
        acc += a(i, k) * b(k, j);
      }
      out(i, j) = std::move(acc);
    }
  return out;
}

double max_entry_difference(const AuxMatrix& a, const AuxMatrix& b,
                            const std::vector<Index>& sector) {
  if (a.auxdim() != b.auxdim())
    throw DimensionError("max_entry_difference: auxdim mismatch");
  double worst = 0.0;
  for (int i = 0; i < a.auxdim(); ++i)
    for (int j = 0; j < a.auxdim(); ++j) {
      const LocalOperator d = a(i, j) - b(i, j);
      if (sector.empty()) {
        worst = std::max(worst, d.max_abs());
      } else {
        const DenseMatrix c = d.columns(sector);
        if (c.size()) worst = std::max(worst, c.cwiseAbs().maxCoeff());
      }
    }
  return worst;
}

OperatorPolynomial poly_compose(const OperatorPolynomial& p1,
                                const OperatorPolynomial& p2) {
  if (p1.coeffs.empty() || p2.coeffs.empty())
    throw ArgumentError("poly_compose: empty polynomial");
  if (p1.auxdim() != p2.auxdim())
    throw DimensionError("poly_compose: auxiliary dimension mismatch");
  require_same_dim(p1.dim(), p2.dim(), "poly_compose");
  const auto& proto = p1.coeffs.front();
  OperatorPolynomial out;
  out.coeffs.assign(p1.coeffs.size() + p2.coeffs.size() - 1,
                    AuxMatrix(proto.auxdim(), proto.dim(), proto.dense()));
  for (std::size_t i = 0; i < p1.coeffs.size(); ++i)
    for (std::size_t j = 0; j < p2.coeffs.size(); ++j)
      out.coeffs[i + j] = out.coeffs[i + j] + compose(p1.coeffs[i], p2.coeffs[j]);
  return out;
}

AuxMatrix eval(const OperatorPolynomial& p, cplx u) {
  if (p.coeffs.empty()) throw ArgumentError("eval: empty polynomial");
  AuxMatrix acc = p.coeffs.back();
  for (int k = p.degree() - 1; k >= 0; --k)
    acc = acc * u + p.coeffs[static_cast<std::size_t>(k)];
  return acc;
}

double spectral_norm(const DenseMatrix& m) {
  if (m.size() == 0) return 0.0;
  const DenseMatrix gram =
      m.cols() <= m.rows() ? DenseMatrix(m.adjoint() * m)
                           : DenseMatrix(m * m.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(gram, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(top, 0.0));
}

double sector_norm(const LocalOperator& op, const std::vector<Index>& sector) {
  return spectral_norm(op.columns(sector));
}

Vector basis_vector(std::size_t dim, std::size_t index) {
  Vector v = Vector::Zero(static_cast<Index>(dim));
  v[static_cast<Index>(index)] = 1.0;
  return v;
}

}  // namespace nbgas
