#pragma once

// Operator algebra on enumerated many-body bases: occupation bases,
// graded operators, auxiliary-space block matrices and polynomials in
// the spectral parameter with operator-valued coefficients.

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace nbgas {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx>;
using Index = Eigen::Index;

inline constexpr cplx I_unit{0.0, 1.0};

// Integer power by repeated squaring (exact sign/phase for small n).
inline cplx ipow(cplx z, int n) {
  if (n < 0) return 1.0 / ipow(z, -n);
  cplx r = 1.0;
  while (n) {
    if (n & 1) r *= z;
    z *= z;
    n >>= 1;
  }
  return r;
}

struct StoragePolicy {
  // Operators on bases up to this dimension are stored densely.
  std::size_t dense_threshold = 2000;
  // Hard bound on the basis dimension.
  std::size_t max_dimension = 2'000'000;
};

struct Tolerances {
  double absolute = 1e-10;
  double relative = 1e-10;
};

// Common data of every enumerated basis: the total particle (or flipped
// spin) number of each basis state, which drives gradings and safe sectors.
class HilbertSpace {
 public:
  virtual ~HilbertSpace() = default;

  std::size_t dim() const { return totals_.size(); }
  int total(std::size_t i) const { return totals_[i]; }
  const std::vector<int>& totals() const { return totals_; }
  bool dense() const { return dense_; }
  // Largest total representable; states above it are projected out.
  // Returns nullopt for untruncated spaces.
  std::optional<int> cutoff() const { return cutoff_; }

  // Indices of basis states with total <= max_total, in basis order.
  std::vector<Index> sector(int max_total) const;

 protected:
  std::vector<int> totals_;
  bool dense_ = true;
  std::optional<int> cutoff_;
};

// Two-colour bosonic occupation basis on N sites with a global cutoff P
// on the total particle number. States are occupation vectors
// (n_1(1), n_2(1), ..., n_1(N), n_2(N)) in lexicographic order; the
// vacuum is state 0.
class FockBasis : public HilbertSpace {
 public:
  FockBasis(int sites, int cutoff, StoragePolicy policy = {});

  int sites() const { return sites_; }
  int max_particles() const { return max_particles_; }
  const std::vector<int>& state(std::size_t i) const { return states_[i]; }
  int occupation(std::size_t i, int color, int site) const;
  std::optional<std::size_t> index(const std::vector<int>& occupations) const;

  // Number of states for given (N, P) without enumerating them.
  static std::size_t count(int sites, int cutoff);

 private:
  int sites_;
  int max_particles_;
  std::vector<std::vector<int>> states_;
  std::map<std::vector<int>, std::size_t> index_;
};

// Spin-1/2 chain of M sites. Bit (n-1) of a state index is set when site n
// carries a down spin; the all-up reference state is index 0 and the total
// of a state is its number of down spins.
class SpinBasis : public HilbertSpace {
 public:
  explicit SpinBasis(int sites, StoragePolicy policy = {});
  int sites() const { return sites_; }
  bool down(std::size_t state, int site) const {
    return (state >> (site - 1)) & 1u;
  }

 private:
  int sites_;
};

FockBasis build_basis(int sites, int cutoff, StoragePolicy policy = {});

// Matrix on a basis, dense or sparse, tagged with the particle-number
// shift it produces (nullopt = mixed).
class LocalOperator {
 public:
  using Grading = std::optional<int>;

  LocalOperator() = default;

  static LocalOperator zero(std::size_t dim, bool dense);
  static LocalOperator identity(std::size_t dim, bool dense,
                                cplx scale = 1.0);
  static LocalOperator diagonal(const Vector& diag, bool dense);
  static LocalOperator from_triplets(
      std::size_t dim, bool dense,
      const std::vector<Eigen::Triplet<cplx>>& entries, Grading grading);
  static LocalOperator from_dense(const DenseMatrix& m, bool dense,
                                  Grading grading);

  std::size_t dim() const { return dim_; }
  bool is_dense() const { return std::holds_alternative<DenseMatrix>(m_); }
  Grading grading() const { return grading_; }
  bool known_zero() const { return known_zero_; }

  LocalOperator operator*(const LocalOperator& rhs) const;
  LocalOperator operator+(const LocalOperator& rhs) const;
  LocalOperator operator-(const LocalOperator& rhs) const;
  LocalOperator operator-() const;
  LocalOperator operator*(cplx s) const;
  LocalOperator& operator+=(const LocalOperator& rhs);

  LocalOperator adjoint() const;
  LocalOperator transpose() const;

  Vector apply(const Vector& x) const;
  DenseMatrix apply(const DenseMatrix& x) const;
  DenseMatrix to_dense() const;
  DenseMatrix columns(const std::vector<Index>& cols) const;
  cplx coeff(Index row, Index col) const;
  double max_abs() const;

  // True if every nonzero entry connects states whose totals differ by
  // the declared grading.
  bool respects_grading(const HilbertSpace& space, double tol = 0.0) const;

 private:
  std::size_t dim_ = 0;
  std::variant<DenseMatrix, SparseMatrix> m_;
  Grading grading_ = 0;
  bool known_zero_ = false;
};

inline LocalOperator operator*(cplx s, const LocalOperator& op) {
  return op * s;
}

LocalOperator commutator(const LocalOperator& a, const LocalOperator& b);

// Square array of LocalOperators: an L-operator or monodromy matrix at a
// fixed spectral parameter. Indices are 0-based.
class AuxMatrix {
 public:
  AuxMatrix() = default;
  AuxMatrix(int auxdim, std::size_t dim, bool dense);

  static AuxMatrix identity(int auxdim, std::size_t dim, bool dense);

  int auxdim() const { return auxdim_; }
  std::size_t dim() const { return dim_; }
  bool dense() const { return dense_; }

  LocalOperator& operator()(int i, int j) { return blocks_[i * auxdim_ + j]; }
  const LocalOperator& operator()(int i, int j) const {
    return blocks_[i * auxdim_ + j];
  }

  AuxMatrix operator+(const AuxMatrix& rhs) const;
  AuxMatrix operator-(const AuxMatrix& rhs) const;
  AuxMatrix operator*(cplx s) const;
  AuxMatrix transposed() const;
  LocalOperator trace() const;

  // Apply to an auxiliary vector of states: y_i = sum_j A_ij x_j.
  std::vector<Vector> apply(const std::vector<Vector>& x) const;

 private:
  int auxdim_ = 0;
  std::size_t dim_ = 0;
  bool dense_ = true;
  std::vector<LocalOperator> blocks_;
};

AuxMatrix compose(const AuxMatrix& a, const AuxMatrix& b);

// Largest entrywise deviation between two AuxMatrices, on columns of the
// given sector (all columns when sector is empty).
double max_entry_difference(const AuxMatrix& a, const AuxMatrix& b,
                            const std::vector<Index>& sector = {});

// Polynomial sum_k coeffs[k] u^k with AuxMatrix coefficients.
struct OperatorPolynomial {
  std::vector<AuxMatrix> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  int auxdim() const { return coeffs.front().auxdim(); }
  std::size_t dim() const { return coeffs.front().dim(); }
};

OperatorPolynomial poly_compose(const OperatorPolynomial& p1,
                                const OperatorPolynomial& p2);
AuxMatrix eval(const OperatorPolynomial& p, cplx u);

// Spectral norm, computed from the Gram matrix on the smaller side.
double spectral_norm(const DenseMatrix& m);

// Spectral norm of op restricted to input states in `sector`.
double sector_norm(const LocalOperator& op, const std::vector<Index>& sector);

Vector basis_vector(std::size_t dim, std::size_t index);

}  // namespace nbgas
