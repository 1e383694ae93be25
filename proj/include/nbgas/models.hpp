#pragma once

// Lattice L-operators, monodromy matrices and their vacuum eigenvalues.
//
// Every L-operator is stored as a linear pencil times a scalar:
//   L_n(u) = s_n(u) (A_n + u B_n),
// which makes both pointwise evaluation and the denominator-cleared
// polynomial form exact. Site n = first..last; the monodromy multiplies
// rightmost-first, T(u) = L_last(u) ... L_first(u).

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "nbgas/fock.hpp"
#include "nbgas/opalg.hpp"

namespace nbgas {

enum class ModelKind { DiscreteBoson, TcbgFull, TcbgSmall, Gl2Full, Gl2Small, XxxChain };

const char* to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

// Placement of a 2x2 model inside GL(3) labels: Upper uses labels 1,2
// (spin chain, creation entry T12), Lower uses labels 2,3 (one-component
// bosons, creation entry T23). 3x3 models are Full.
enum class Embedding { Full, Upper, Lower };

struct SitePencil {
  AuxMatrix constant;
  AuxMatrix linear;
};

class Model {
 public:
  static Model discrete_boson(int sites, int cutoff, cplx m,
                              StoragePolicy policy = {});
  static Model tcbg_full(const LatticeParams& p, StoragePolicy policy = {});
  static Model tcbg_small(const LatticeParams& p, StoragePolicy policy = {});
  static Model gl2_full(const LatticeParams& p, StoragePolicy policy = {});
  static Model gl2_small(const LatticeParams& p, StoragePolicy policy = {});
  // Empty xi means the homogeneous point xi_k = c/2.
  static Model xxx_chain(int sites, std::vector<cplx> xi, cplx c,
                         StoragePolicy policy = {});

  ModelKind kind() const { return kind_; }
  Embedding embedding() const { return embedding_; }
  int auxdim() const { return embedding_ == Embedding::Full ? 3 : 2; }
  cplx coupling() const { return c_; }
  int first_site() const { return first_; }
  int last_site() const { return last_; }
  int length() const { return last_ - first_ + 1; }
  int total_sites() const;
  const HilbertSpace& space() const { return *space_; }
  // Null for the spin chain.
  const FockBasis* fock() const;
  const LatticeParams& lattice() const { return lattice_; }
  double spacing() const { return lattice_.spacing(); }
  const std::vector<cplx>& inhomogeneities() const { return xi_; }
  cplx boson_mass() const { return m_; }

  // Same model restricted to sites [first, last] on the same global space.
  Model slice(int first, int last) const;

  cplx site_scale(int site, cplx u) const;
  const SitePencil& pencil(int site) const;
  AuxMatrix l_operator(int site, cplx u) const;
  AuxMatrix monodromy(cplx u) const;
  // prod_n (A_n + u B_n) over the range, i.e. T(u) / prod_n s_n(u).
  // Defined for the boson models.
  OperatorPolynomial monodromy_poly() const;
  // prod_n s_n(u) over the range.
  cplx scale(cplx u) const;

  // T_ij(u) x by propagating an auxiliary vector through the sites
  // (0-based auxiliary indices of this model).
  Vector apply_entry(int i, int j, cplx u, const Vector& x) const;
  std::vector<Vector> apply_column(int j, cplx u, const Vector& x) const;
  Vector apply_transfer(cplx u, const Vector& x) const;

  // Auxiliary index of a GL(3) label (0-based), if present.
  std::optional<int> aux_index(int gl3_label) const;

  Vector vacuum() const;
  // Vacuum eigenvalue ratios in GL(3) labelling, lambda_2 = 1.
  cplx r1(cplx u) const;
  cplx r3(cplx u) const;
  std::vector<cplx> vacuum_eigenvalues(cplx u) const;

 private:
  Model() = default;
  void build_boson_pencils();
  void build_spin_pencils();

  ModelKind kind_{};
  Embedding embedding_ = Embedding::Full;
  cplx c_{};
  LatticeParams lattice_{};
  cplx m_{};
  std::vector<cplx> xi_;
  int first_ = 1;
  int last_ = 1;
  std::shared_ptr<const HilbertSpace> space_;
  std::shared_ptr<const std::vector<SitePencil>> pencils_;  // index site-1
};

cplx r0_fun(cplx u, double spacing);
// |r0(u)^{x/Delta} - e^{iux}|, x/Delta rounded to the nearest integer.
double r0_power_limit(cplx u, double x, double spacing);

}  // namespace nbgas
