#include "nbgas/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nbgas/errors.hpp"
#include "nbgas/structfun.hpp"

namespace nbgas {

EntryAction entry_action(const Model& model) {
  return [&model](int i, int j, cplx u, const Vector& x) -> Vector {
    const auto a = model.aux_index(i);
    const auto b = model.aux_index(j);
    if (!a || !b)
      throw ArgumentError(std::string("entry (") + std::to_string(i + 1) + "," +
                          std::to_string(j + 1) + ") absent from model " +
                          to_string(model.kind()));
    return model.apply_entry(*a, *b, u, x);
  };
}

void require_distinct(const std::vector<cplx>& w, const char* what) {
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) pole_guard(w[i], w[j], what);
}

std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> s(static_cast<std::size_t>(k));
  std::iota(s.begin(), s.end(), 0);
  while (true) {
    out.push_back(s);
    int i = k - 1;
    while (i >= 0 && s[i] == n - k + i) --i;
    if (i < 0) break;
    ++s[i];
    for (int t = i + 1; t < k; ++t) s[t] = s[t - 1] + 1;
  }
  return out;
}

std::pair<std::vector<cplx>, std::vector<cplx>> split_by(
    const std::vector<cplx>& w, const std::vector<int>& chosen) {
  std::vector<cplx> in, out;
  std::size_t c = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (c < chosen.size() && chosen[c] == static_cast<int>(i)) {
      in.push_back(w[i]);
      ++c;
    } else {
      out.push_back(w[i]);
    }
  }
  return {in, out};
}

Vector apply_product(const EntryAction& T, int i, int j,
                     const std::vector<cplx>& w, Vector x) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) x = T(i, j, *it, x);
  return x;
}

Vector bv_gl3(const EntryAction& T, const BetheParams& p, const Vector& ref) {
  require_distinct(p.u, "Bethe parameters u");
  require_distinct(p.v, "Bethe parameters v");
  const int a = static_cast<int>(p.u.size());
  const int b = static_cast<int>(p.v.size());
  const cplx norm = f_prod(p.v, p.u, p.c);
  Vector total = Vector::Zero(ref.size());
  for (int n = 0; n <= std::min(a, b); ++n)
    for (const auto& su : subsets(a, n))
      for (const auto& sv : subsets(b, n)) {
        const auto [u1, u2] = split_by(p.u, su);
        const auto [v1, v2] = split_by(p.v, sv);
        cplx w = n == 0 ? cplx(1.0) : izergin_k(v1, u1, p.c);
        w *= f_prod(v2, v1, p.c) * f_prod(u1, u2, p.c) / norm;
        Vector x = apply_product(T, 0, 1, u2, ref);
        x = apply_product(T, 1, 2, v2, x);
        x = apply_product(T, 0, 2, v1, x);
        total += w * x;
      }
  return total;
}

Vector bv_tcbg(const EntryAction& T, const BetheParams& p, const Vector& ref,
               bool check) {
  require_distinct(p.u, "Bethe parameters u");
  require_distinct(p.v, "Bethe parameters v");
  const int a = static_cast<int>(p.u.size());
  const int b = static_cast<int>(p.v.size());
  if (check)
    for (cplx u : p.u) {
      const double r = T(0, 1, u, ref).norm();
      if (r > 1e-10 * std::max(1.0, ref.norm()))
        throw StructuralError("bv_tcbg: T12 does not annihilate the reference vector");
    }
  Vector total = Vector::Zero(ref.size());
  if (a > b) return total;
  const cplx norm = f_prod(p.v, p.u, p.c);
  for (const auto& sv : subsets(b, a)) {
    const auto [v1, v2] = split_by(p.v, sv);
    cplx w = a == 0 ? cplx(1.0) : izergin_k(v1, p.u, p.c);
    w *= f_prod(v2, v1, p.c) / norm;
    Vector x = apply_product(T, 1, 2, v2, ref);
    x = apply_product(T, 0, 2, v1, x);
    total += w * x;
  }
  return total;
}

Vector bv_gl2(const EntryAction& T, int i, int j, const std::vector<cplx>& w,
              const Vector& ref) {
  require_distinct(w, "Bethe parameters");
  return apply_product(T, i, j, w, ref);
}

Vector bethe_vector(const Model& model, const BetheParams& p, const Vector& ref) {
  const EntryAction T = entry_action(model);
  switch (model.embedding()) {
    case Embedding::Full: return bv_tcbg(T, p, ref);
    case Embedding::Upper:
      if (!p.v.empty()) throw ArgumentError("spin chain: second parameter set must be empty");
      return bv_gl2(T, 0, 1, p.u, ref);
    case Embedding::Lower:
      if (!p.u.empty()) throw ArgumentError("GL(2) bosons: first parameter set must be empty");
      return bv_gl2(T, 1, 2, p.v, ref);
  }
  return ref;
}

Vector bethe_vector(const Model& model, const BetheParams& p) {
  return bethe_vector(model, p, model.vacuum());
}

// ---------------------------------------------------------------------------

namespace {

// Ordered (unsymmetrized) term of the coordinate coefficient.
cplx omega_term(const std::vector<int>& j, const std::vector<cplx>& u,
                const std::vector<cplx>& xi, cplx c) {
  const std::size_t a = u.size();
  cplx t = 1.0;
  for (std::size_t q = 0; q < a; ++q)
    for (std::size_t k = 0; k < q; ++k) t *= f_fun(u[q], u[k], c);
  for (std::size_t k = 0; k < a; ++k) {
    for (std::size_t m = static_cast<std::size_t>(j[k]); m < xi.size(); ++m)
      t *= f_fun(u[k], xi[m], c);
    t *= g_fun(u[k], xi[static_cast<std::size_t>(j[k] - 1)], c);
  }
  return t;
}

template <class F>
void for_each_permutation(std::size_t n, F&& fn) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do fn(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
}

std::vector<cplx> permuted(const std::vector<cplx>& w,
                           const std::vector<std::size_t>& perm) {
  std::vector<cplx> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[perm[i]];
  return out;
}

}  // namespace

cplx omega(const std::vector<int>& j, const std::vector<cplx>& u,
           const std::vector<cplx>& xi, cplx c) {
  if (j.size() != u.size()) throw ArgumentError("omega: need one site per parameter");
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (j[k] < 1 || j[k] > static_cast<int>(xi.size()))
      throw ArgumentError("omega: site out of range");
    if (k && j[k] <= j[k - 1]) throw ArgumentError("omega: sites must increase");
  }
  require_distinct(u, "omega parameters");
  cplx s = 0.0;
  for_each_permutation(u.size(), [&](const std::vector<std::size_t>& perm) {
    s += omega_term(j, permuted(u, perm), xi, c);
  });
  return s;
}

SpinAmplitudeMap omega_coeffs(const std::vector<cplx>& u,
                              const std::vector<cplx>& xi, cplx c) {
  const int a = static_cast<int>(u.size());
  const int m = static_cast<int>(xi.size());
  if (a > m) throw ArgumentError("omega_coeffs: more parameters than sites");
  SpinAmplitudeMap out;
  for (auto s : subsets(m, a)) {
    for (int& x : s) ++x;
    out.emplace(s, omega(s, u, xi, c));
  }
  return out;
}

Vector spin_state(const SpinBasis& basis, const SpinAmplitudeMap& amps) {
  Vector x = Vector::Zero(static_cast<Index>(basis.dim()));
  for (const auto& [sites, amp] : amps) {
    std::size_t idx = 0;
    for (int j : sites) idx |= std::size_t{1} << (j - 1);
    x[static_cast<Index>(idx)] += amp;
  }
  return x;
}

cplx chi_wavefunction(const std::vector<int>& k, const std::vector<double>& z,
                      const std::vector<cplx>& u, const std::vector<cplx>& v,
                      double kappa) {
  const cplx c(0.0, -kappa);
  const std::size_t b = v.size();
  if (z.size() != b) throw ArgumentError("chi: need one point per v parameter");
  for (std::size_t i = 1; i < b; ++i)
    if (!(z[i] > z[i - 1])) throw DomainError("chi: points must be increasing");
  require_distinct(v, "chi parameters v");
  cplx s = 0.0;
  for_each_permutation(b, [&](const std::vector<std::size_t>& perm) {
    const std::vector<cplx> vs = permuted(v, perm);
    std::vector<cplx> shifted(b);
    for (std::size_t i = 0; i < b; ++i) shifted[i] = vs[i] + c;
    cplx t = u.empty() ? cplx(1.0) : omega(k, u, shifted, c);
    for (std::size_t q = 0; q < b; ++q)
      for (std::size_t r = 0; r < q; ++r) t *= f_fun(vs[q], vs[r], c);
    for (std::size_t q = 0; q < b; ++q) t *= std::exp(I_unit * z[q] * vs[q]);
    s += t;
  });
  return s;
}

namespace {

void check_coordinate_model(const Model& model, const BetheParams& p) {
  if (!model.fock() || model.kind() == ModelKind::DiscreteBoson)
    throw ArgumentError("lattice coordinate form needs a lattice boson model");
  if (model.embedding() == Embedding::Lower && !p.u.empty())
    throw ArgumentError("GL(2) bosons carry no first-level parameters");
  if (p.u.size() > p.v.size())
    throw ArgumentError("lattice coordinate form needs a <= b");
  require_distinct(p.u, "Bethe parameters u");
  require_distinct(p.v, "Bethe parameters v");
}

}  // namespace

cplx lattice_coordinate_coefficient(const Model& model, const BetheParams& p,
                                    const std::vector<int>& j,
                                    const std::vector<int>& k) {
  check_coordinate_model(model, p);
  const std::size_t a = p.u.size();
  const std::size_t b = p.v.size();
  if (j.size() != b || k.size() != a)
    throw ArgumentError("lattice coefficient: wrong tuple sizes");
  const double dl = model.spacing();
  const double kappa = model.lattice().kappa;
  const cplx c = model.coupling();
  cplx s = 0.0;
  for_each_permutation(b, [&](const std::vector<std::size_t>& perm) {
    const std::vector<cplx> vs = permuted(p.v, perm);
    std::vector<cplx> shifted(b);
    for (std::size_t i = 0; i < b; ++i) shifted[i] = vs[i] + c;
    cplx t = a == 0 ? cplx(1.0) : omega(k, p.u, shifted, c);
    for (std::size_t q = 0; q < b; ++q)
      for (std::size_t r = 0; r < q; ++r) t *= f_fun(vs[q], vs[r], c);
    for (std::size_t q = 0; q < b; ++q) t *= ipow(r0_fun(vs[q], dl), j[q] - 1);
    s += t;
  });
  const cplx pref = (a % 2 ? -1.0 : 1.0) *
                    ipow(-I_unit * dl * std::sqrt(kappa), static_cast<int>(b));
  return pref * s;
}

Vector lattice_coordinate_bv(const Model& model, const BetheParams& p) {
  check_coordinate_model(model, p);
  const FockBasis& basis = *model.fock();
  const int n_sites = basis.sites();
  const int a = static_cast<int>(p.u.size());
  const int b = static_cast<int>(p.v.size());
  if (b > basis.max_particles())
    throw CapacityError("lattice coordinate form: b exceeds the cutoff", basis.dim());
  const double dl = model.spacing();
  Vector x = Vector::Zero(static_cast<Index>(basis.dim()));
  // psi^+ on distinct sites: Delta^{-1/2} per quantum on a unit state.
  const double field_norm = std::pow(dl, -0.5 * b);
  const int first_colour = model.embedding() == Embedding::Lower ? 2 : 1;
  std::vector<int> occ;
  for (auto js : subsets(n_sites, b)) {
    for (int& q : js) ++q;
    for (auto ks : subsets(b, a)) {
      for (int& q : ks) ++q;
      occ.assign(static_cast<std::size_t>(2 * n_sites), 0);
      std::size_t kk = 0;
      for (int q = 1; q <= b; ++q) {
        const bool one = kk < ks.size() && ks[kk] == q;
        if (one) ++kk;
        const int colour = one ? first_colour : 2;
        occ[2 * (js[q - 1] - 1) + (colour - 1)] = 1;
      }
      const auto idx = basis.index(occ);
      x[static_cast<Index>(*idx)] +=
          field_norm * lattice_coordinate_coefficient(model, p, js, ks);
    }
  }
  return x;
}

std::map<std::pair<int, int>, double> color_content(const FockBasis& basis,
                                                    const Vector& x) {
  std::map<std::pair<int, int>, double> out;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const double w = std::norm(x[static_cast<Index>(i)]);
    if (w == 0.0) continue;
    int n1 = 0, n2 = 0;
    for (int s = 1; s <= basis.sites(); ++s) {
      n1 += basis.occupation(i, 1, s);
      n2 += basis.occupation(i, 2, s);
    }
    out[{n1, n2}] += w;
  }
  return out;
}

double coordinate_mismatch(const Model& model, const BetheParams& p) {
  const FockBasis& basis = *model.fock();
  Vector alg = bethe_vector(model, p);
  Vector crd = lattice_coordinate_bv(model, p);
  for (std::size_t i = 0; i < basis.dim(); ++i)
    for (int s = 1; s <= basis.sites(); ++s)
      if (basis.occupation(i, 1, s) + basis.occupation(i, 2, s) > 1) {
        alg[static_cast<Index>(i)] = 0.0;
        crd[static_cast<Index>(i)] = 0.0;
        break;
      }
  const double n = crd.norm();
  if (n == 0.0) throw DegenerateError("coordinate_mismatch: coordinate vector vanishes");
  return (alg - crd).norm() / n;
}

double chi_mismatch(const Model& model, const BetheParams& p,
                    const std::vector<double>& z) {
  check_coordinate_model(model, p);
  const double dl = model.spacing();
  const int a = static_cast<int>(p.u.size());
  const int b = static_cast<int>(p.v.size());
  std::vector<int> j;
  for (double x : z) {
    const double q = x / dl;
    if (std::abs(q - std::round(q)) > 1e-9)
      throw DomainError("chi_mismatch: point is not a lattice site");
    j.push_back(static_cast<int>(std::lround(q)));
  }
  const cplx pref = (a % 2 ? -1.0 : 1.0) *
                    ipow(-I_unit * dl * std::sqrt(model.lattice().kappa), b);
  double worst = 0.0;
  for (const auto& k0 : subsets(b, a)) {
    std::vector<int> k;
    for (int x : k0) k.push_back(x + 1);
    const cplx lat = lattice_coordinate_coefficient(model, p, j, k) / pref;
    const cplx cont = chi_wavefunction(k, z, p.u, p.v, model.lattice().kappa);
    worst = std::max(worst, std::abs(lat - cont) / std::abs(cont));
  }
  return worst;
}

}  // namespace nbgas
