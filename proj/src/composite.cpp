#include "nbgas/composite.hpp"

#include <string>

#include "nbgas/errors.hpp"
#include "nbgas/structfun.hpp"

namespace nbgas {

SplitSpec SplitSpec::per_site(const Model& model) {
  SplitSpec s;
  for (int n = model.first_site(); n < model.last_site(); ++n) s.cuts.push_back(n);
  return s;
}

std::vector<std::pair<int, int>> intervals(const Model& model,
                                           const SplitSpec& spec) {
  std::vector<std::pair<int, int>> out;
  int start = model.first_site();
  for (int cut : spec.cuts) {
    if (cut < start || cut >= model.last_site())
      throw ArgumentError("split: invalid cut at site " + std::to_string(cut));
    out.emplace_back(start, cut);
    start = cut + 1;
  }
  out.emplace_back(start, model.last_site());
  return out;
}

std::vector<Model> split_models(const Model& model, const SplitSpec& spec) {
  std::vector<Model> out;
  for (auto [a, b] : intervals(model, spec)) out.push_back(model.slice(a, b));
  return out;
}

std::vector<AuxMatrix> split_monodromy(const Model& model,
                                       const SplitSpec& spec, cplx u) {
  std::vector<AuxMatrix> out;
  for (const auto& part : split_models(model, spec)) out.push_back(part.monodromy(u));
  return out;
}

std::vector<std::vector<int>> partitions(
    int n, int m, const std::optional<std::vector<int>>& sizes) {
  if (m < 1) throw ArgumentError("partitions: need at least one subset");
  if (sizes && static_cast<int>(sizes->size()) != m)
    throw ArgumentError("partitions: one size per subset required");
  std::vector<std::vector<int>> out;
  std::vector<int> lab(static_cast<std::size_t>(n), 0);
  std::vector<int> count(static_cast<std::size_t>(m), 0);
  auto rec = [&](auto&& self, int i) -> void {
    if (i == n) {
      if (!sizes || count == *sizes) out.push_back(lab);
      return;
    }
    for (int k = 0; k < m; ++k) {
      if (sizes && count[k] >= (*sizes)[k]) continue;
      lab[i] = k;
      ++count[k];
      self(self, i + 1);
      --count[k];
    }
  };
  rec(rec, 0);
  return out;
}

namespace {

std::vector<std::vector<cplx>> group(const std::vector<cplx>& w,
                                     const std::vector<int>& lab, int m) {
  std::vector<std::vector<cplx>> out(static_cast<std::size_t>(m));
  for (std::size_t i = 0; i < w.size(); ++i) out[lab[i]].push_back(w[i]);
  return out;
}

}  // namespace

Vector bv_composite(const Model& model, const SplitSpec& spec,
                    const BetheParams& p, const Vector& ref,
                    const PartialBuilder& build) {
  require_distinct(p.u, "Bethe parameters u");
  require_distinct(p.v, "Bethe parameters v");
  const std::vector<Model> parts = split_models(model, spec);
  const int m = static_cast<int>(parts.size());
  const bool two_colour = model.embedding() == Embedding::Full;
  const PartialBuilder builder =
      build ? build : PartialBuilder([](const Model& part, const BetheParams& q,
                                        const Vector& x) {
        return bethe_vector(part, q, x);
      });

  Vector total = Vector::Zero(ref.size());
  const auto pu = partitions(static_cast<int>(p.u.size()), m);
  const auto pv = partitions(static_cast<int>(p.v.size()), m);
  for (const auto& lu : pu) {
    const auto us = group(p.u, lu, m);
    for (const auto& lv : pv) {
      const auto vs = group(p.v, lv, m);
      // Partial vectors with more first-level than second-level
      // parameters vanish in the two-colour models.
      bool skip = false;
      if (two_colour && model.kind() != ModelKind::DiscreteBoson)
        for (int j = 0; j < m; ++j) skip = skip || us[j].size() > vs[j].size();
      if (skip) continue;
      cplx w = 1.0;
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < j; ++k) {
          for (cplx x : us[k]) w *= parts[j].r1(x);
          for (cplx x : vs[j]) w *= parts[k].r3(x);
          w *= f_prod(us[j], us[k], p.c) * f_prod(vs[j], vs[k], p.c) /
               f_prod(vs[j], us[k], p.c);
        }
      Vector x = ref;
      for (int j = 0; j < m; ++j) x = builder(parts[j], {us[j], vs[j], p.c}, x);
      total += w * x;
    }
  }
  return total;
}

Vector bv_composite(const Model& model, const SplitSpec& spec,
                    const BetheParams& p) {
  return bv_composite(model, spec, p, model.vacuum());
}

double composite_residual(const Model& model, const SplitSpec& spec,
                          const BetheParams& p) {
  const Vector whole = bethe_vector(model, p);
  const double n = whole.norm();
  if (n == 0.0) throw DegenerateError("composite_residual: total Bethe vector vanishes");
  return (bv_composite(model, spec, p) - whole).norm() / n;
}

}  // namespace nbgas
