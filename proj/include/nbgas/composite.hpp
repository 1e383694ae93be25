#pragma once

// Interval splitting of the monodromy and the partition-sum expansion of
// total Bethe vectors in terms of partial ones.

#include <functional>
#include <optional>
#include <vector>

#include "nbgas/bethe.hpp"

namespace nbgas {

struct SplitSpec {
  // Last site of every interval but the final one (absolute site numbers).
  std::vector<int> cuts;

  static SplitSpec per_site(const Model& model);
  static SplitSpec none() { return {}; }
};

// Site ranges [first, last] of the intervals of `model` under `spec`.
std::vector<std::pair<int, int>> intervals(const Model& model,
                                           const SplitSpec& spec);
std::vector<Model> split_models(const Model& model, const SplitSpec& spec);
std::vector<AuxMatrix> split_monodromy(const Model& model,
                                       const SplitSpec& spec, cplx u);

// Every assignment of n labelled elements to m labelled subsets
// (entry i = subset of element i), optionally with fixed subset sizes.
std::vector<std::vector<int>> partitions(
    int n, int m, const std::optional<std::vector<int>>& sizes = std::nullopt);

using PartialBuilder =
    std::function<Vector(const Model& part, const BetheParams&, const Vector& ref)>;

// Partition sum with r- and f-weights over the intervals of `spec`,
// composing partial Bethe vectors on the shared global space.
Vector bv_composite(const Model& model, const SplitSpec& spec,
                    const BetheParams& p, const Vector& ref,
                    const PartialBuilder& build = {});
Vector bv_composite(const Model& model, const SplitSpec& spec,
                    const BetheParams& p);

// ||composite - total|| / ||total||.
double composite_residual(const Model& model, const SplitSpec& spec,
                          const BetheParams& p);

}  // namespace nbgas
