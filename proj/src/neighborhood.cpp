#include "cst/neighborhood.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "cst/kernels/distance.hpp"

namespace cst {

SearchSpaces partition_search_spaces(const Dataset& data, std::span<const ProtectedValue> spec) {
  if (spec.empty()) throw Error("protected group definition is empty");
  std::vector<std::span<const double>> cols;
  for (const auto& p : spec) cols.push_back(data.column(p.attribute));
  SearchSpaces out;
  for (std::size_t r = 0; r < data.size(); ++r) {
    bool match = true;
    for (std::size_t i = 0; i < spec.size() && match; ++i) match = cols[i][r] == spec[i].value;
    (match ? out.control : out.test).push_back(r);
  }
  if (out.control.empty()) throw Error("control search space is empty: no record has the protected values");
  if (out.test.empty()) throw Error("test search space is empty: every record has the protected values");
  return out;
}

NeighborSet NeighborSet::prefix(std::size_t k) const {
  NeighborSet out;
  const auto m = std::min(k, members.size());
  out.members.assign(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(m));
  out.short_set = m < k;
  return out;
}

SpaceIndex::SpaceIndex(const Dataset& data, std::vector<std::size_t> members,
                       const DistanceContext& ctx)
    : ctx_(&ctx), members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  for (const auto& name : ctx.columns()) {
    const auto col = data.column(name);
    std::vector<double> gathered;
    gathered.reserve(members_.size());
    for (auto r : members_) gathered.push_back(col[r]);
    columns_.push_back(std::move(gathered));
  }
  for (const auto& c : columns_) column_ptrs_.push_back(c.data());
}

void SpaceIndex::distances(std::span<const double> center, std::span<double> out) const {
  if (center.size() != columns_.size()) throw Error("center arity does not match the space");
  if (out.size() < members_.size()) throw Error("distance buffer too small");
  kernels::DistanceBlock block;
  block.columns = column_ptrs_;
  block.center = center;
  block.divisors = ctx_->divisors();
  block.categorical = ctx_->categorical();
  block.attribute_count = ctx_->attribute_count();
  block.records = members_.size();
  kernels::distances(block, out.data());
}

NeighborSet get_top_k(std::span<const double> center, const SpaceIndex& space, std::size_t k,
                      const TopKOptions& options) {
  if (k == 0) throw Error("k must be at least 1");
  std::vector<double> dist(space.size());
  space.distances(center, dist);

  const auto members = space.members();
  std::vector<Neighbor> candidates;
  candidates.reserve(members.size());
  for (std::size_t j = 0; j < members.size(); ++j) {
    if (options.exclude && members[j] == *options.exclude) continue;
    if (options.max_distance && dist[j] > *options.max_distance) continue;
    candidates.push_back({members[j], dist[j]});
  }
  auto closer = [](const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
  };
  NeighborSet out;
  const auto m = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(m),
                    candidates.end(), closer);
  // Copy rather than shrink: the candidate buffer spans the whole space and
  // every stored group would otherwise keep that capacity.
  out.members.assign(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(m));
  out.short_set = m < k;
  return out;
}

Groups build_groups(std::size_t c, const Dataset& factual, const Dataset& test_centers,
                    const SpaceIndex& control, const SpaceIndex& test, std::size_t k,
                    std::optional<double> max_distance) {
  if (test_centers.size() != factual.size())
    throw Error(fmt::format("counterfactual dataset has {} records, factual has {}",
                            test_centers.size(), factual.size()));
  const auto members = control.members();
  if (!std::binary_search(members.begin(), members.end(), c))
    throw Error(fmt::format("record {} is not in the control search space", c));
  const auto& ctx = control.context();
  Groups g;
  g.control = get_top_k(ctx.center_of(factual, c), control, k, {c, max_distance});
  g.test = get_top_k(ctx.center_of(test_centers, c), test, k, {std::nullopt, max_distance});
  return g;
}

}  // namespace cst
