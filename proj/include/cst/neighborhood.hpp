#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cst/dataset.hpp"
#include "cst/metric.hpp"

namespace cst {

/// Record indices (ascending) of the protected control space and the
/// complementary test space.
struct SearchSpaces {
  std::vector<std::size_t> control;
  std::vector<std::size_t> test;
};

/// Control = records matching every (attribute, value) pair; test = the rest.
/// Throws when either side is empty.
[[nodiscard]] SearchSpaces partition_search_spaces(const Dataset& data,
                                                   std::span<const ProtectedValue> spec);

struct Neighbor {
  std::size_t index = 0;  // record index in the dataset
  double distance = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Up to k neighbours in ascending (distance, record index) order. `short_set`
/// marks that fewer than k candidates were available.
struct NeighborSet {
  std::vector<Neighbor> members;
  bool short_set = false;

  [[nodiscard]] std::size_t size() const noexcept { return members.size(); }
  [[nodiscard]] NeighborSet prefix(std::size_t k) const;
  friend bool operator==(const NeighborSet&, const NeighborSet&) = default;
};

/// One search space gathered column-major for the distance kernels.
class SpaceIndex {
 public:
  SpaceIndex(const Dataset& data, std::vector<std::size_t> members, const DistanceContext& ctx);

  [[nodiscard]] std::size_t size() const noexcept { return members_.size(); }
  [[nodiscard]] std::span<const std::size_t> members() const noexcept { return members_; }
  [[nodiscard]] const DistanceContext& context() const noexcept { return *ctx_; }

  /// Distance from `center` (kernel order, see DistanceContext::center_of) to
  /// every member, written to `out` (size() entries).
  void distances(std::span<const double> center, std::span<double> out) const;

 private:
  const DistanceContext* ctx_;
  std::vector<std::size_t> members_;
  std::vector<std::vector<double>> columns_;
  std::vector<const double*> column_ptrs_;
};

struct TopKOptions {
  /// Record index to leave out (the complainant when searching its own space).
  std::optional<std::size_t> exclude;
  /// Members farther than this are not neighbours.
  std::optional<double> max_distance;
};

/// The k members of `space` closest to `center`; ties go to the smaller
/// record index.
[[nodiscard]] NeighborSet get_top_k(std::span<const double> center, const SpaceIndex& space,
                                    std::size_t k, const TopKOptions& options = {});

struct Groups {
  NeighborSet control;
  NeighborSet test;
};

/// Control group around the factual record c in the control space (c itself
/// excluded); test group around `test_centers`' record c in the test space.
/// Passing the factual dataset as `test_centers` yields situation testing.
[[nodiscard]] Groups build_groups(std::size_t c, const Dataset& factual,
                                  const Dataset& test_centers, const SpaceIndex& control,
                                  const SpaceIndex& test, std::size_t k,
                                  std::optional<double> max_distance = std::nullopt);

}  // namespace cst
