#pragma once

#include <span>

#include "regionflow/partition.hpp"

namespace regionflow {

/// Hubert-Arabie adjusted Rand index between two labelings of the same items.
/// Returns 1 when both labelings are identical up to renaming (including the
/// degenerate all-in-one / all-singleton cases where the index is 0/0).
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

/// ARI over the zones present in both partitions.
double adjusted_rand_index(const ZonePartition& a, const ZonePartition& b);

}  // namespace regionflow
