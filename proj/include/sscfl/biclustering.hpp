#pragma once

#include <cstdint>
#include <vector>

#include "sscfl/phase1.hpp"

namespace sscfl {

struct CoclusterResult {
  std::vector<int> row_labels;  // per surviving location row
  std::vector<int> col_labels;  // per customer
  int k = 0;
};

/// Bipartite spectral co-clustering. Normalizes the feature matrix as
/// D1^-1/2 A D2^-1/2, takes the ceil(log2 k) leading nontrivial singular
/// vector pairs, embeds rows and columns through the same D^-1/2 scaling and
/// clusters the stacked embedding with k-means. Deterministic in (A, k,
/// seed); the k-means seeding works on a canonically ordered copy of the
/// points, so relabeling rows of A permutes the labels with them.
CoclusterResult spectral_cocluster(const FeatureMatrix& A, int k,
                                   std::uint64_t seed);

/// Fraction of allocation mass that crosses region boundaries.
double inter_region_loss(const RegionSet& candidate, const FeatureMatrix& A);

}  // namespace sscfl
