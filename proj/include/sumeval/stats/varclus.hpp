#pragma once

#include <string>
#include <vector>

#include "sumeval/stats/data_matrix.hpp"

namespace sumeval {

enum class Linkage { single, complete, average };

/// Clusters are numbered 0..p-1 for the input variables and p+i for the
/// cluster created by merge i.
struct Merge {
  int left = 0;
  int right = 0;
  double height = 0.0;       // 1 - rho^2 under the chosen linkage
  std::vector<int> members;  // variable indices, ascending
};

struct Dendrogram {
  std::vector<std::string> labels;
  std::vector<Merge> merges;
  Warnings warnings;
};

/// Agglomerative clustering of variables with similarity rho^2 (Spearman)
/// and distance 1 - rho^2. Ties merge the pair that comes first in cluster
/// order.
Dendrogram varclus(const DataMatrix& data, Linkage linkage = Linkage::average);

Linkage parse_linkage(const std::string& name);

}  // namespace sumeval
