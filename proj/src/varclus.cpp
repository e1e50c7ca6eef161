#include "sumeval/stats/varclus.hpp"

#include <algorithm>
#include <limits>

#include "sumeval/error.hpp"
#include "sumeval/stats/spearman.hpp"

namespace sumeval {

Linkage parse_linkage(const std::string& name) {
  if (name == "single") return Linkage::single;
  if (name == "complete") return Linkage::complete;
  if (name == "average") return Linkage::average;
  throw DataError("unknown linkage '" + name + "' (expected single, complete or average)");
}

Dendrogram varclus(const DataMatrix& data, Linkage linkage) {
  if (data.n_cols() < 2) throw DataError("varclus needs at least 2 variables");
  Dendrogram out;
  out.labels = data.column_names;
  const Eigen::MatrixXd rho = spearman_matrix(data.values, &out.warnings);
  const Eigen::MatrixXd distance = (1.0 - rho.array().square()).matrix();

  struct Cluster {
    int id;
    std::vector<int> members;
  };
  std::vector<Cluster> active;
  for (int j = 0; j < static_cast<int>(data.n_cols()); ++j) active.push_back({j, {j}});

  auto cluster_distance = [&](const Cluster& a, const Cluster& b) {
    double acc = linkage == Linkage::single ? std::numeric_limits<double>::infinity() : 0.0;
    for (int i : a.members) {
      for (int j : b.members) {
        const double d = distance(i, j);
        switch (linkage) {
          case Linkage::single: acc = std::min(acc, d); break;
          case Linkage::complete: acc = std::max(acc, d); break;
          case Linkage::average: acc += d; break;
        }
      }
    }
    if (linkage == Linkage::average) acc /= static_cast<double>(a.members.size() * b.members.size());
    return acc;
  };

  int next_id = static_cast<int>(data.n_cols());
  while (active.size() > 1) {
    std::size_t best_a = 0;
    std::size_t best_b = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const double d = cluster_distance(active[a], active[b]);
        if (d < best) {
          best = d;
          best_a = a;
          best_b = b;
        }
      }
    }
    Merge m;
    m.left = active[best_a].id;
    m.right = active[best_b].id;
    m.height = std::max(0.0, best);
    m.members = active[best_a].members;
    m.members.insert(m.members.end(), active[best_b].members.begin(), active[best_b].members.end());
    std::sort(m.members.begin(), m.members.end());
    active[best_a] = {next_id++, m.members};
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_b));
    out.merges.push_back(std::move(m));
  }
  return out;
}

}  // namespace sumeval
