#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace pairclust::eval {

// Rows are gold labels, columns are predicted clusters.
class ContingencyTable {
 public:
  ContingencyTable(size_t num_labels, size_t num_clusters);
  static ContingencyTable from_assignments(const std::vector<int>& gold,
                                           const std::vector<int>& predicted,
                                           size_t num_labels = 0,
                                           size_t num_clusters = 0);

  long long& at(size_t label, size_t cluster) {
    return counts_[label * clusters_ + cluster];
  }
  long long at(size_t label, size_t cluster) const {
    return counts_[label * clusters_ + cluster];
  }
  size_t num_labels() const { return labels_; }
  size_t num_clusters() const { return clusters_; }
  long long label_total(size_t i) const;
  long long cluster_total(size_t j) const;
  long long total() const;

 private:
  size_t labels_, clusters_;
  std::vector<long long> counts_;
};

// Injective cluster -> label mapping maximizing matched counts.  The table is
// implicitly zero-padded to square, so the mapping is total even for empty or
// surplus clusters; values >= num_labels name a padding label ("no real
// class").  Among score ties the lexicographically smallest mapping wins.
std::vector<int> hungarian_assign(const ContingencyTable& t);

struct Scores {
  double accuracy = 0.0;
  double f_weighted = 0.0;
  double f_micro = 0.0;  // equals accuracy on single-label assignments
  double f_macro = 0.0;  // unpredicted gold classes count as F1 = 0
};
Scores accuracy_and_fscores(const ContingencyTable& t, const std::vector<int>& mapping);

// Pair-counting adjusted Rand index; 0 when Index equals its expectation.
double ari(const ContingencyTable& t);

double mutual_information(const ContingencyTable& t);  // nats
double entropy_labels(const ContingencyTable& t);
double entropy_clusters(const ContingencyTable& t);
// Expected MI under the fixed-marginals hypergeometric permutation model.
double expected_mutual_information(const ContingencyTable& t);

// NMI = I / sqrt(H(U) H(V)); AMI = (I - E[I]) / (mean(H(U),H(V)) - E[I]).
// A degenerate single-class side (H = 0) is defined as 0 for both.
double nmi(const ContingencyTable& t);
double ami(const ContingencyTable& t);

// Davies-Bouldin over the given points grouped by cluster id, Euclidean
// distance, empty clusters skipped; throws if fewer than two are nonempty.
double dbi(const std::vector<std::vector<double>>& points,
           const std::vector<int>& cluster_ids);

struct ClusteringReport {
  ContingencyTable table;
  std::vector<int> mapping;
  Scores scores;
  double ari = 0.0, ami = 0.0, nmi = 0.0;
  double dbi = 0.0;        // NaN when undefined (fewer than 2 nonempty clusters)
  size_t nonempty_clusters = 0;
  size_t num_points = 0;
  std::string to_json() const;
  std::string to_text() const;  // columns: F-score F-micro F-macro Acc ARI AMI NMI
};
ClusteringReport report(const std::vector<int>& gold, const std::vector<int>& predicted,
                        const std::vector<std::vector<double>>& distributions = {});

}  // namespace pairclust::eval
