#include "pairclust/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace pairclust::eval {

using nlohmann::json;

ContingencyTable::ContingencyTable(size_t num_labels, size_t num_clusters)
    : labels_(num_labels), clusters_(num_clusters), counts_(num_labels * num_clusters, 0) {
  if (num_labels < 1 || num_clusters < 1)
    throw std::invalid_argument("ContingencyTable: empty dimensions");
}

ContingencyTable ContingencyTable::from_assignments(const std::vector<int>& gold,
                                                    const std::vector<int>& predicted,
                                                    size_t num_labels,
                                                    size_t num_clusters) {
  if (gold.size() != predicted.size() || gold.empty())
    throw std::invalid_argument("from_assignments: need equal-length nonempty vectors");
  int max_label = -1, max_cluster = -1;
  for (size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] < 0 || predicted[i] < 0)
      throw std::invalid_argument("from_assignments: negative label or cluster id");
    max_label = std::max(max_label, gold[i]);
    max_cluster = std::max(max_cluster, predicted[i]);
  }
  if (num_labels == 0) num_labels = size_t(max_label) + 1;
  if (num_clusters == 0) num_clusters = size_t(max_cluster) + 1;
  if (size_t(max_label) >= num_labels || size_t(max_cluster) >= num_clusters)
    throw std::invalid_argument("from_assignments: id outside the declared dimensions");
  ContingencyTable t(num_labels, num_clusters);
  for (size_t i = 0; i < gold.size(); ++i)
    ++t.at(size_t(gold[i]), size_t(predicted[i]));
  return t;
}

long long ContingencyTable::label_total(size_t i) const {
  long long s = 0;
  for (size_t j = 0; j < clusters_; ++j) s += at(i, j);
  return s;
}

long long ContingencyTable::cluster_total(size_t j) const {
  long long s = 0;
  for (size_t i = 0; i < labels_; ++i) s += at(i, j);
  return s;
}

long long ContingencyTable::total() const {
  long long s = 0;
  for (const long long c : counts_) s += c;
  return s;
}

namespace {

constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

// Potential-based shortest augmenting path assignment, minimization, integer
// costs, n rows <= m columns.  Returns match[row] = column.
std::vector<int> hungarian_min(const std::vector<std::vector<long long>>& cost) {
  const int n = int(cost.size());
  const int m = int(cost[0].size());
  std::vector<long long> u(size_t(n) + 1, 0), v(size_t(m) + 1, 0);
  std::vector<int> p(size_t(m) + 1, 0), way(size_t(m) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<long long> minv(size_t(m) + 1, kInf);
    std::vector<char> used(size_t(m) + 1, 0);
    do {
      used[size_t(j0)] = 1;
      const int i0 = p[size_t(j0)];
      long long delta = kInf;
      int j1 = -1;
      for (int j = 1; j <= m; ++j) {
        if (used[size_t(j)]) continue;
        const long long cur = cost[size_t(i0 - 1)][size_t(j - 1)] - u[size_t(i0)] - v[size_t(j)];
        if (cur < minv[size_t(j)]) {
          minv[size_t(j)] = cur;
          way[size_t(j)] = j0;
        }
        if (minv[size_t(j)] < delta) {
          delta = minv[size_t(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[size_t(j)]) {
          u[size_t(p[size_t(j)])] += delta;
          v[size_t(j)] -= delta;
        } else {
          minv[size_t(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[size_t(j0)] != 0);
    do {
      const int j1 = way[size_t(j0)];
      p[size_t(j0)] = p[size_t(j1)];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> match(size_t(n), -1);
  for (int j = 1; j <= m; ++j)
    if (p[size_t(j)] > 0) match[size_t(p[size_t(j)] - 1)] = j - 1;
  return match;
}

// Maximum total value of an injective assignment of `rows` into `cols`.
long long solve_max(const std::vector<std::vector<long long>>& value,
                    const std::vector<int>& rows, const std::vector<int>& cols) {
  if (rows.empty()) return 0;
  long long max_v = 0;
  for (const int r : rows)
    for (const int c : cols) max_v = std::max(max_v, value[size_t(r)][size_t(c)]);
  std::vector<std::vector<long long>> cost(rows.size(),
                                           std::vector<long long>(cols.size()));
  for (size_t a = 0; a < rows.size(); ++a)
    for (size_t b = 0; b < cols.size(); ++b)
      cost[a][b] = max_v - value[size_t(rows[a])][size_t(cols[b])];
  const std::vector<int> match = hungarian_min(cost);
  long long total = 0;
  for (size_t a = 0; a < rows.size(); ++a)
    total += value[size_t(rows[a])][size_t(cols[size_t(match[a])])];
  return total;
}

}  // namespace

std::vector<int> hungarian_assign(const ContingencyTable& t) {
  const size_t C = t.num_clusters();
  const size_t L = t.num_labels();
  const size_t S = std::max(L, C);  // pad labels with zero-count columns
  std::vector<std::vector<long long>> value(C, std::vector<long long>(S, 0));
  for (size_t j = 0; j < C; ++j)
    for (size_t l = 0; l < L; ++l) value[j][l] = t.at(l, j);

  std::vector<int> all_cols(S);
  for (size_t l = 0; l < S; ++l) all_cols[l] = int(l);
  std::vector<int> all_rows(C);
  for (size_t j = 0; j < C; ++j) all_rows[j] = int(j);
  const long long best_total = solve_max(value, all_rows, all_cols);

  // Fix clusters in order, each to the smallest label that still allows the
  // optimal total: the lexicographically smallest optimal mapping.
  std::vector<int> mapping(C, -1);
  std::vector<char> used(S, 0);
  long long fixed = 0;
  for (size_t j = 0; j < C; ++j) {
    std::vector<int> rest_rows(all_rows.begin() + long(j) + 1, all_rows.end());
    for (size_t l = 0; l < S; ++l) {
      if (used[l]) continue;
      std::vector<int> rest_cols;
      for (size_t c = 0; c < S; ++c)
        if (!used[c] && c != l) rest_cols.push_back(int(c));
      const long long rest = solve_max(value, rest_rows, rest_cols);
      if (fixed + value[j][l] + rest == best_total) {
        mapping[j] = int(l);
        used[l] = 1;
        fixed += value[j][l];
        break;
      }
    }
  }
  return mapping;
}

Scores accuracy_and_fscores(const ContingencyTable& t, const std::vector<int>& mapping) {
  if (mapping.size() != t.num_clusters())
    throw std::invalid_argument("accuracy_and_fscores: mapping size mismatch");
  const size_t L = t.num_labels();
  const double n = double(t.total());
  if (n == 0) throw std::invalid_argument("accuracy_and_fscores: empty table");

  std::vector<int> cluster_of(L, -1);  // inverse mapping, real labels only
  for (size_t j = 0; j < mapping.size(); ++j) {
    if (mapping[j] >= 0 && size_t(mapping[j]) < L) cluster_of[size_t(mapping[j])] = int(j);
  }

  Scores s;
  double matched = 0.0, macro_sum = 0.0, weighted_sum = 0.0;
  size_t macro_classes = 0;
  for (size_t c = 0; c < L; ++c) {
    const double support = double(t.label_total(c));
    if (support == 0) continue;  // class absent from gold: excluded from averages
    ++macro_classes;
    double tp = 0.0, predicted = 0.0;
    if (cluster_of[c] >= 0) {
      tp = double(t.at(c, size_t(cluster_of[c])));
      predicted = double(t.cluster_total(size_t(cluster_of[c])));
    }
    matched += tp;
    const double precision = predicted > 0 ? tp / predicted : 0.0;
    const double recall = tp / support;
    const double f1 =
        precision + recall > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    macro_sum += f1;
    weighted_sum += (support / n) * f1;
  }
  s.accuracy = matched / n;
  s.f_micro = s.accuracy;  // single-label: global precision = recall = accuracy
  s.f_macro = macro_classes ? macro_sum / double(macro_classes) : 0.0;
  s.f_weighted = weighted_sum;
  return s;
}

namespace {

long double comb2(long long x) { return 0.5L * (long double)(x) * (long double)(x - 1); }

}  // namespace

double ari(const ContingencyTable& t) {
  const long long n = t.total();
  if (n < 1) throw std::invalid_argument("ari: empty table");
  long double index = 0, sum_a = 0, sum_b = 0;
  for (size_t i = 0; i < t.num_labels(); ++i) sum_a += comb2(t.label_total(i));
  for (size_t j = 0; j < t.num_clusters(); ++j) sum_b += comb2(t.cluster_total(j));
  for (size_t i = 0; i < t.num_labels(); ++i)
    for (size_t j = 0; j < t.num_clusters(); ++j) index += comb2(t.at(i, j));
  const long double pairs = comb2(n);
  if (pairs == 0) return 1.0;  // single element: identical trivial partitions
  const long double expected = sum_a * sum_b / pairs;
  const long double max_index = 0.5L * (sum_a + sum_b);
  const long double denom = max_index - expected;
  if (std::fabs((double)denom) < 1e-12)
    return std::fabs((double)(index - max_index)) < 1e-9 ? 1.0 : 0.0;
  return double((index - expected) / denom);
}

double mutual_information(const ContingencyTable& t) {
  const double n = double(t.total());
  if (n < 1) throw std::invalid_argument("mutual_information: empty table");
  double mi = 0.0;
  for (size_t i = 0; i < t.num_labels(); ++i) {
    const double a = double(t.label_total(i));
    if (a == 0) continue;
    for (size_t j = 0; j < t.num_clusters(); ++j) {
      const double nij = double(t.at(i, j));
      if (nij == 0) continue;
      const double b = double(t.cluster_total(j));
      mi += (nij / n) * std::log(n * nij / (a * b));
    }
  }
  return mi;
}

double entropy_labels(const ContingencyTable& t) {
  const double n = double(t.total());
  double h = 0.0;
  for (size_t i = 0; i < t.num_labels(); ++i) {
    const double a = double(t.label_total(i));
    if (a > 0) h -= (a / n) * std::log(a / n);
  }
  return h;
}

double entropy_clusters(const ContingencyTable& t) {
  const double n = double(t.total());
  double h = 0.0;
  for (size_t j = 0; j < t.num_clusters(); ++j) {
    const double b = double(t.cluster_total(j));
    if (b > 0) h -= (b / n) * std::log(b / n);
  }
  return h;
}

double expected_mutual_information(const ContingencyTable& t) {
  const long long n = t.total();
  if (n < 1) throw std::invalid_argument("expected_mutual_information: empty table");
  // log k! table up to n
  std::vector<double> lf(size_t(n) + 1, 0.0);
  for (long long k = 2; k <= n; ++k) lf[size_t(k)] = lf[size_t(k - 1)] + std::log(double(k));
  const double ln_n = std::log(double(n));
  double emi = 0.0;
  for (size_t i = 0; i < t.num_labels(); ++i) {
    const long long a = t.label_total(i);
    if (a == 0) continue;
    for (size_t j = 0; j < t.num_clusters(); ++j) {
      const long long b = t.cluster_total(j);
      if (b == 0) continue;
      const long long lo = std::max(1LL, a + b - n);
      const long long hi = std::min(a, b);
      for (long long nij = lo; nij <= hi; ++nij) {
        // hypergeometric pmf of nij given margins (a, b, n)
        const double logp = lf[size_t(a)] + lf[size_t(b)] + lf[size_t(n - a)] +
                            lf[size_t(n - b)] - lf[size_t(n)] - lf[size_t(nij)] -
                            lf[size_t(a - nij)] - lf[size_t(b - nij)] -
                            lf[size_t(n - a - b + nij)];
        const double term = (double(nij) / double(n)) *
                            (ln_n + std::log(double(nij)) - std::log(double(a)) -
                             std::log(double(b)));
        emi += term * std::exp(logp);
      }
    }
  }
  return emi;
}

double nmi(const ContingencyTable& t) {
  const double hu = entropy_labels(t);
  const double hv = entropy_clusters(t);
  if (hu <= 0.0 || hv <= 0.0) return 0.0;  // degenerate single-class side
  return mutual_information(t) / std::sqrt(hu * hv);
}

double ami(const ContingencyTable& t) {
  const double hu = entropy_labels(t);
  const double hv = entropy_clusters(t);
  if (hu <= 0.0 || hv <= 0.0) return 0.0;  // degenerate single-class side
  const double mi = mutual_information(t);
  const double emi = expected_mutual_information(t);
  const double denom = 0.5 * (hu + hv) - emi;
  if (std::fabs(denom) < 1e-15) return 0.0;
  return (mi - emi) / denom;
}

double dbi(const std::vector<std::vector<double>>& points,
           const std::vector<int>& cluster_ids) {
  if (points.size() != cluster_ids.size() || points.empty())
    throw std::invalid_argument("dbi: need one cluster id per point");
  const size_t dim = points[0].size();
  int max_id = -1;
  for (const int id : cluster_ids) {
    if (id < 0) throw std::invalid_argument("dbi: negative cluster id");
    max_id = std::max(max_id, id);
  }
  std::vector<std::vector<size_t>> members(size_t(max_id) + 1);
  for (size_t p = 0; p < points.size(); ++p) {
    if (points[p].size() != dim) throw std::invalid_argument("dbi: ragged points");
    members[size_t(cluster_ids[p])].push_back(p);
  }
  std::vector<size_t> live;  // nonempty clusters only
  for (size_t k = 0; k < members.size(); ++k)
    if (!members[k].empty()) live.push_back(k);
  if (live.size() < 2)
    throw std::runtime_error("dbi: fewer than two nonempty clusters");

  auto dist = [dim](const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (size_t d = 0; d < dim; ++d) s += (x[d] - y[d]) * (x[d] - y[d]);
    return std::sqrt(s);
  };

  std::vector<std::vector<double>> centroid(live.size(), std::vector<double>(dim, 0.0));
  std::vector<double> scatter(live.size(), 0.0);  // mean distance to centroid
  for (size_t k = 0; k < live.size(); ++k) {
    const auto& idx = members[live[k]];
    for (const size_t p : idx)
      for (size_t d = 0; d < dim; ++d) centroid[k][d] += points[p][d];
    for (size_t d = 0; d < dim; ++d) centroid[k][d] /= double(idx.size());
    for (const size_t p : idx) scatter[k] += dist(points[p], centroid[k]);
    scatter[k] /= double(idx.size());
  }

  double sum = 0.0;
  for (size_t i = 0; i < live.size(); ++i) {
    double worst = 0.0;
    for (size_t j = 0; j < live.size(); ++j) {
      if (j == i) continue;
      const double sep = dist(centroid[i], centroid[j]);
      const double r = (scatter[i] + scatter[j]) / sep;  // inf when centroids collide
      worst = std::max(worst, r);
    }
    sum += worst;
  }
  return sum / double(live.size());
}

ClusteringReport report(const std::vector<int>& gold, const std::vector<int>& predicted,
                        const std::vector<std::vector<double>>& distributions) {
  size_t num_clusters = 0;
  if (!distributions.empty()) {
    if (distributions.size() != gold.size())
      throw std::invalid_argument("report: one distribution per assignment expected");
    num_clusters = distributions[0].size();
  }
  ClusteringReport r{ContingencyTable::from_assignments(gold, predicted, 0, num_clusters),
                     {}, {}, 0, 0, 0, 0, 0, gold.size()};
  r.mapping = hungarian_assign(r.table);
  r.scores = accuracy_and_fscores(r.table, r.mapping);
  r.ari = ari(r.table);
  r.ami = ami(r.table);
  r.nmi = nmi(r.table);
  for (size_t j = 0; j < r.table.num_clusters(); ++j)
    if (r.table.cluster_total(j) > 0) ++r.nonempty_clusters;
  if (!distributions.empty() && r.nonempty_clusters >= 2)
    r.dbi = dbi(distributions, predicted);
  else
    r.dbi = std::numeric_limits<double>::quiet_NaN();
  return r;
}

std::string ClusteringReport::to_json() const {
  json j;
  json rows = json::array();
  for (size_t i = 0; i < table.num_labels(); ++i) {
    json row = json::array();
    for (size_t c = 0; c < table.num_clusters(); ++c) row.push_back(table.at(i, c));
    rows.push_back(std::move(row));
  }
  j["contingency"] = std::move(rows);
  j["mapping"] = mapping;
  j["accuracy"] = scores.accuracy;
  j["f_weighted"] = scores.f_weighted;
  j["f_micro"] = scores.f_micro;
  j["f_macro"] = scores.f_macro;
  j["ari"] = ari;
  j["ami"] = ami;
  j["nmi"] = nmi;
  if (std::isnan(dbi))
    j["dbi"] = nullptr;
  else
    j["dbi"] = dbi;
  j["nonempty_clusters"] = nonempty_clusters;
  j["num_points"] = num_points;
  return j.dump(2);
}

std::string ClusteringReport::to_text() const {
  char buf[256];
  std::string out =
      "  F-score  F-micro  F-macro  Accuracy      ARI      AMI      NMI\n";
  std::snprintf(buf, sizeof(buf),
                "  %7.1f  %7.1f  %7.1f  %8.1f  %7.1f  %7.1f  %7.1f\n",
                100.0 * scores.f_weighted, 100.0 * scores.f_micro,
                100.0 * scores.f_macro, 100.0 * scores.accuracy, 100.0 * ari,
                100.0 * ami, 100.0 * nmi);
  out += buf;
  if (std::isnan(dbi))
    std::snprintf(buf, sizeof(buf), "  n=%zu  clusters used=%zu/%zu  DBI=n/a\n",
                  num_points, nonempty_clusters, table.num_clusters());
  else
    std::snprintf(buf, sizeof(buf), "  n=%zu  clusters used=%zu/%zu  DBI=%.4f\n",
                  num_points, nonempty_clusters, table.num_clusters(), dbi);
  out += buf;
  return out;
}

}  // namespace pairclust::eval
