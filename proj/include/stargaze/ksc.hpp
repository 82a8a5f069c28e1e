#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace stargaze::ksc {

using Vec = std::vector<double>;

/// Translates x by q positions, zero-filling vacated slots.
/// q > 0 moves contents toward higher indices. Throws errc::shift_out_of_range
/// when |q| exceeds q_max (pass q_max < 0 to skip the check).
Vec shift(const Vec& x, int q, int q_max = -1);

/// argmin over a of ||x - a*y||, i.e. (x.y)/(y.y). Throws errc::zero_norm.
double optimal_alpha(const Vec& x, const Vec& y);

struct DistanceResult {
  double d = 0.0;     // min over q, alpha of ||x - alpha*shift(y,q)|| / ||x||
  int q = 0;          // minimizing shift
  double alpha = 0.0; // minimizing scale for that shift
};

/// Shape distance: invariant to scaling of either argument and to shifts of y
/// within [-q_max, q_max]. Ties in q resolve toward smaller |q|, then toward
/// negative q. Throws errc::zero_norm when either vector is zero.
DistanceResult distance(const Vec& x, const Vec& y, int q_max);

/// Cluster description produced by `cluster`.
struct ClusterModel {
  int k = 0;
  std::uint64_t seed = 0;
  int q_max = 0;
  int iterations = 0;
  double objective = 0.0;              // final sum of squared distances
  std::vector<double> objective_trace; // one entry per recorded iteration
  std::vector<Vec> centroids;          // k unit-norm vectors
  std::vector<std::string> repos;      // input order
  std::vector<int> assignment;         // parallel to repos

  std::vector<std::size_t> cluster_sizes() const;
};

/// Centroid update: aligns each member to `current` (optimal shift and scale,
/// then unit-normalized) and returns the unit vector minimizing the summed
/// squared shape distance over the aligned members, computed from the spectral
/// decomposition of sum_i (I - m_i m_i^T). Within a degenerate minimizing
/// eigenspace the direction closest to the member mean is taken; the sign is
/// fixed so the entry sum is non-negative.
Vec centroid(const std::vector<Vec>& members, int q_max, const Vec& current);

struct Params {
  int k = 5;
  std::uint64_t seed = 0;
  int q_max = 13;
  int max_iter = 100;
  int restarts = 1;
  int jobs = 1;
};

/// K-spectral-centroid clustering: alternates nearest-centroid assignment
/// under `distance` with the spectral centroid update. Deterministic for a
/// fixed seed regardless of `jobs`. Empty clusters are re-seeded with the
/// point farthest from its current centroid. Throws errc::degenerate_data
/// when the input has fewer distinct vectors than k.
ClusterModel cluster(const std::vector<Vec>& vectors,
                     const std::vector<std::string>& names,
                     const Params& params);

struct BetaCvCurve {
  std::vector<std::pair<int, double>> entries; // (k, beta_cv), k ascending
};

/// beta_CV for each model: CV of intracluster distances over CV of
/// intercluster distances, on the pairwise distance matrix of `vectors`
/// (distance evaluated both ways and averaged). All models must partition the
/// same vectors. Throws errc::undefined_cv when a side has zero mean.
BetaCvCurve beta_cv(const std::vector<Vec>& vectors,
                    const std::vector<const ClusterModel*>& models,
                    int q_max, int jobs = 1);

struct SelectKResult {
  int k = 0;
  bool stable = false; // false when no k satisfied the stability rule
};

/// Smallest k whose next `window` curve values stay within
/// stability_tol * beta_cv(k); falls back to the k minimizing the maximum
/// forward deviation (flagged not stable) when none qualifies.
SelectKResult select_k(const BetaCvCurve& curve, double stability_tol = 0.10,
                       int window = 3);

void save_model(const ClusterModel& model, const std::string& path);
ClusterModel load_model(const std::string& path);

} // namespace stargaze::ksc
