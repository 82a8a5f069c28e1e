#pragma once

#include "stargaze/ksc.hpp"
#include "stargaze/regress.hpp"
#include "stargaze/types.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace stargaze::evalharness {

struct FoldPlan {
  std::uint64_t seed = 0;
  std::vector<std::vector<std::size_t>> folds; // disjoint, cover 0..n-1
};

/// Deterministic balanced k-fold partition of 0..n-1 (sizes differ by at most
/// one). Throws errc::too_few_items when n < k.
FoldPlan kfold_split(std::size_t n, int k, std::uint64_t seed);

/// Pooled held-out predictions: for each fold, fit on the rest and predict the
/// fold; every series is predicted exactly once. Series whose actual week-t
/// value is zero are skipped (RSE undefined); `skipped_zero_actual` counts them.
struct CrossValPredictions {
  std::vector<Prediction> predictions;
  std::size_t skipped_zero_actual = 0;
  bool any_collinear = false;
};
CrossValPredictions crossval_predictions(const std::vector<WindowedSeries>& data,
                                         int t_r, int t, const FoldPlan& plan,
                                         int scope = regress::kGenericScope);

struct SweepRow {
  int t_r = 0;
  double mrse = 0.0;
  double ci95 = 0.0;
  std::size_t n = 0;
};

struct SweepReport {
  int scope = regress::kGenericScope;
  int target_t = 0;
  std::vector<SweepRow> rows; // t_r strictly increasing
};

/// Cross-validated error sweep over t_r values for one target week.
SweepReport evaluate_sweep(const std::vector<WindowedSeries>& data,
                           std::vector<int> tr_values, int t,
                           const FoldPlan& plan, int jobs = 1);

/// One sweep per target; t_r = max(1, round(fraction * t)) per fraction.
/// Throws errc::window_too_small when a series does not cover the largest
/// target.
std::vector<SweepReport> evaluate_multi_target(
    const std::vector<WindowedSeries>& data, const std::vector<double>& fractions,
    const std::vector<int>& targets, int folds, std::uint64_t seed, int jobs = 1);

struct SpecificEvalResult {
  std::vector<SweepReport> reports;      // one per evaluated cluster
  std::vector<int> skipped_clusters;     // excluded or too small to split
  std::vector<int> shrunk_fold_clusters; // folds reduced to member count
};

/// Per-cluster sweeps with folds drawn within each cluster. Clusters in
/// `excluded` are skipped; clusters smaller than the fold count get that many
/// folds (flagged), and clusters with fewer than 2 members are skipped.
SpecificEvalResult evaluate_specific(const std::vector<WindowedSeries>& data,
                                     const ksc::ClusterModel& model,
                                     const std::set<int>& excluded,
                                     std::vector<int> tr_values, int t,
                                     int folds, std::uint64_t seed, int jobs = 1);

struct ImprovementRow {
  std::string repo;
  int cluster = 0;
  double actual = 0.0;
  double generic_predicted = 0.0;
  double specific_predicted = 0.0;
  double pct_diff_generic = 0.0;  // 100 * (predicted - actual) / actual
  double pct_diff_specific = 0.0;
  double improvement_pp = 0.0;    // |pct_diff_generic| - |pct_diff_specific|
};

struct ClusterQuartiles {
  int cluster = 0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  std::size_t n = 0;
};

struct ImprovementReport {
  std::vector<ImprovementRow> rows;
  std::vector<ClusterQuartiles> summary; // cluster index ascending
};

/// Joins generic and specific predictions by repository and reports the
/// percentage-point accuracy gain of the specific model per repository plus
/// per-cluster quartiles. Throws errc::mismatch when the repo sets differ.
ImprovementReport improvement(const std::vector<Prediction>& generic_preds,
                              const std::vector<Prediction>& specific_preds,
                              const std::vector<std::pair<std::string, int>>& clusters);

} // namespace stargaze::evalharness
