#include "stargaze/evalharness.hpp"

#include "parallel.hpp"
#include "stargaze/error.hpp"
#include "stargaze/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace stargaze::evalharness {

FoldPlan kfold_split(std::size_t n, int k, std::uint64_t seed) {
  if (k < 1) raise(errc::invalid_argument, "kfold_split: k must be >= 1");
  if (n < static_cast<std::size_t>(k))
    raise(errc::too_few_items, "kfold_split: n=" + std::to_string(n) +
                                   " < k=" + std::to_string(k));
  std::vector<std::size_t> perm(n);
  shuffle_indices(seed, n, perm.data());
  FoldPlan plan;
  plan.seed = seed;
  plan.folds.assign(static_cast<std::size_t>(k), {});
  for (std::size_t i = 0; i < n; ++i)
    plan.folds[i % static_cast<std::size_t>(k)].push_back(perm[i]);
  return plan;
}

CrossValPredictions crossval_predictions(const std::vector<WindowedSeries>& data,
                                         int t_r, int t, const FoldPlan& plan,
                                         int scope) {
  CrossValPredictions out;
  for (const auto& fold : plan.folds) {
    std::vector<bool> held(data.size(), false);
    for (const std::size_t i : fold) held[i] = true;
    std::vector<WindowedSeries> train;
    train.reserve(data.size() - fold.size());
    for (std::size_t i = 0; i < data.size(); ++i)
      if (!held[i]) train.push_back(data[i]);
    const regress::Model model = regress::fit(train, t_r, t, scope);
    out.any_collinear = out.any_collinear || model.collinear;
    for (const std::size_t i : fold) {
      const auto& g = data[i].gained;
      const double actual = g[static_cast<std::size_t>(t) - 1];
      if (!(actual > 0.0)) {
        ++out.skipped_zero_actual;
        continue;
      }
      const double predicted = regress::predict(
          model, std::span<const double>(g.data(), static_cast<std::size_t>(t_r)));
      out.predictions.push_back(
          {data[i].repo, predicted, actual, regress::rse(predicted, actual)});
    }
  }
  return out;
}

SweepReport evaluate_sweep(const std::vector<WindowedSeries>& data,
                           std::vector<int> tr_values, int t,
                           const FoldPlan& plan, int jobs) {
  std::sort(tr_values.begin(), tr_values.end());
  tr_values.erase(std::unique(tr_values.begin(), tr_values.end()), tr_values.end());
  SweepReport report;
  report.target_t = t;
  report.rows.resize(tr_values.size());
  parallel_for(tr_values.size(), jobs, [&](std::size_t idx) {
    const int t_r = tr_values[idx];
    const auto cv = crossval_predictions(data, t_r, t, plan);
    const regress::Mrse m = regress::mrse(cv.predictions);
    report.rows[idx] = {t_r, m.mean, m.ci95, m.n};
  });
  return report;
}

std::vector<SweepReport> evaluate_multi_target(
    const std::vector<WindowedSeries>& data, const std::vector<double>& fractions,
    const std::vector<int>& targets, int folds, std::uint64_t seed, int jobs) {
  int max_t = 0;
  for (const int t : targets) max_t = std::max(max_t, t);
  for (const auto& s : data)
    if (s.gained.size() < static_cast<std::size_t>(max_t))
      raise(errc::window_too_small,
            s.repo + ": window does not cover week " + std::to_string(max_t));
  const FoldPlan plan = kfold_split(data.size(), folds, derive_seed(seed, "folds"));
  std::vector<SweepReport> reports;
  for (const int t : targets) {
    std::vector<int> tr_values;
    for (const double f : fractions)
      tr_values.push_back(std::max(1, static_cast<int>(std::llround(f * t))));
    reports.push_back(evaluate_sweep(data, tr_values, t, plan, jobs));
  }
  return reports;
}

SpecificEvalResult evaluate_specific(const std::vector<WindowedSeries>& data,
                                     const ksc::ClusterModel& model,
                                     const std::set<int>& excluded,
                                     std::vector<int> tr_values, int t,
                                     int folds, std::uint64_t seed, int jobs) {
  if (model.assignment.size() != data.size())
    raise(errc::mismatch, "evaluate_specific: cluster model does not cover data");
  SpecificEvalResult out;
  for (int c = 0; c < model.k; ++c) {
    if (excluded.count(c)) {
      out.skipped_clusters.push_back(c);
      continue;
    }
    std::vector<WindowedSeries> members;
    for (std::size_t i = 0; i < data.size(); ++i)
      if (model.assignment[i] == c) members.push_back(data[i]);
    if (members.size() < 2) {
      out.skipped_clusters.push_back(c);
      continue;
    }
    int cluster_folds = folds;
    if (members.size() < static_cast<std::size_t>(folds)) {
      cluster_folds = static_cast<int>(members.size());
      out.shrunk_fold_clusters.push_back(c);
    }
    const FoldPlan plan =
        kfold_split(members.size(), cluster_folds,
                    derive_seed(seed, "folds-cluster-" + std::to_string(c)));
    SweepReport report = evaluate_sweep(members, tr_values, t, plan, jobs);
    report.scope = c;
    out.reports.push_back(std::move(report));
  }
  return out;
}

namespace {

// Quartiles by linear interpolation between closest ranks (the common
// spreadsheet definition).
double quantile_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = p * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

} // namespace

ImprovementReport improvement(
    const std::vector<Prediction>& generic_preds,
    const std::vector<Prediction>& specific_preds,
    const std::vector<std::pair<std::string, int>>& clusters) {
  if (generic_preds.size() != specific_preds.size())
    raise(errc::mismatch, "improvement: prediction sets differ in size");
  std::unordered_map<std::string, const Prediction*> spec_by_repo;
  for (const Prediction& p : specific_preds) spec_by_repo[p.repo] = &p;
  std::unordered_map<std::string, int> cluster_of;
  for (const auto& [repo, c] : clusters) cluster_of[repo] = c;

  ImprovementReport report;
  std::map<int, std::vector<double>> per_cluster;
  for (const Prediction& g : generic_preds) {
    const auto it = spec_by_repo.find(g.repo);
    if (it == spec_by_repo.end())
      raise(errc::mismatch, "improvement: " + g.repo + " missing from specific set");
    const Prediction& s = *it->second;
    if (!(g.actual > 0.0))
      raise(errc::zero_actual, "improvement: " + g.repo + " has zero actual");
    ImprovementRow row;
    row.repo = g.repo;
    const auto cit = cluster_of.find(g.repo);
    row.cluster = cit == cluster_of.end() ? -1 : cit->second;
    row.actual = g.actual;
    row.generic_predicted = g.predicted;
    row.specific_predicted = s.predicted;
    row.pct_diff_generic = 100.0 * (g.predicted - row.actual) / row.actual;
    row.pct_diff_specific = 100.0 * (s.predicted - row.actual) / row.actual;
    row.improvement_pp =
        std::abs(row.pct_diff_generic) - std::abs(row.pct_diff_specific);
    per_cluster[row.cluster].push_back(row.improvement_pp);
    report.rows.push_back(std::move(row));
  }
  for (auto& [c, values] : per_cluster) {
    std::sort(values.begin(), values.end());
    report.summary.push_back({c, quantile_sorted(values, 0.25),
                              quantile_sorted(values, 0.50),
                              quantile_sorted(values, 0.75), values.size()});
  }
  return report;
}

} // namespace stargaze::evalharness
