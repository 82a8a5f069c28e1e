#include "stargaze.h"

#include "report.hpp"
#include "stargaze/error.hpp"
#include "stargaze/evalharness.hpp"
#include "stargaze/ingest.hpp"
#include "stargaze/ksc.hpp"
#include "stargaze/ranking.hpp"
#include "stargaze/regress.hpp"
#include "stargaze/rng.hpp"
#include "stargaze/timeseries.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

using namespace stargaze;

namespace {

thread_local std::string g_last_error;

sg_status map_errc(errc code) {
  switch (code) {
    case errc::invalid_argument: return SG_ERR_INVALID_ARGUMENT;
    case errc::not_found: return SG_ERR_NOT_FOUND;
    case errc::rate_limited: return SG_ERR_RATE_LIMITED;
    case errc::transport: return SG_ERR_TRANSPORT;
    case errc::io: return SG_ERR_IO;
    case errc::format_version_mismatch: return SG_ERR_FORMAT;
    case errc::empty_range: return SG_ERR_EMPTY_RANGE;
    case errc::too_short: return SG_ERR_TOO_SHORT;
    case errc::zero_norm: return SG_ERR_ZERO_NORM;
    case errc::shift_out_of_range: return SG_ERR_SHIFT_OUT_OF_RANGE;
    case errc::degenerate_data: return SG_ERR_DEGENERATE_DATA;
    case errc::eigen_failure: return SG_ERR_EIGEN_FAILURE;
    case errc::insufficient_data: return SG_ERR_INSUFFICIENT_DATA;
    case errc::numerical_failure: return SG_ERR_NUMERICAL_FAILURE;
    case errc::arity_mismatch: return SG_ERR_ARITY_MISMATCH;
    case errc::zero_actual: return SG_ERR_ZERO_ACTUAL;
    case errc::empty_input: return SG_ERR_EMPTY_INPUT;
    case errc::too_few_items: return SG_ERR_TOO_FEW_ITEMS;
    case errc::window_too_small: return SG_ERR_WINDOW_TOO_SMALL;
    case errc::set_mismatch: return SG_ERR_SET_MISMATCH;
    case errc::degenerate_variance: return SG_ERR_DEGENERATE_VARIANCE;
    case errc::k_too_large: return SG_ERR_K_TOO_LARGE;
    case errc::mismatch: return SG_ERR_MISMATCH;
    case errc::undefined_cv: return SG_ERR_UNDEFINED_CV;
    case errc::internal: return SG_ERR_INTERNAL;
  }
  return SG_ERR_INTERNAL;
}

template <typename Fn>
sg_status guarded(Fn&& fn) {
  try {
    fn();
    return SG_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return map_errc(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SG_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SG_ERR_INTERNAL;
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) raise(errc::invalid_argument, what);
}

std::string join_ints(const int* values, std::size_t count) {
  std::string out;
  for (std::size_t i = 0; i < count; ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

} // namespace

struct sg_dataset {
  Dataset data;
  std::vector<WindowedSeries> windows;
  std::string fingerprint;
};

struct sg_cluster_model {
  ksc::ClusterModel model;
  std::string fingerprint;
};

struct sg_regression_model {
  regress::Model model;
};

extern "C" {

const char* sg_status_name(sg_status status) {
  switch (status) {
    case SG_OK: return "ok";
    case SG_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case SG_ERR_NOT_FOUND: return "not_found";
    case SG_ERR_RATE_LIMITED: return "rate_limited";
    case SG_ERR_TRANSPORT: return "transport";
    case SG_ERR_IO: return "io";
    case SG_ERR_FORMAT: return "format";
    case SG_ERR_EMPTY_RANGE: return "empty_range";
    case SG_ERR_TOO_SHORT: return "too_short";
    case SG_ERR_ZERO_NORM: return "zero_norm";
    case SG_ERR_SHIFT_OUT_OF_RANGE: return "shift_out_of_range";
    case SG_ERR_DEGENERATE_DATA: return "degenerate_data";
    case SG_ERR_EIGEN_FAILURE: return "eigen_failure";
    case SG_ERR_INSUFFICIENT_DATA: return "insufficient_data";
    case SG_ERR_NUMERICAL_FAILURE: return "numerical_failure";
    case SG_ERR_ARITY_MISMATCH: return "arity_mismatch";
    case SG_ERR_ZERO_ACTUAL: return "zero_actual";
    case SG_ERR_EMPTY_INPUT: return "empty_input";
    case SG_ERR_TOO_FEW_ITEMS: return "too_few_items";
    case SG_ERR_WINDOW_TOO_SMALL: return "window_too_small";
    case SG_ERR_SET_MISMATCH: return "set_mismatch";
    case SG_ERR_DEGENERATE_VARIANCE: return "degenerate_variance";
    case SG_ERR_K_TOO_LARGE: return "k_too_large";
    case SG_ERR_MISMATCH: return "mismatch";
    case SG_ERR_UNDEFINED_CV: return "undefined_cv";
    case SG_ERR_INTERNAL: return "internal";
  }
  return "internal";
}

const char* sg_last_error(void) { return g_last_error.c_str(); }

const char* sg_version_string(void) { return "stargaze 1.0.0"; }

sg_status sg_fetch(const char* const* names, size_t count, int top_n,
                   const char* out_dir, int parallelism) {
  return guarded([&] {
    require(out_dir, "out_dir is required");
    require(count > 0 || top_n > 0, "need repository names or top_n");
    ingest::ClientConfig config;
    if (parallelism > 0) config.parallelism = parallelism;
    ingest::Client client(config);

    std::vector<std::string> list;
    if (count > 0) {
      for (size_t i = 0; i < count; ++i) list.emplace_back(names[i]);
    } else {
      for (const RepoMeta& meta : client.search_top_repos(top_n))
        list.push_back(meta.full_name);
    }
    for (const std::string& name : list)
      if (!ingest::valid_full_name(name))
        raise(errc::not_found, "malformed repository name '" + name + "'");

    std::filesystem::create_directories(out_dir);
    const std::vector<FetchRecord> records = client.fetch_many(list);
    for (const FetchRecord& record : records) {
      std::string file = record.meta.full_name;
      for (char& c : file)
        if (c == '/') c = '_';
      const std::string path =
          (std::filesystem::path(out_dir) / (file + ".events")).string();
      const std::string tmp = path + ".tmp";
      ingest::persist_fetch(record, tmp);
      if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        raise(errc::io, "cannot move " + tmp + " into place");
      }
    }
  });
}

sg_status sg_build_dataset(const char* const* event_files, size_t count,
                           const char* cutoff_iso8601, int window,
                           const char* out_dataset_path,
                           const char* out_exclusions_csv) {
  return guarded([&] {
    require(event_files && count > 0, "need at least one event file");
    require(cutoff_iso8601, "cutoff is required");
    require(out_dataset_path, "output dataset path is required");
    const Timestamp cutoff = parse_iso8601(cutoff_iso8601);

    std::vector<timeseries::FilterCandidate> candidates;
    candidates.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      const FetchRecord record = ingest::load_fetch(event_files[i]);
      timeseries::FilterCandidate c;
      c.meta = record.meta;
      c.complete = record.complete;
      c.series = timeseries::build_weekly_series(record, cutoff);
      candidates.push_back(std::move(c));
    }
    timeseries::FilterResult result =
        timeseries::filter_dataset(candidates, cutoff, window);

    const std::string tmp = std::string(out_dataset_path) + ".tmp";
    timeseries::save_dataset(result.dataset, tmp);
    if (std::rename(tmp.c_str(), out_dataset_path) != 0) {
      std::remove(tmp.c_str());
      raise(errc::io, std::string("cannot move ") + tmp + " into place");
    }

    if (out_exclusions_csv) {
      const std::string config = report::canonical_config(
          {{"cmd", "build"},
           {"cutoff", cutoff_iso8601},
           {"window", std::to_string(window)},
           {"inputs", std::to_string(count)},
           {"dataset", report::dataset_fingerprint(result.dataset)}});
      report::write_file_atomic(out_exclusions_csv,
                                report::exclusions_csv(config, result));
    }
  });
}

sg_status sg_dataset_open(const char* path, sg_dataset** out) {
  return guarded([&] {
    require(path && out, "path and out are required");
    auto handle = std::make_unique<sg_dataset>();
    handle->data = timeseries::load_dataset(path);
    handle->windows = timeseries::window_dataset(handle->data);
    handle->fingerprint = report::dataset_fingerprint(handle->data);
    *out = handle.release();
  });
}

void sg_dataset_close(sg_dataset* dataset) { delete dataset; }

sg_status sg_dataset_size(const sg_dataset* dataset, size_t* out) {
  return guarded([&] {
    require(dataset && out, "dataset and out are required");
    *out = dataset->data.series.size();
  });
}

sg_status sg_dataset_window(const sg_dataset* dataset, int* out) {
  return guarded([&] {
    require(dataset && out, "dataset and out are required");
    *out = dataset->data.window;
  });
}

namespace {

std::vector<ksc::Vec> window_vectors(const sg_dataset* dataset) {
  std::vector<ksc::Vec> vectors;
  vectors.reserve(dataset->windows.size());
  for (const WindowedSeries& w : dataset->windows) vectors.push_back(w.gained);
  return vectors;
}

std::vector<std::string> window_names(const sg_dataset* dataset) {
  std::vector<std::string> names;
  names.reserve(dataset->windows.size());
  for (const WindowedSeries& w : dataset->windows) names.push_back(w.repo);
  return names;
}

int default_q_max(const sg_dataset* dataset, int q_max) {
  return q_max >= 0 ? q_max : dataset->data.window / 4;
}

} // namespace

sg_status sg_cluster(const sg_dataset* dataset, int k, uint64_t seed, int q_max,
                     int max_iter, int restarts, int jobs,
                     const char* out_model_path) {
  return guarded([&] {
    require(dataset && out_model_path, "dataset and output path are required");
    ksc::Params params;
    params.k = k;
    params.seed = seed;
    params.q_max = default_q_max(dataset, q_max);
    params.max_iter = max_iter > 0 ? max_iter : 100;
    params.restarts = restarts > 0 ? restarts : 1;
    params.jobs = jobs > 0 ? jobs : 1;
    const ksc::ClusterModel model =
        ksc::cluster(window_vectors(dataset), window_names(dataset), params);
    const std::string tmp = std::string(out_model_path) + ".tmp";
    ksc::save_model(model, tmp);
    if (std::rename(tmp.c_str(), out_model_path) != 0) {
      std::remove(tmp.c_str());
      raise(errc::io, std::string("cannot move ") + tmp + " into place");
    }
  });
}

sg_status sg_cluster_open(const char* path, sg_cluster_model** out) {
  return guarded([&] {
    require(path && out, "path and out are required");
    auto handle = std::make_unique<sg_cluster_model>();
    handle->model = ksc::load_model(path);
    handle->fingerprint = report::cluster_fingerprint(handle->model);
    *out = handle.release();
  });
}

void sg_cluster_close(sg_cluster_model* model) { delete model; }

sg_status sg_cluster_k(const sg_cluster_model* model, int* out) {
  return guarded([&] {
    require(model && out, "model and out are required");
    *out = model->model.k;
  });
}

sg_status sg_betacv(const sg_dataset* dataset, int k_min, int k_max,
                    uint64_t seed, int q_max, int max_iter, int restarts,
                    int jobs, double stability_tol, int stability_window,
                    const char* out_csv, int* selected_k, int* stable) {
  return guarded([&] {
    require(dataset && out_csv, "dataset and output path are required");
    require(k_min >= 1 && k_max >= k_min, "need 1 <= k_min <= k_max");
    const auto vectors = window_vectors(dataset);
    const auto names = window_names(dataset);
    ksc::Params params;
    params.seed = seed;
    params.q_max = default_q_max(dataset, q_max);
    params.max_iter = max_iter > 0 ? max_iter : 100;
    params.restarts = restarts > 0 ? restarts : 1;
    params.jobs = jobs > 0 ? jobs : 1;

    std::vector<ksc::ClusterModel> models;
    models.reserve(static_cast<std::size_t>(k_max - k_min + 1));
    for (int k = k_min; k <= k_max; ++k) {
      params.k = k;
      models.push_back(ksc::cluster(vectors, names, params));
    }
    std::vector<const ksc::ClusterModel*> refs;
    for (const auto& m : models) refs.push_back(&m);
    const ksc::BetaCvCurve curve =
        ksc::beta_cv(vectors, refs, params.q_max, params.jobs);
    const ksc::SelectKResult sel =
        ksc::select_k(curve, stability_tol, stability_window);

    const std::string config = report::canonical_config(
        {{"cmd", "betacv"},
         {"dataset", dataset->fingerprint},
         {"k_min", std::to_string(k_min)},
         {"k_max", std::to_string(k_max)},
         {"max_iter", std::to_string(params.max_iter)},
         {"q_max", std::to_string(params.q_max)},
         {"restarts", std::to_string(params.restarts)},
         {"seed", std::to_string(seed)},
         {"stability_tol", report::format_double(stability_tol)},
         {"stability_window", std::to_string(stability_window)}});
    report::write_file_atomic(out_csv, report::betacv_csv(config, curve, sel));
    if (selected_k) *selected_k = sel.k;
    if (stable) *stable = sel.stable ? 1 : 0;
  });
}

sg_status sg_fit(const sg_dataset* dataset, const sg_cluster_model* scope_model,
                 int cluster_index, int t_r, int t,
                 const char* out_model_path) {
  return guarded([&] {
    require(dataset && out_model_path, "dataset and output path are required");
    std::vector<WindowedSeries> train;
    int scope = regress::kGenericScope;
    if (scope_model && cluster_index >= 0) {
      const auto& m = scope_model->model;
      if (m.assignment.size() != dataset->windows.size())
        raise(errc::mismatch, "cluster model does not cover the dataset");
      for (std::size_t i = 0; i < dataset->windows.size(); ++i)
        if (m.assignment[i] == cluster_index)
          train.push_back(dataset->windows[i]);
      scope = cluster_index;
    } else {
      train = dataset->windows;
    }
    const regress::Model model = regress::fit(train, t_r, t, scope);
    const std::string tmp = std::string(out_model_path) + ".tmp";
    regress::save_model(model, tmp);
    if (std::rename(tmp.c_str(), out_model_path) != 0) {
      std::remove(tmp.c_str());
      raise(errc::io, std::string("cannot move ") + tmp + " into place");
    }
  });
}

sg_status sg_model_open(const char* path, sg_regression_model** out) {
  return guarded([&] {
    require(path && out, "path and out are required");
    auto handle = std::make_unique<sg_regression_model>();
    handle->model = regress::load_model(path);
    *out = handle.release();
  });
}

void sg_model_close(sg_regression_model* model) { delete model; }

sg_status sg_model_info(const sg_regression_model* model, int* t_r, int* t,
                        int* scope, int* collinear) {
  return guarded([&] {
    require(model, "model is required");
    if (t_r) *t_r = model->model.t_r;
    if (t) *t = model->model.t;
    if (scope) *scope = model->model.scope;
    if (collinear) *collinear = model->model.collinear ? 1 : 0;
  });
}

sg_status sg_predict_value(const sg_regression_model* model,
                           const double* prefix, size_t length, double* out) {
  return guarded([&] {
    require(model && prefix && out, "model, prefix and out are required");
    *out = regress::predict(model->model,
                            std::span<const double>(prefix, length));
  });
}

sg_status sg_predict(const sg_regression_model* model, const sg_dataset* dataset,
                     const char* out_csv) {
  return guarded([&] {
    require(model && dataset && out_csv,
            "model, dataset and output path are required");
    const int t_r = model->model.t_r;
    const int t = model->model.t;
    std::vector<Prediction> predictions;
    for (const WindowedSeries& w : dataset->windows) {
      if (w.gained.size() < static_cast<std::size_t>(std::max(t_r, t)))
        raise(errc::window_too_small,
              w.repo + ": window does not cover the model horizon");
      const double predicted = regress::predict(
          model->model,
          std::span<const double>(w.gained.data(), static_cast<std::size_t>(t_r)));
      const double actual = w.gained[static_cast<std::size_t>(t) - 1];
      predictions.push_back({w.repo, predicted, actual,
                             actual > 0.0 ? regress::rse(predicted, actual) : 0.0});
    }
    const std::string config = report::canonical_config(
        {{"cmd", "predict"},
         {"dataset", dataset->fingerprint},
         {"scope", std::to_string(model->model.scope)},
         {"t", std::to_string(t)},
         {"t_r", std::to_string(t_r)}});
    report::write_file_atomic(out_csv,
                              report::predictions_csv(config, predictions, nullptr));
  });
}

namespace {

std::set<int> to_set(const int* values, size_t count) {
  std::set<int> out;
  for (size_t i = 0; i < count; ++i) out.insert(values[i]);
  return out;
}

// Pooled held-out predictions plus each prediction's cluster.
std::pair<std::vector<Prediction>, std::vector<int>> specific_predictions(
    const sg_dataset* dataset, const sg_cluster_model* scope_model,
    const std::set<int>& excluded, int t_r, int t, int folds, uint64_t seed) {
  const auto& model = scope_model->model;
  if (model.assignment.size() != dataset->windows.size())
    raise(errc::mismatch, "cluster model does not cover the dataset");
  std::vector<Prediction> preds;
  std::vector<int> clusters;
  for (int c = 0; c < model.k; ++c) {
    if (excluded.count(c)) continue;
    std::vector<WindowedSeries> members;
    for (std::size_t i = 0; i < dataset->windows.size(); ++i)
      if (model.assignment[i] == c) members.push_back(dataset->windows[i]);
    if (members.size() < 2) continue;
    const int cluster_folds =
        members.size() < static_cast<std::size_t>(folds)
            ? static_cast<int>(members.size())
            : folds;
    const evalharness::FoldPlan plan = evalharness::kfold_split(
        members.size(), cluster_folds,
        derive_seed(seed, "folds-cluster-" + std::to_string(c)));
    auto cv = evalharness::crossval_predictions(members, t_r, t, plan, c);
    for (auto& p : cv.predictions) {
      preds.push_back(std::move(p));
      clusters.push_back(c);
    }
  }
  return {std::move(preds), std::move(clusters)};
}

} // namespace

sg_status sg_eval_sweep(const sg_dataset* dataset,
                        const sg_cluster_model* scope_model, const int* excluded,
                        size_t excluded_count, const int* tr_values,
                        size_t tr_count, int t, int folds, uint64_t seed,
                        int jobs, const char* out_csv) {
  return guarded([&] {
    require(dataset && out_csv, "dataset and output path are required");
    require(tr_values && tr_count > 0, "need at least one t_r value");
    const std::vector<int> trs(tr_values, tr_values + tr_count);
    const int eff_jobs = jobs > 0 ? jobs : 1;
    const int eff_folds = folds > 0 ? folds : 10;

    std::vector<evalharness::SweepReport> reports;
    std::map<std::string, std::string> config{
        {"cmd", "eval-sweep"},
        {"dataset", dataset->fingerprint},
        {"folds", std::to_string(eff_folds)},
        {"seed", std::to_string(seed)},
        {"t", std::to_string(t)},
        {"tr", join_ints(tr_values, tr_count)}};
    if (scope_model) {
      const auto result = evalharness::evaluate_specific(
          dataset->windows, scope_model->model, to_set(excluded, excluded_count),
          trs, t, eff_folds, seed, eff_jobs);
      reports = result.reports;
      config["cluster_model"] = scope_model->fingerprint;
      config["excluded"] = join_ints(excluded, excluded_count);
    } else {
      const evalharness::FoldPlan plan = evalharness::kfold_split(
          dataset->windows.size(), eff_folds, derive_seed(seed, "folds"));
      reports.push_back(
          evalharness::evaluate_sweep(dataset->windows, trs, t, plan, eff_jobs));
    }
    report::write_file_atomic(
        out_csv, report::sweep_csv(report::canonical_config(config), reports));
  });
}

sg_status sg_eval_multi(const sg_dataset* dataset, const double* fractions,
                        size_t fraction_count, const int* targets,
                        size_t target_count, int folds, uint64_t seed, int jobs,
                        const char* out_csv) {
  return guarded([&] {
    require(dataset && out_csv, "dataset and output path are required");
    require(fractions && fraction_count > 0, "need at least one fraction");
    require(targets && target_count > 0, "need at least one target");
    const auto reports = evalharness::evaluate_multi_target(
        dataset->windows, std::vector<double>(fractions, fractions + fraction_count),
        std::vector<int>(targets, targets + target_count),
        folds > 0 ? folds : 10, seed, jobs > 0 ? jobs : 1);
    std::string fracs;
    for (size_t i = 0; i < fraction_count; ++i) {
      if (i) fracs += ',';
      fracs += report::format_double(fractions[i]);
    }
    const std::string config = report::canonical_config(
        {{"cmd", "eval-multi"},
         {"dataset", dataset->fingerprint},
         {"folds", std::to_string(folds > 0 ? folds : 10)},
         {"fractions", fracs},
         {"seed", std::to_string(seed)},
         {"targets", join_ints(targets, target_count)}});
    report::write_file_atomic(out_csv, report::sweep_csv(config, reports));
  });
}

sg_status sg_crossval_predictions(const sg_dataset* dataset,
                                  const sg_cluster_model* scope_model,
                                  const int* excluded, size_t excluded_count,
                                  int t_r, int t, int folds, uint64_t seed,
                                  int jobs, const char* out_csv) {
  return guarded([&] {
    require(dataset && out_csv, "dataset and output path are required");
    (void)jobs;
    const int eff_folds = folds > 0 ? folds : 10;
    std::map<std::string, std::string> config{
        {"cmd", "crossval-predictions"},
        {"dataset", dataset->fingerprint},
        {"folds", std::to_string(eff_folds)},
        {"seed", std::to_string(seed)},
        {"t", std::to_string(t)},
        {"t_r", std::to_string(t_r)}};
    std::string body;
    if (scope_model) {
      const auto [preds, clusters] =
          specific_predictions(dataset, scope_model, to_set(excluded, excluded_count),
                               t_r, t, eff_folds, seed);
      config["cluster_model"] = scope_model->fingerprint;
      config["excluded"] = join_ints(excluded, excluded_count);
      body = report::predictions_csv(report::canonical_config(config), preds,
                                     &clusters);
    } else {
      const evalharness::FoldPlan plan = evalharness::kfold_split(
          dataset->windows.size(), eff_folds, derive_seed(seed, "folds"));
      const auto cv =
          evalharness::crossval_predictions(dataset->windows, t_r, t, plan);
      body = report::predictions_csv(report::canonical_config(config),
                                     cv.predictions, nullptr);
    }
    report::write_file_atomic(out_csv, body);
  });
}

sg_status sg_improvement(const sg_dataset* dataset,
                         const sg_cluster_model* cluster_model,
                         const int* excluded, size_t excluded_count, int t_r,
                         int t, int folds, uint64_t seed, int jobs,
                         const char* out_rows_csv, const char* out_summary_csv) {
  return guarded([&] {
    require(dataset && cluster_model, "dataset and cluster model are required");
    require(out_rows_csv || out_summary_csv, "need at least one output path");
    (void)jobs;
    const int eff_folds = folds > 0 ? folds : 10;
    const auto excl = to_set(excluded, excluded_count);

    const evalharness::FoldPlan plan = evalharness::kfold_split(
        dataset->windows.size(), eff_folds, derive_seed(seed, "folds"));
    const auto generic =
        evalharness::crossval_predictions(dataset->windows, t_r, t, plan);
    const auto [specific, clusters] =
        specific_predictions(dataset, cluster_model, excl, t_r, t, eff_folds, seed);

    // Restrict the generic set to repositories the specific pipeline covered
    // (excluded clusters drop out of both sides).
    std::set<std::string> covered;
    for (const Prediction& p : specific) covered.insert(p.repo);
    std::vector<Prediction> generic_common;
    for (const Prediction& p : generic.predictions)
      if (covered.count(p.repo)) generic_common.push_back(p);

    std::vector<std::pair<std::string, int>> repo_clusters;
    for (std::size_t i = 0; i < specific.size(); ++i)
      repo_clusters.emplace_back(specific[i].repo, clusters[i]);

    const auto report_data =
        evalharness::improvement(generic_common, specific, repo_clusters);
    const std::string config = report::canonical_config(
        {{"cmd", "improvement"},
         {"cluster_model", cluster_model->fingerprint},
         {"dataset", dataset->fingerprint},
         {"excluded", join_ints(excluded, excluded_count)},
         {"folds", std::to_string(eff_folds)},
         {"seed", std::to_string(seed)},
         {"t", std::to_string(t)},
         {"t_r", std::to_string(t_r)}});
    if (out_rows_csv)
      report::write_file_atomic(
          out_rows_csv, report::improvement_rows_csv(config, report_data.rows));
    if (out_summary_csv)
      report::write_file_atomic(
          out_summary_csv,
          report::improvement_summary_csv(config, report_data.summary));
  });
}

namespace {

std::vector<std::pair<std::string, double>> read_scores_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io, "cannot read " + path);
  std::vector<std::pair<std::string, double>> scores;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      raise(errc::format_version_mismatch, path + ": expected repo,score rows");
    const std::string repo = line.substr(0, comma);
    const std::string rest = line.substr(comma + 1);
    // The score is the second column; extra columns (actual, rse) may follow.
    const std::string field = rest.substr(0, rest.find(','));
    double value = 0.0;
    const auto [p, ec] =
        std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || p != field.data() + field.size()) {
      if (scores.empty()) continue; // header row
      raise(errc::format_version_mismatch,
            path + ": bad score '" + field + "' for " + repo);
    }
    scores.emplace_back(repo, value);
  }
  if (scores.empty()) raise(errc::empty_input, path + ": no scores");
  return scores;
}

} // namespace

sg_status sg_rank(const char* real_scores_csv, const char* generic_scores_csv,
                  const char* specific_scores_csv, const size_t* topk,
                  size_t topk_count, const char* out_table_csv,
                  const char* out_rho_csv) {
  return guarded([&] {
    require(real_scores_csv && generic_scores_csv,
            "real and generic score files are required");
    require(out_table_csv, "output table path is required");
    const auto real = ranking::rank_by_stars(read_scores_csv(real_scores_csv));
    const auto generic =
        ranking::rank_by_stars(read_scores_csv(generic_scores_csv));
    const auto generic_cmp = ranking::compare_rankings(generic, real);

    std::vector<std::size_t> ks(topk, topk + topk_count);
    const auto generic_topk =
        ks.empty() ? std::vector<std::pair<std::size_t, double>>{}
                   : ranking::topk_correlation(generic, real, ks);

    std::map<std::string, std::string> config{
        {"cmd", "rank"},
        {"real", real_scores_csv},
        {"generic", generic_scores_csv}};

    std::string table, rho;
    if (specific_scores_csv) {
      const auto specific =
          ranking::rank_by_stars(read_scores_csv(specific_scores_csv));
      const auto specific_cmp = ranking::compare_rankings(specific, real);
      const auto specific_topk =
          ks.empty() ? std::vector<std::pair<std::size_t, double>>{}
                     : ranking::topk_correlation(specific, real, ks);
      config["specific"] = specific_scores_csv;
      const std::string line = report::canonical_config(config);
      table = report::rank_table_csv(line, generic_cmp, &specific_cmp);
      rho = report::rank_rho_csv(line, generic_cmp, generic_topk, &specific_cmp,
                                 &specific_topk);
    } else {
      const std::string line = report::canonical_config(config);
      table = report::rank_table_csv(line, generic_cmp, nullptr);
      rho = report::rank_rho_csv(line, generic_cmp, generic_topk, nullptr,
                                 nullptr);
    }
    report::write_file_atomic(out_table_csv, table);
    if (out_rho_csv) report::write_file_atomic(out_rho_csv, rho);
  });
}

} // extern "C"
