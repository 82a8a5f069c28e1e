// stargaze command-line tool. All functionality lives behind the C API in
// stargaze.h; this file only parses flags and forwards.

#include "stargaze.h"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

int finish(sg_status status) {
  if (status == SG_OK) return 0;
  std::fprintf(stderr, "{\"error\":\"%s\",\"message\":\"%s\"}\n",
               sg_status_name(status), json_escape(sg_last_error()).c_str());
  return static_cast<int>(status);
}

std::vector<const char*> c_strings(const std::vector<std::string>& items) {
  std::vector<const char*> out;
  out.reserve(items.size());
  for (const auto& s : items) out.push_back(s.c_str());
  return out;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"stargaze: star-history collection, growth-trend clustering and "
               "popularity prediction for code repositories"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read defaults from a config file; flags win");
  app.set_version_flag("--version", sg_version_string());

  // Shared knobs; each subcommand registers the ones it honors.
  std::uint64_t seed = 1;
  int jobs = 1;

  // fetch ------------------------------------------------------------------
  auto* fetch = app.add_subcommand("fetch", "Fetch star histories to raw-event files");
  std::vector<std::string> fetch_names;
  int fetch_top = 0, fetch_parallelism = 4;
  std::string fetch_out;
  fetch->add_option("names", fetch_names, "Repositories as owner/name");
  fetch->add_option("--top", fetch_top, "Fetch the top-N most starred repositories");
  fetch->add_option("--out", fetch_out, "Output directory")->required();
  fetch->add_option("--parallelism", fetch_parallelism, "Concurrent fetches");

  // build ------------------------------------------------------------------
  auto* build = app.add_subcommand("build", "Build the weekly dataset from raw events");
  std::vector<std::string> build_events;
  std::string build_cutoff, build_out, build_exclusions;
  int build_window = 52;
  build->add_option("--events", build_events, "Raw-event files")->required();
  build->add_option("--cutoff", build_cutoff, "Collection cutoff (ISO-8601 UTC)")->required();
  build->add_option("--window", build_window, "Analysis window in weeks");
  build->add_option("--out", build_out, "Output dataset path")->required();
  build->add_option("--exclusions", build_exclusions, "Exclusion report CSV");

  // cluster ----------------------------------------------------------------
  auto* cluster = app.add_subcommand("cluster", "Cluster windowed series by growth trend");
  std::string cluster_dataset, cluster_out;
  int cluster_k = 5, cluster_qmax = -1, cluster_maxiter = 100, cluster_restarts = 1;
  cluster->add_option("--dataset", cluster_dataset)->required();
  cluster->add_option("--k", cluster_k, "Number of clusters");
  cluster->add_option("--seed", seed);
  cluster->add_option("--q-max", cluster_qmax, "Shift radius (-1: window/4)");
  cluster->add_option("--max-iter", cluster_maxiter);
  cluster->add_option("--restarts", cluster_restarts);
  cluster->add_option("--jobs", jobs);
  cluster->add_option("--out", cluster_out, "Output model JSON")->required();

  // betacv -----------------------------------------------------------------
  auto* betacv = app.add_subcommand("betacv", "beta_CV curve and cluster-count selection");
  std::string betacv_dataset, betacv_out;
  int betacv_kmin = 2, betacv_kmax = 10, betacv_qmax = -1;
  int betacv_maxiter = 100, betacv_restarts = 1, betacv_stab_window = 3;
  double betacv_tol = 0.10;
  betacv->add_option("--dataset", betacv_dataset)->required();
  betacv->add_option("--k-min", betacv_kmin);
  betacv->add_option("--k-max", betacv_kmax);
  betacv->add_option("--seed", seed);
  betacv->add_option("--q-max", betacv_qmax, "Shift radius (-1: window/4)");
  betacv->add_option("--max-iter", betacv_maxiter);
  betacv->add_option("--restarts", betacv_restarts);
  betacv->add_option("--jobs", jobs);
  betacv->add_option("--tol", betacv_tol, "Stability tolerance");
  betacv->add_option("--stability-window", betacv_stab_window);
  betacv->add_option("--out", betacv_out, "Output curve CSV")->required();

  // fit ---------------------------------------------------------------------
  auto* fit = app.add_subcommand("fit", "Fit a regression model");
  std::string fit_dataset, fit_cluster_model, fit_out;
  int fit_tr = 26, fit_t = 52, fit_cluster = -1;
  fit->add_option("--dataset", fit_dataset)->required();
  fit->add_option("--tr", fit_tr, "Predictor weeks");
  fit->add_option("--t", fit_t, "Target week");
  fit->add_option("--cluster-model", fit_cluster_model);
  fit->add_option("--cluster", fit_cluster, "Train on this cluster only");
  fit->add_option("--out", fit_out, "Output model JSON")->required();

  // predict ----------------------------------------------------------------
  auto* predict = app.add_subcommand("predict", "Apply a model to a dataset");
  std::string predict_model, predict_dataset, predict_out;
  predict->add_option("--model", predict_model)->required();
  predict->add_option("--dataset", predict_dataset)->required();
  predict->add_option("--out", predict_out, "Output predictions CSV")->required();

  // eval -------------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "Cross-validated error sweeps");
  std::string eval_dataset, eval_cluster_model, eval_out, eval_predictions;
  std::string eval_improvement, eval_summary;
  std::vector<int> eval_tr, eval_targets, eval_exclude;
  std::vector<double> eval_fractions;
  int eval_t = 52, eval_folds = 10;
  eval->add_option("--dataset", eval_dataset)->required();
  eval->add_option("--tr", eval_tr, "Predictor-week grid")->delimiter(',');
  eval->add_option("--t", eval_t, "Target week");
  eval->add_option("--folds", eval_folds);
  eval->add_option("--seed", seed);
  eval->add_option("--jobs", jobs);
  eval->add_option("--cluster-model", eval_cluster_model,
                   "Evaluate cluster-specific models");
  eval->add_option("--exclude", eval_exclude, "Cluster indices to skip")->delimiter(',');
  eval->add_option("--fractions", eval_fractions, "Fractions of t (multi-target mode)")
      ->delimiter(',');
  eval->add_option("--targets", eval_targets, "Target weeks (multi-target mode)")
      ->delimiter(',');
  eval->add_option("--out", eval_out, "Sweep report CSV");
  eval->add_option("--predictions", eval_predictions,
                   "Held-out predictions CSV (needs exactly one --tr)");
  eval->add_option("--improvement", eval_improvement,
                   "Per-repo improvement CSV (needs --cluster-model, one --tr)");
  eval->add_option("--summary", eval_summary, "Per-cluster improvement quartiles CSV");

  // rank -------------------------------------------------------------------
  auto* rank = app.add_subcommand("rank", "Compare predicted and real rankings");
  std::string rank_real, rank_generic, rank_specific, rank_out, rank_rho;
  std::vector<std::size_t> rank_topk;
  rank->add_option("--real", rank_real, "repo,score CSV of the real ranking")->required();
  rank->add_option("--generic", rank_generic, "repo,score CSV (generic model)")->required();
  rank->add_option("--specific", rank_specific, "repo,score CSV (specific models)");
  rank->add_option("--topk", rank_topk, "Group sizes for per-group rho")->delimiter(',');
  rank->add_option("--out", rank_out, "Ranking table CSV")->required();
  rank->add_option("--rho", rank_rho, "Correlation summary CSV");

  CLI11_PARSE(app, argc, argv);

  if (fetch->parsed()) {
    const auto names = c_strings(fetch_names);
    return finish(sg_fetch(names.data(), names.size(), fetch_top,
                           fetch_out.c_str(), fetch_parallelism));
  }

  if (build->parsed()) {
    const auto files = c_strings(build_events);
    return finish(sg_build_dataset(
        files.data(), files.size(), build_cutoff.c_str(), build_window,
        build_out.c_str(),
        build_exclusions.empty() ? nullptr : build_exclusions.c_str()));
  }

  if (cluster->parsed()) {
    sg_dataset* dataset = nullptr;
    sg_status st = sg_dataset_open(cluster_dataset.c_str(), &dataset);
    if (st == SG_OK) {
      st = sg_cluster(dataset, cluster_k, seed, cluster_qmax, cluster_maxiter,
                      cluster_restarts, jobs, cluster_out.c_str());
      sg_dataset_close(dataset);
    }
    return finish(st);
  }

  if (betacv->parsed()) {
    sg_dataset* dataset = nullptr;
    sg_status st = sg_dataset_open(betacv_dataset.c_str(), &dataset);
    if (st == SG_OK) {
      int selected = 0, stable = 0;
      st = sg_betacv(dataset, betacv_kmin, betacv_kmax, seed, betacv_qmax,
                     betacv_maxiter, betacv_restarts, jobs, betacv_tol,
                     betacv_stab_window, betacv_out.c_str(), &selected, &stable);
      sg_dataset_close(dataset);
      if (st == SG_OK)
        std::printf("selected_k=%d stable=%s\n", selected,
                    stable ? "true" : "false");
    }
    return finish(st);
  }

  if (fit->parsed()) {
    sg_dataset* dataset = nullptr;
    sg_status st = sg_dataset_open(fit_dataset.c_str(), &dataset);
    if (st != SG_OK) return finish(st);
    sg_cluster_model* cm = nullptr;
    if (!fit_cluster_model.empty())
      st = sg_cluster_open(fit_cluster_model.c_str(), &cm);
    if (st == SG_OK)
      st = sg_fit(dataset, cm, fit_cluster, fit_tr, fit_t, fit_out.c_str());
    sg_cluster_close(cm);
    sg_dataset_close(dataset);
    return finish(st);
  }

  if (predict->parsed()) {
    sg_regression_model* model = nullptr;
    sg_status st = sg_model_open(predict_model.c_str(), &model);
    if (st != SG_OK) return finish(st);
    sg_dataset* dataset = nullptr;
    st = sg_dataset_open(predict_dataset.c_str(), &dataset);
    if (st == SG_OK) {
      st = sg_predict(model, dataset, predict_out.c_str());
      sg_dataset_close(dataset);
    }
    sg_model_close(model);
    return finish(st);
  }

  if (eval->parsed()) {
    if (eval_out.empty() && eval_predictions.empty() && eval_improvement.empty() &&
        eval_summary.empty()) {
      std::fprintf(stderr, "{\"error\":\"invalid_argument\",\"message\":\"eval needs at least one of --out, --predictions, --improvement, --summary\"}\n");
      return static_cast<int>(SG_ERR_INVALID_ARGUMENT);
    }
    sg_dataset* dataset = nullptr;
    sg_status st = sg_dataset_open(eval_dataset.c_str(), &dataset);
    if (st != SG_OK) return finish(st);
    sg_cluster_model* cm = nullptr;
    if (!eval_cluster_model.empty())
      st = sg_cluster_open(eval_cluster_model.c_str(), &cm);

    const bool multi = !eval_fractions.empty() || !eval_targets.empty();
    if (st == SG_OK && multi && !eval_out.empty())
      st = sg_eval_multi(dataset, eval_fractions.data(), eval_fractions.size(),
                         eval_targets.data(), eval_targets.size(), eval_folds,
                         seed, jobs, eval_out.c_str());
    if (st == SG_OK && !multi && !eval_out.empty()) {
      if (eval_tr.empty()) {
        sg_cluster_close(cm);
        sg_dataset_close(dataset);
        std::fprintf(stderr, "{\"error\":\"invalid_argument\",\"message\":\"--tr is required for a sweep\"}\n");
        return static_cast<int>(SG_ERR_INVALID_ARGUMENT);
      }
      st = sg_eval_sweep(dataset, cm, eval_exclude.data(), eval_exclude.size(),
                         eval_tr.data(), eval_tr.size(), eval_t, eval_folds,
                         seed, jobs, eval_out.c_str());
    }
    if (st == SG_OK && !eval_predictions.empty()) {
      if (eval_tr.size() != 1) {
        sg_cluster_close(cm);
        sg_dataset_close(dataset);
        std::fprintf(stderr, "{\"error\":\"invalid_argument\",\"message\":\"--predictions needs exactly one --tr value\"}\n");
        return static_cast<int>(SG_ERR_INVALID_ARGUMENT);
      }
      st = sg_crossval_predictions(dataset, cm, eval_exclude.data(),
                                   eval_exclude.size(), eval_tr[0], eval_t,
                                   eval_folds, seed, jobs,
                                   eval_predictions.c_str());
    }
    if (st == SG_OK && (!eval_improvement.empty() || !eval_summary.empty())) {
      if (!cm || eval_tr.size() != 1) {
        sg_cluster_close(cm);
        sg_dataset_close(dataset);
        std::fprintf(stderr, "{\"error\":\"invalid_argument\",\"message\":\"--improvement needs --cluster-model and exactly one --tr value\"}\n");
        return static_cast<int>(SG_ERR_INVALID_ARGUMENT);
      }
      st = sg_improvement(dataset, cm, eval_exclude.data(), eval_exclude.size(),
                          eval_tr[0], eval_t, eval_folds, seed, jobs,
                          eval_improvement.empty() ? nullptr : eval_improvement.c_str(),
                          eval_summary.empty() ? nullptr : eval_summary.c_str());
    }
    sg_cluster_close(cm);
    sg_dataset_close(dataset);
    return finish(st);
  }

  if (rank->parsed()) {
    return finish(sg_rank(rank_real.c_str(), rank_generic.c_str(),
                          rank_specific.empty() ? nullptr : rank_specific.c_str(),
                          rank_topk.data(), rank_topk.size(), rank_out.c_str(),
                          rank_rho.empty() ? nullptr : rank_rho.c_str()));
  }

  return 0;
}
