#include "report.hpp"

#include "stargaze/error.hpp"
#include "stargaze/time.hpp"

#include <cstdio>
#include <fstream>

namespace stargaze::report {

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string canonical_config(const std::map<std::string, std::string>& kv) {
  std::string line;
  for (const auto& [k, v] : kv) {
    if (!line.empty()) line += ' ';
    line += k + "=" + v;
  }
  return line;
}

std::string dataset_fingerprint(const Dataset& dataset) {
  std::string acc = format_iso8601(dataset.cutoff) + "|" +
                    std::to_string(dataset.window) + "|" +
                    std::to_string(dataset.series.size());
  for (const StarSeries& s : dataset.series) {
    acc += "|" + s.repo + ":" + std::to_string(s.weeks()) + ":" +
           std::to_string(s.values.empty() ? 0 : s.values.back());
  }
  return hex64(fnv1a64(acc));
}

std::string cluster_fingerprint(const ksc::ClusterModel& model) {
  std::string acc = std::to_string(model.k) + "|" + std::to_string(model.seed) +
                    "|" + std::to_string(model.q_max);
  for (const int a : model.assignment) acc += "," + std::to_string(a);
  return hex64(fnv1a64(acc));
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& body) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) raise(errc::io, "cannot write " + tmp);
    out << body;
    if (!out) {
      out.close();
      std::remove(tmp.c_str());
      raise(errc::io, "short write to " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    raise(errc::io, "cannot move " + tmp + " into place");
  }
}

std::string render_csv(const std::string& config_line,
                       const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows) {
  std::string out = "# config: " + config_line + "\n";
  out += "# config_hash: " + hex64(fnv1a64(config_line)) + "\n";
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

namespace {

std::string scope_name(int scope) {
  return scope == regress::kGenericScope ? "generic"
                                         : "C" + std::to_string(scope + 1);
}

} // namespace

std::string sweep_csv(const std::string& config_line,
                      const std::vector<evalharness::SweepReport>& reports) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& report : reports)
    for (const auto& row : report.rows)
      rows.push_back({scope_name(report.scope), std::to_string(report.target_t),
                      std::to_string(row.t_r), format_double(row.mrse),
                      format_double(row.ci95), std::to_string(row.n)});
  return render_csv(config_line, {"scope", "t", "t_r", "mrse", "ci95", "n"}, rows);
}

std::string predictions_csv(const std::string& config_line,
                            const std::vector<Prediction>& predictions,
                            const std::vector<int>* clusters) {
  // The score consumed by the ranking step stays in column two; the cluster
  // tag, when present, goes last.
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const Prediction& p = predictions[i];
    std::vector<std::string> row{p.repo, format_double(p.predicted),
                                 format_double(p.actual), format_double(p.rse)};
    if (clusters) row.push_back(scope_name((*clusters)[i]));
    rows.push_back(std::move(row));
  }
  std::vector<std::string> header{"repo", "predicted", "actual", "rse"};
  if (clusters) header.push_back("cluster");
  return render_csv(config_line, header, rows);
}

std::string improvement_rows_csv(
    const std::string& config_line,
    const std::vector<evalharness::ImprovementRow>& rows) {
  std::vector<std::vector<std::string>> out;
  for (const auto& r : rows)
    out.push_back({r.repo, scope_name(r.cluster), format_double(r.actual),
                   format_double(r.generic_predicted),
                   format_double(r.specific_predicted),
                   format_double(r.pct_diff_generic),
                   format_double(r.pct_diff_specific),
                   format_double(r.improvement_pp)});
  return render_csv(config_line,
                    {"repo", "cluster", "actual", "generic_predicted",
                     "specific_predicted", "pct_diff_generic",
                     "pct_diff_specific", "improvement_pp"},
                    out);
}

std::string improvement_summary_csv(
    const std::string& config_line,
    const std::vector<evalharness::ClusterQuartiles>& summary) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& q : summary)
    rows.push_back({scope_name(q.cluster), format_double(q.q1),
                    format_double(q.median), format_double(q.q3),
                    std::to_string(q.n)});
  return render_csv(config_line,
                    {"cluster", "improvement_q1", "improvement_median",
                     "improvement_q3", "n"},
                    rows);
}

std::string betacv_csv(const std::string& config_line, const ksc::BetaCvCurve& curve,
                       const ksc::SelectKResult& selected) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& [k, v] : curve.entries)
    rows.push_back({std::to_string(k), format_double(v),
                    k == selected.k ? (selected.stable ? "selected" : "fallback")
                                    : ""});
  return render_csv(config_line, {"k", "beta_cv", "selection"}, rows);
}

std::string exclusions_csv(const std::string& config_line,
                           const timeseries::FilterResult& result) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& e : result.excluded)
    rows.push_back({e.repo, timeseries::exclusion_rule_name(e.rule)});
  for (int r = 0; r < 3; ++r)
    rows.push_back(
        {"(total)", std::string(timeseries::exclusion_rule_name(
                        static_cast<timeseries::ExclusionRule>(r))) +
                        "=" + std::to_string(result.rule_counts[r])});
  rows.push_back({"(kept)", std::to_string(result.dataset.series.size())});
  return render_csv(config_line, {"repo", "rule"}, rows);
}

namespace {

constexpr const char* kNewcomerMark = "---";

std::string opt_rank(const std::optional<std::size_t>& r) {
  return r ? std::to_string(*r) : kNewcomerMark;
}

std::string opt_diff(const std::optional<long long>& d) {
  return d ? std::to_string(*d) : kNewcomerMark;
}

} // namespace

std::string rank_table_csv(const std::string& config_line,
                           const ranking::RankComparison& generic,
                           const ranking::RankComparison* specific) {
  std::vector<std::string> header{"repo", "real", "predicted_generic"};
  if (specific) header.push_back("predicted_specific");
  header.push_back("diff_generic");
  if (specific) header.push_back("diff_specific");

  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < generic.rows.size(); ++i) {
    const auto& g = generic.rows[i];
    std::vector<std::string> row{g.repo, std::to_string(g.real_rank),
                                 opt_rank(g.predicted_rank)};
    if (specific) {
      const auto& s = specific->rows[i];
      if (s.repo != g.repo)
        raise(errc::mismatch, "rank table: comparisons cover different repos");
      row.push_back(opt_rank(s.predicted_rank));
      row.push_back(opt_diff(g.diff));
      row.push_back(opt_diff(s.diff));
    } else {
      row.push_back(opt_diff(g.diff));
    }
    rows.push_back(std::move(row));
  }
  return render_csv(config_line, header, rows);
}

std::string rank_rho_csv(
    const std::string& config_line, const ranking::RankComparison& generic,
    const std::vector<std::pair<std::size_t, double>>& generic_topk,
    const ranking::RankComparison* specific,
    const std::vector<std::pair<std::size_t, double>>* specific_topk) {
  std::vector<std::vector<std::string>> rows;
  const auto emit = [&](const std::string& model,
                        const ranking::RankComparison& cmp,
                        const std::vector<std::pair<std::size_t, double>>& topk) {
    rows.push_back({model, "all", format_double(cmp.rho), cmp.p_note,
                    std::to_string(cmp.newcomers), std::to_string(cmp.overestimated),
                    std::to_string(cmp.underestimated)});
    for (const auto& [k, rho] : topk)
      rows.push_back({model, "top-" + std::to_string(k), format_double(rho), "",
                      "", "", ""});
  };
  emit("generic", generic, generic_topk);
  if (specific)
    emit("specific", *specific,
         specific_topk ? *specific_topk
                       : std::vector<std::pair<std::size_t, double>>{});
  return render_csv(
      config_line,
      {"model", "group", "rho", "p_note", "newcomers", "overestimated",
       "underestimated"},
      rows);
}

} // namespace stargaze::report
