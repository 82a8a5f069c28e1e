#pragma once

// CSV report emission. Every report starts with two comment lines echoing the
// run configuration and its hash so outputs are attributable to exact inputs.

#include "stargaze/evalharness.hpp"
#include "stargaze/ksc.hpp"
#include "stargaze/ranking.hpp"
#include "stargaze/timeseries.hpp"
#include "stargaze/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace stargaze::report {

std::uint64_t fnv1a64(const std::string& text);
std::string hex64(std::uint64_t value);

/// Canonical "key=value key=value ..." line, keys sorted.
std::string canonical_config(const std::map<std::string, std::string>& kv);

/// Stable fingerprints used to detect mismatched inputs across pipeline steps.
std::string dataset_fingerprint(const Dataset& dataset);
std::string cluster_fingerprint(const ksc::ClusterModel& model);

std::string format_double(double v);

/// Writes `body` to path atomically (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& body);

std::string render_csv(const std::string& config_line,
                       const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows);

std::string sweep_csv(const std::string& config_line,
                      const std::vector<evalharness::SweepReport>& reports);

std::string predictions_csv(const std::string& config_line,
                            const std::vector<Prediction>& predictions,
                            const std::vector<int>* clusters);

std::string improvement_rows_csv(const std::string& config_line,
                                 const std::vector<evalharness::ImprovementRow>& rows);

std::string improvement_summary_csv(
    const std::string& config_line,
    const std::vector<evalharness::ClusterQuartiles>& summary);

std::string betacv_csv(const std::string& config_line, const ksc::BetaCvCurve& curve,
                       const ksc::SelectKResult& selected);

std::string exclusions_csv(const std::string& config_line,
                           const timeseries::FilterResult& result);

/// Table of real vs predicted ranks; newcomers carry "---" markers.
std::string rank_table_csv(const std::string& config_line,
                           const ranking::RankComparison& generic,
                           const ranking::RankComparison* specific);

std::string rank_rho_csv(
    const std::string& config_line, const ranking::RankComparison& generic,
    const std::vector<std::pair<std::size_t, double>>& generic_topk,
    const ranking::RankComparison* specific,
    const std::vector<std::pair<std::size_t, double>>* specific_topk);

} // namespace stargaze::report
