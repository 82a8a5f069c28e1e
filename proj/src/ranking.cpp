#include "stargaze/ranking.hpp"

#include "stargaze/error.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace stargaze::ranking {

Ranking rank_by_stars(const std::vector<std::pair<std::string, double>>& scores) {
  if (scores.empty()) raise(errc::empty_input, "rank_by_stars: no scores");
  Ranking r;
  r.entries.reserve(scores.size());
  for (const auto& [repo, score] : scores) r.entries.push_back({repo, score, 0});
  std::sort(r.entries.begin(), r.entries.end(),
            [](const RankedEntry& a, const RankedEntry& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.repo < b.repo;
            });
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    if (i && r.entries[i].repo == r.entries[i - 1].repo)
      raise(errc::invalid_argument, "rank_by_stars: duplicate repo " +
                                        r.entries[i].repo);
    r.entries[i].rank = i + 1;
  }
  return r;
}

namespace {

// Average ranks (ties share the mean of their ordinal positions) for the
// subset of entries present in `keep`; entries must already be score-sorted.
std::unordered_map<std::string, double> average_ranks(
    const Ranking& r, const std::unordered_map<std::string, bool>* keep) {
  std::vector<const RankedEntry*> subset;
  subset.reserve(r.entries.size());
  for (const RankedEntry& e : r.entries)
    if (!keep || keep->count(e.repo)) subset.push_back(&e);
  std::unordered_map<std::string, double> out;
  std::size_t i = 0;
  while (i < subset.size()) {
    std::size_t j = i;
    while (j + 1 < subset.size() && subset[j + 1]->score == subset[i]->score) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t m = i; m <= j; ++m) out[subset[m]->repo] = avg;
    i = j + 1;
  }
  return out;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0)
    raise(errc::degenerate_variance, "spearman: constant ranks");
  return sab / std::sqrt(saa * sbb);
}

double rho_over_common(const Ranking& a, const Ranking& b,
                       const std::unordered_map<std::string, bool>* keep) {
  const auto ra = average_ranks(a, keep);
  const auto rb = average_ranks(b, keep);
  std::vector<double> va, vb;
  va.reserve(ra.size());
  vb.reserve(ra.size());
  // Iterate one ranking in its deterministic order for reproducible sums.
  for (const RankedEntry& e : a.entries) {
    const auto ita = ra.find(e.repo);
    if (ita == ra.end()) continue;
    const auto itb = rb.find(e.repo);
    if (itb == rb.end())
      raise(errc::set_mismatch, "spearman: " + e.repo + " missing from one side");
    va.push_back(ita->second);
    vb.push_back(itb->second);
  }
  if (va.size() != rb.size())
    raise(errc::set_mismatch, "spearman: rankings cover different repos");
  if (va.size() < 2)
    raise(errc::degenerate_variance, "spearman: fewer than two repos");
  return pearson(va, vb);
}

std::string p_value_note(double rho, std::size_t n) {
  if (n < 3) return "n too small";
  const double r2 = std::min(rho * rho, 1.0 - 1e-15);
  const double t = std::abs(rho) * std::sqrt((static_cast<double>(n) - 2.0) / (1.0 - r2));
  // Two-tailed thresholds from the normal approximation of the t statistic.
  if (t > 3.291) return "< 0.001";
  if (t > 2.576) return "< 0.01";
  if (t > 1.960) return "< 0.05";
  return ">= 0.05";
}

} // namespace

double spearman(const Ranking& a, const Ranking& b) {
  if (a.entries.size() != b.entries.size())
    raise(errc::set_mismatch, "spearman: rankings differ in size");
  return rho_over_common(a, b, nullptr);
}

RankComparison compare_rankings(const Ranking& predicted, const Ranking& real) {
  std::unordered_map<std::string, std::size_t> predicted_rank;
  for (const RankedEntry& e : predicted.entries) predicted_rank[e.repo] = e.rank;
  std::unordered_map<std::string, bool> common;
  for (const RankedEntry& e : real.entries)
    if (predicted_rank.count(e.repo)) common[e.repo] = true;
  if (common.size() != predicted.entries.size())
    raise(errc::set_mismatch,
          "compare_rankings: predicted repos not a subset of real repos");

  RankComparison out;
  out.rows.reserve(real.entries.size());
  for (const RankedEntry& e : real.entries) {
    ComparisonRow row;
    row.repo = e.repo;
    row.real_rank = e.rank;
    const auto it = predicted_rank.find(e.repo);
    if (it != predicted_rank.end()) {
      row.predicted_rank = it->second;
      row.diff = static_cast<long long>(it->second) -
                 static_cast<long long>(e.rank);
      if (*row.diff < 0)
        ++out.overestimated;
      else if (*row.diff > 0)
        ++out.underestimated;
    } else {
      ++out.newcomers;
    }
    out.rows.push_back(std::move(row));
  }
  out.rho = rho_over_common(predicted, real, &common);
  out.p_note = p_value_note(out.rho, common.size());
  return out;
}

std::vector<std::pair<std::size_t, double>> topk_correlation(
    const Ranking& predicted, const Ranking& real,
    const std::vector<std::size_t>& ks) {
  std::unordered_map<std::string, bool> in_predicted;
  for (const RankedEntry& e : predicted.entries) in_predicted[e.repo] = true;
  // Real-ranking order with newcomers dropped.
  std::vector<const RankedEntry*> common;
  for (const RankedEntry& e : real.entries)
    if (in_predicted.count(e.repo)) common.push_back(&e);

  std::vector<std::pair<std::size_t, double>> out;
  for (const std::size_t k : ks) {
    if (k > common.size())
      raise(errc::k_too_large, "topk_correlation: k=" + std::to_string(k) +
                                   " > " + std::to_string(common.size()));
    std::unordered_map<std::string, bool> keep;
    for (std::size_t i = 0; i < k; ++i) keep[common[i]->repo] = true;
    out.emplace_back(k, rho_over_common(predicted, real, &keep));
  }
  return out;
}

} // namespace stargaze::ranking
