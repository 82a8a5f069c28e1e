#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace stargaze::ranking {

struct RankedEntry {
  std::string repo;
  double score = 0.0;
  std::size_t rank = 0; // 1-based ordinal rank
};

/// Descending-score ranking with a deterministic lexicographic tiebreak for
/// the displayed ordinal ranks. Correlations use averaged ranks instead.
struct Ranking {
  std::vector<RankedEntry> entries; // sorted by rank
};

Ranking rank_by_stars(const std::vector<std::pair<std::string, double>>& scores);

/// Spearman's rho with average-rank tie handling over two rankings of the
/// same repository set. Throws errc::set_mismatch and
/// errc::degenerate_variance (all scores tied on either side).
double spearman(const Ranking& a, const Ranking& b);

struct ComparisonRow {
  std::string repo;
  std::size_t real_rank = 0;
  std::optional<std::size_t> predicted_rank; // empty for newcomers
  std::optional<long long> diff;             // predicted_rank - real_rank
};

struct RankComparison {
  std::vector<ComparisonRow> rows; // real-rank order
  double rho = 0.0;                // newcomers excluded
  std::string p_note;              // "< 0.001" style, t-approximation
  std::size_t newcomers = 0;
  std::size_t overestimated = 0;  // diff < 0: predicted rank better than real
  std::size_t underestimated = 0; // diff > 0
};

/// Compares a predicted ranking against the real one. Repositories present
/// only in the real ranking are newcomers: flagged, kept in the rows (their
/// positions shift everyone's real rank) but excluded from rho.
/// Requires predicted repos to be a subset of real repos.
RankComparison compare_rankings(const Ranking& predicted, const Ranking& real);

/// rho restricted to the top-k entries of the real ranking (newcomers
/// excluded first), for each requested k. Throws errc::k_too_large.
std::vector<std::pair<std::size_t, double>> topk_correlation(
    const Ranking& predicted, const Ranking& real,
    const std::vector<std::size_t>& ks);

} // namespace stargaze::ranking
