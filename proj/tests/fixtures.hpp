#pragma once

// Reference prediction and ranking rows for twenty repositories, used as
// fixed-input oracles for the percent-difference, improvement and rank-diff
// computations. Values are as published; two improvement entries are known
// to be internally inconsistent with the rest of the column and are asserted
// as such (see kInconsistentImprovementRows).

#include <cstddef>

namespace fixtures {

struct GenericPredictionRow {
  const char* repo;
  double stars;     // gained in the 52-week window
  double predicted; // generic model, t_r = 26, t = 52
  double pct_diff;  // published percent difference
};

inline constexpr GenericPredictionRow kGenericPredictionRows[] = {
    {"jquery/jquery", 6160, 5369, -12.84},
    {"robbyrussell/oh-my-zsh", 13536, 11829, -12.61},
    {"airbnb/javascript", 17026, 14882, -12.59},
    {"h5bp/html5-boilerplate", 4896, 4691, -4.19},
    {"meteor/meteor", 9919, 10082, +1.64},
    {"torvalds/linux", 10566, 9682, -8.37},
    {"daneden/animate.css", 10492, 9452, -9.91},
    {"facebook/react-native", 18443, 19373, +5.04},
    {"rails/rails", 5701, 5128, -10.05},
    {"docker/docker", 10268, 9721, -5.33},
    {"ReactiveRaven/jqBootstrapValidation", 213, 298, +39.91},
    {"infinitered/ProMotion", 119, 238, +100.00},
    {"nslocum/design-patterns-in-ruby", 640, 731, +14.22},
    {"jbt/markdown-editor", 621, 744, +19.81},
    {"mumble-voip/mumble", 565, 667, +18.05},
    {"Manabu-GT/ExpandableTextView", 676, 623, -7.84},
    {"apache/flink", 890, 712, -20.00},
    {"mafintosh/mongojs", 322, 381, +18.32},
    {"rofl0r/proxychains-ng", 813, 790, -2.83},
    {"mikeflynn/egg.js", 584, 793, +35.79},
};

struct SpecificPredictionRow {
  const char* repo;
  int cluster; // 1-based as published
  double stars;
  double specific_predicted; // specific model, t_r = 26, t = 52
  double pct_improve;        // published improvement over the generic model
};

inline constexpr SpecificPredictionRow kSpecificPredictionRows[] = {
    {"jquery/jquery", 1, 6160, 5578, +3.39},
    {"robbyrussell/oh-my-zsh", 2, 13536, 12826, +7.37},
    {"airbnb/javascript", 2, 17026, 20140, -5.70},
    {"h5bp/html5-boilerplate", 1, 4896, 4690, -0.02},
    {"meteor/meteor", 2, 9919, 10571, -4.93},
    {"torvalds/linux", 2, 10566, 10498, +7.72},
    {"daneden/animate.css", 2, 10492, 10045, +5.65},
    {"facebook/react-native", 3, 18443, 18432, +4.98},
    {"rails/rails", 1, 5701, 5386, +4.53},
    {"docker/docker", 2, 10268, 9468, -2.46},
    {"ReactiveRaven/jqBootstrapValidation", 1, 213, 209, +38.03},
    {"infinitered/ProMotion", 1, 119, 155, +69.75},
    {"nslocum/design-patterns-in-ruby", 3, 640, 922, -29.84},
    {"jbt/markdown-editor", 2, 621, 667, +12.40},
    {"mumble-voip/mumble", 2, 565, 583, +82.35},
    {"Manabu-GT/ExpandableTextView", 3, 676, 729, 0.0},
    {"apache/flink", 3, 890, 853, +14.29},
    {"mafintosh/mongojs", 1, 322, 309, +14.29},
    {"rofl0r/proxychains-ng", 3, 813, 886, -6.15},
    {"mikeflynn/egg.js", 1, 584, 523, +25.34},
};

// Indices into kSpecificPredictionRows whose published improvement does not
// follow the percentage-point formula the rest of the column follows.
inline constexpr std::size_t kInconsistentImprovementRows[] = {14, 16};

struct RankRow {
  const char* repo;
  long long real_rank;
  long long generic_rank;  // -1: newcomer (not in the prediction set)
  long long specific_rank; // -1: newcomer
  long long diff_generic;
  long long diff_specific;
};

inline constexpr RankRow kRankRows[] = {
    {"jquery/jquery", 1, 1, 1, 0, 0},
    {"robbyrussell/oh-my-zsh", 2, 2, 2, 0, 0},
    {"airbnb/javascript", 3, 5, 3, 2, 0},
    {"h5bp/html5-boilerplate", 4, 4, 5, 0, 1},
    {"meteor/meteor", 5, 3, 4, -2, -1},
    {"torvalds/linux", 6, 8, 6, 2, 0},
    {"daneden/animate.css", 7, 9, 8, 2, 1},
    {"facebook/react-native", 8, 6, 7, -2, -1},
    {"rails/rails", 9, 10, 10, 1, 1},
    {"docker/docker", 10, 11, 11, 1, 1},
    {"jbt/markdown-editor", 4707, 3908, 4001, -799, -706},
    {"apache/flink", 4708, 4180, 4167, -528, -541},
    {"google/ion", 4709, -1, -1, 0, 0},
    {"Manabu-GT/ExpandableTextView", 4710, 4149, 4016, -561, -694},
    {"iPaulPro/Android-ItemTouchHelper-Demo", 4711, -1, -1, 0, 0},
    {"mumble-voip/mumble", 4712, 4011, 4092, -701, -620},
    {"mafintosh/mongojs", 4713, 4080, 4164, -633, -549},
    {"mikeflynn/egg.js", 4714, 3569, 4194, -1145, -520},
    {"wequick/Small", 4715, -1, -1, 0, 0},
    {"rofl0r/proxychains-ng", 4716, 4136, 3824, -580, -892},
};

inline constexpr std::size_t kRealRankingSize = 4716;
inline constexpr std::size_t kNewcomerCount = 468;

} // namespace fixtures
