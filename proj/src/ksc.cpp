#include "stargaze/ksc.hpp"

#include "linalg.hpp"
#include "parallel.hpp"
#include "stargaze/error.hpp"
#include "stargaze/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include <json.hpp>

namespace stargaze::ksc {

using nlohmann::json;

namespace {

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

void check_same_length(const Vec& x, const Vec& y) {
  if (x.size() != y.size())
    raise(errc::invalid_argument, "shape vectors differ in length");
}

// Inner product of x with shift(y, q), plus the squared norm of the shifted
// y, without materializing the shifted vector.
void shifted_products(const Vec& x, const Vec& y, int q, double& xy,
                      double& yy) {
  const std::size_t n = y.size();
  xy = 0.0;
  yy = 0.0;
  if (q >= 0) {
    const std::size_t s = static_cast<std::size_t>(q);
    if (s >= n) return;
    for (std::size_t i = s; i < n; ++i) xy += x[i] * y[i - s];
    for (std::size_t j = 0; j + s < n; ++j) yy += y[j] * y[j];
  } else {
    const std::size_t s = static_cast<std::size_t>(-q);
    if (s >= n) return;
    for (std::size_t i = 0; i + s < n; ++i) xy += x[i] * y[i + s];
    for (std::size_t j = s; j < n; ++j) yy += y[j] * y[j];
  }
}

} // namespace

Vec shift(const Vec& x, int q, int q_max) {
  if (q_max >= 0 && std::abs(q) > q_max)
    raise(errc::shift_out_of_range, "shift " + std::to_string(q) +
                                        " exceeds radius " + std::to_string(q_max));
  const std::size_t n = x.size();
  Vec out(n, 0.0);
  if (q >= 0) {
    for (std::size_t i = static_cast<std::size_t>(q); i < n; ++i)
      out[i] = x[i - static_cast<std::size_t>(q)];
  } else {
    const std::size_t s = static_cast<std::size_t>(-q);
    for (std::size_t i = 0; i + s < n; ++i) out[i] = x[i + s];
  }
  return out;
}

double optimal_alpha(const Vec& x, const Vec& y) {
  check_same_length(x, y);
  const double yy = dot(y, y);
  if (!(yy > 0.0)) raise(errc::zero_norm, "optimal_alpha: zero-norm y");
  return dot(x, y) / yy;
}

DistanceResult distance(const Vec& x, const Vec& y, int q_max) {
  check_same_length(x, y);
  if (q_max < 0) raise(errc::invalid_argument, "q_max must be non-negative");
  const double xx = dot(x, x);
  if (!(xx > 0.0)) raise(errc::zero_norm, "distance: zero-norm x");
  if (!(dot(y, y) > 0.0)) raise(errc::zero_norm, "distance: zero-norm y");

  const std::size_t n = x.size();
  DistanceResult best;
  best.d = std::numeric_limits<double>::infinity();
  // Visit shifts as 0, -1, +1, -2, +2, ... so that strict comparison
  // implements the tie-break (smaller |q| first, then negative q).
  for (int step = 0; step <= q_max; ++step) {
    for (const int q : {-step, step}) {
      if (step == 0 && q == 0 && best.d < std::numeric_limits<double>::infinity())
        continue; // q = 0 visited once
      double xy, yy;
      shifted_products(x, y, q, xy, yy);
      const double alpha = yy > 0.0 ? xy / yy : 0.0;
      // Explicit residual: the closed form xx - xy^2/yy cancels badly for
      // near-parallel vectors and must report an exact zero on x itself.
      double r2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double yq = 0.0;
        if (q >= 0) {
          if (i >= static_cast<std::size_t>(q)) yq = y[i - static_cast<std::size_t>(q)];
        } else {
          const std::size_t s = static_cast<std::size_t>(-q);
          if (i + s < n) yq = y[i + s];
        }
        const double r = x[i] - alpha * yq;
        r2 += r * r;
      }
      const double d = std::sqrt(r2 / xx);
      if (d < best.d) best = {d, q, alpha};
    }
  }
  return best;
}

Vec centroid(const std::vector<Vec>& members, int q_max, const Vec& current) {
  if (members.empty()) raise(errc::invalid_argument, "centroid: no members");
  const std::size_t L = current.size();

  // Align every member to the current centroid and keep its direction.
  std::vector<Vec> aligned;
  aligned.reserve(members.size());
  for (const Vec& m : members) {
    check_same_length(m, current);
    const DistanceResult r = distance(current, m, q_max);
    Vec a = shift(m, r.q);
    for (double& v : a) v *= r.alpha;
    double an = norm(a);
    if (!(an > 0.0)) {
      a = shift(m, r.q); // scale vanished (orthogonal member); keep direction
      an = norm(a);
      if (!(an > 0.0)) continue; // shifted everything out of the window
    }
    for (double& v : a) v /= an;
    aligned.push_back(std::move(a));
  }
  if (aligned.empty())
    raise(errc::zero_norm, "centroid: no member survived alignment");

  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(L, L) *
                      static_cast<double>(aligned.size());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(L);
  for (const Vec& a : aligned) {
    const Eigen::Map<const Eigen::VectorXd> v(a.data(), L);
    M.noalias() -= v * v.transpose();
    mean += v;
  }

  const linalg::SymEigen eig = linalg::sym_eigen(M);
  const double lambda0 = eig.values[0];
  const double tol =
      1e-9 * std::max(1.0, std::abs(eig.values[eig.values.size() - 1]));

  // The minimizer is any unit vector of the bottom eigenspace; inside a
  // degenerate space pick the direction nearest the member mean.
  Eigen::VectorXd proj = Eigen::VectorXd::Zero(L);
  for (Eigen::Index c = 0; c < eig.values.size(); ++c) {
    if (eig.values[c] > lambda0 + tol) break;
    proj += (mean.dot(eig.vectors.col(c))) * eig.vectors.col(c);
  }
  Eigen::VectorXd mu = proj.norm() > 1e-12 * std::max(1.0, mean.norm())
                           ? Eigen::VectorXd(proj / proj.norm())
                           : Eigen::VectorXd(eig.vectors.col(0));
  if (mu.sum() < 0.0) mu = -mu;
  return Vec(mu.data(), mu.data() + mu.size());
}

std::vector<std::size_t> ClusterModel::cluster_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
  for (const int a : assignment) ++sizes[static_cast<std::size_t>(a)];
  return sizes;
}

namespace {

struct RunState {
  std::vector<int> assignment;
  std::vector<Vec> centroids;
  double objective = std::numeric_limits<double>::infinity();
  std::vector<double> trace;
  int iterations = 0;
};

std::vector<std::vector<Vec>> gather_members(const std::vector<Vec>& vectors,
                                             const std::vector<int>& assignment,
                                             int k) {
  std::vector<std::vector<Vec>> members(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < vectors.size(); ++i)
    members[static_cast<std::size_t>(assignment[i])].push_back(vectors[i]);
  return members;
}

double assigned_objective(const std::vector<Vec>& vectors,
                          const std::vector<int>& assignment,
                          const std::vector<Vec>& centroids, int q_max,
                          int jobs, std::vector<double>& dists) {
  dists.resize(vectors.size());
  parallel_for(vectors.size(), jobs, [&](std::size_t i) {
    dists[i] = distance(vectors[i], centroids[static_cast<std::size_t>(assignment[i])],
                        q_max).d;
  });
  double obj = 0.0;
  for (const double d : dists) obj += d * d;
  return obj;
}

// Seeded distance-squared prototype seeding. A random balanced partition
// makes every initial centroid the global mean and the iteration collapses
// into one blob plus re-seeded singletons; spread prototypes avoid that.
std::vector<Vec> seed_prototypes(const std::vector<Vec>& vectors, const Params& p,
                                 std::uint64_t init_seed) {
  const std::size_t n = vectors.size();
  SplitMix64 rng(init_seed);
  std::vector<std::size_t> chosen{static_cast<std::size_t>(rng.bounded(n))};
  std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
  while (chosen.size() < static_cast<std::size_t>(p.k)) {
    const Vec& last = vectors[chosen.back()];
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = distance(vectors[i], last, p.q_max).d;
      min_d2[i] = std::min(min_d2[i], d * d);
      total += min_d2[i];
    }
    std::size_t pick = n;
    if (total > 0.0) {
      const double u = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += min_d2[i];
        if (u < acc) {
          pick = i;
          break;
        }
      }
    }
    if (pick == n) { // numerical edge or all-duplicate remainder
      pick = rng.bounded(n);
    }
    chosen.push_back(pick);
  }
  std::vector<Vec> centroids;
  centroids.reserve(chosen.size());
  for (const std::size_t i : chosen) {
    Vec c = vectors[i];
    double cn = 0.0;
    for (const double v : c) cn += v * v;
    cn = std::sqrt(cn);
    for (double& v : c) v /= cn;
    centroids.push_back(std::move(c));
  }
  return centroids;
}

RunState run_once(const std::vector<Vec>& vectors, const Params& p,
                  std::uint64_t init_seed) {
  const std::size_t n = vectors.size();
  const int k = p.k;
  RunState st;

  st.centroids = seed_prototypes(vectors, p, init_seed);
  st.assignment.assign(n, 0);
  std::vector<double> dists(n);
  parallel_for(n, p.jobs, [&](std::size_t i) {
    int best_c = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      const double d =
          distance(vectors[i], st.centroids[static_cast<std::size_t>(c)], p.q_max).d;
      if (d < best_d) {
        best_d = d;
        best_c = c;
      }
    }
    st.assignment[i] = best_c;
    dists[i] = best_d;
  });
  st.objective = 0.0;
  for (const double d : dists) st.objective += d * d;
  st.trace.push_back(st.objective);

  for (int iter = 1; iter <= p.max_iter; ++iter) {
    // Assignment step.
    std::vector<int> next(n);
    parallel_for(n, p.jobs, [&](std::size_t i) {
      int best_c = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d =
            distance(vectors[i], st.centroids[static_cast<std::size_t>(c)], p.q_max).d;
        if (d < best_d) {
          best_d = d;
          best_c = c;
        }
      }
      next[i] = best_c;
      dists[i] = best_d;
    });

    // Re-seed empty clusters with the farthest point, never draining a
    // cluster below one member.
    std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
    for (const int a : next) ++sizes[static_cast<std::size_t>(a)];
    for (int c = 0; c < k; ++c) {
      if (sizes[static_cast<std::size_t>(c)] != 0) continue;
      std::size_t donor = n;
      double worst = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[static_cast<std::size_t>(next[i])] < 2) continue;
        if (dists[i] > worst) {
          worst = dists[i];
          donor = i;
        }
      }
      if (donor == n) raise(errc::degenerate_data, "cannot repopulate empty cluster");
      --sizes[static_cast<std::size_t>(next[donor])];
      next[donor] = c;
      ++sizes[static_cast<std::size_t>(c)];
      dists[donor] = -1.0;
    }

    const bool changed = next != st.assignment;

    // Centroid step.
    auto members = gather_members(vectors, next, k);
    std::vector<Vec> updated(static_cast<std::size_t>(k));
    parallel_for(static_cast<std::size_t>(k), p.jobs, [&](std::size_t c) {
      updated[c] = centroid(members[c], p.q_max, st.centroids[c]);
    });

    std::vector<double> new_dists;
    const double obj =
        assigned_objective(vectors, next, updated, p.q_max, p.jobs, new_dists);
    if (obj > st.objective + 1e-12) break; // no further improvement

    st.assignment = std::move(next);
    st.centroids = std::move(updated);
    st.objective = obj;
    st.trace.push_back(obj);
    st.iterations = iter;
    dists = std::move(new_dists);
    if (!changed) break;
  }
  return st;
}

} // namespace

ClusterModel cluster(const std::vector<Vec>& vectors,
                     const std::vector<std::string>& names,
                     const Params& params) {
  const std::size_t n = vectors.size();
  if (params.k < 1) raise(errc::invalid_argument, "k must be >= 1");
  if (params.max_iter < 1) raise(errc::invalid_argument, "max_iter must be >= 1");
  if (params.q_max < 0) raise(errc::invalid_argument, "q_max must be >= 0");
  if (n == 0) raise(errc::empty_input, "cluster: no vectors");
  if (!names.empty() && names.size() != n)
    raise(errc::invalid_argument, "cluster: names/vectors size mismatch");
  for (const Vec& v : vectors) {
    if (v.size() != vectors.front().size())
      raise(errc::invalid_argument, "cluster: ragged vectors");
    if (!(dot(v, v) > 0.0)) raise(errc::zero_norm, "cluster: zero vector");
  }
  const std::set<Vec> distinct(vectors.begin(), vectors.end());
  if (distinct.size() < static_cast<std::size_t>(params.k))
    raise(errc::degenerate_data, "fewer distinct vectors than clusters");

  RunState best;
  const int restarts = std::max(1, params.restarts);
  for (int r = 0; r < restarts; ++r) {
    const std::uint64_t init_seed =
        derive_seed(params.seed, "ksc-init-" + std::to_string(r));
    RunState st = run_once(vectors, params, init_seed);
    if (st.objective < best.objective) best = std::move(st);
  }

  ClusterModel model;
  model.k = params.k;
  model.seed = params.seed;
  model.q_max = params.q_max;
  model.iterations = best.iterations;
  model.objective = best.objective;
  model.objective_trace = std::move(best.trace);
  model.centroids = std::move(best.centroids);
  model.assignment = std::move(best.assignment);
  if (names.empty()) {
    model.repos.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      model.repos.push_back("series-" + std::to_string(i));
  } else {
    model.repos = names;
  }
  return model;
}

BetaCvCurve beta_cv(const std::vector<Vec>& vectors,
                    const std::vector<const ClusterModel*>& models, int q_max,
                    int jobs) {
  const std::size_t n = vectors.size();
  if (n < 2) raise(errc::empty_input, "beta_cv: need at least two vectors");
  if (models.empty()) raise(errc::empty_input, "beta_cv: no models");
  for (const ClusterModel* m : models)
    if (!m || m->assignment.size() != n)
      raise(errc::invalid_argument, "beta_cv: model does not cover the data");

  // Pairwise distances are model-independent; computed once, both directions
  // averaged. Condensed upper-triangle layout.
  std::vector<double> pairwise(n * (n - 1) / 2);
  parallel_for(n - 1, jobs, [&](std::size_t i) {
    std::size_t base = i * n - i * (i + 1) / 2 - i - 1;
    for (std::size_t j = i + 1; j < n; ++j)
      pairwise[base + j] = 0.5 * (distance(vectors[i], vectors[j], q_max).d +
                                  distance(vectors[j], vectors[i], q_max).d);
  });
  const auto pair_at = [&](std::size_t i, std::size_t j) {
    return pairwise[i * n - i * (i + 1) / 2 - i - 1 + j];
  };

  struct Acc {
    double sum = 0.0, sumsq = 0.0;
    std::size_t count = 0;
    void add(double v) {
      sum += v;
      sumsq += v * v;
      ++count;
    }
    double cv(const char* side) const {
      if (count == 0)
        raise(errc::undefined_cv, std::string("beta_cv: no ") + side + " pairs");
      const double mean = sum / static_cast<double>(count);
      if (mean == 0.0)
        raise(errc::undefined_cv, std::string("beta_cv: zero mean ") + side);
      double var = 0.0;
      if (count > 1) {
        var = (sumsq - sum * sum / static_cast<double>(count)) /
              static_cast<double>(count - 1);
        var = std::max(0.0, var);
      }
      return std::sqrt(var) / mean;
    }
  };

  BetaCvCurve curve;
  for (const ClusterModel* m : models) {
    Acc intra, inter;
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        (m->assignment[i] == m->assignment[j] ? intra : inter).add(pair_at(i, j));
    curve.entries.emplace_back(m->k, intra.cv("intracluster") / inter.cv("intercluster"));
  }
  std::sort(curve.entries.begin(), curve.entries.end());
  return curve;
}

SelectKResult select_k(const BetaCvCurve& curve, double stability_tol,
                       int window) {
  const auto& e = curve.entries;
  if (window < 1) raise(errc::invalid_argument, "select_k: window must be >= 1");
  if (e.size() < static_cast<std::size_t>(window) + 1)
    raise(errc::invalid_argument, "select_k: curve shorter than window + 1");
  for (std::size_t i = 1; i < e.size(); ++i)
    if (e[i].first != e[i - 1].first + 1)
      raise(errc::invalid_argument, "select_k: k values not consecutive");

  const std::size_t eligible = e.size() - static_cast<std::size_t>(window);
  double best_dev = std::numeric_limits<double>::infinity();
  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < eligible; ++i) {
    const double ref = std::max(std::abs(e[i].second), 1e-300);
    double max_dev = 0.0;
    for (int j = 1; j <= window; ++j)
      max_dev = std::max(max_dev,
                         std::abs(e[i + static_cast<std::size_t>(j)].second -
                                  e[i].second) / ref);
    if (max_dev <= stability_tol) return {e[i].first, true};
    if (max_dev < best_dev) {
      best_dev = max_dev;
      best_idx = i;
    }
  }
  return {e[best_idx].first, false};
}

namespace {
constexpr int kKscFormatVersion = 1;
}

void save_model(const ClusterModel& model, const std::string& path) {
  json doc = {{"format", "stargaze-ksc"},
              {"version", kKscFormatVersion},
              {"k", model.k},
              {"seed", model.seed},
              {"q_max", model.q_max},
              {"iterations", model.iterations},
              {"objective", model.objective},
              {"objective_trace", model.objective_trace},
              {"centroids", model.centroids},
              {"repos", model.repos},
              {"assignment", model.assignment}};
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(errc::io, "cannot write " + path);
  out << doc.dump(2) << '\n';
  if (!out) raise(errc::io, "short write to " + path);
}

ClusterModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io, "cannot read " + path);
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded() || doc.value("format", "") != "stargaze-ksc")
    raise(errc::format_version_mismatch, path + ": not a cluster model");
  if (doc.value("version", -1) != kKscFormatVersion)
    raise(errc::format_version_mismatch, path + ": unsupported version");
  ClusterModel model;
  model.k = doc.at("k").get<int>();
  model.seed = doc.at("seed").get<std::uint64_t>();
  model.q_max = doc.at("q_max").get<int>();
  model.iterations = doc.at("iterations").get<int>();
  model.objective = doc.at("objective").get<double>();
  model.objective_trace = doc.at("objective_trace").get<std::vector<double>>();
  model.centroids = doc.at("centroids").get<std::vector<Vec>>();
  model.repos = doc.at("repos").get<std::vector<std::string>>();
  model.assignment = doc.at("assignment").get<std::vector<int>>();
  return model;
}

} // namespace stargaze::ksc
