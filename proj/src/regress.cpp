#include "stargaze/regress.hpp"

#include "linalg.hpp"
#include "stargaze/error.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace stargaze::regress {

using nlohmann::json;

Model fit(const std::vector<WindowedSeries>& train, int t_r, int t, int scope) {
  if (t_r < 1 || t < t_r)
    raise(errc::invalid_argument, "fit: need 1 <= t_r <= t");
  const std::size_t n = train.size();
  if (n < static_cast<std::size_t>(t_r) + 2)
    raise(errc::insufficient_data,
          "fit: " + std::to_string(n) + " series for t_r=" + std::to_string(t_r));
  for (const WindowedSeries& s : train)
    if (s.gained.size() < static_cast<std::size_t>(t))
      raise(errc::insufficient_data, s.repo + ": series does not cover week " +
                                         std::to_string(t));

  Eigen::MatrixXd A(n, t_r + 1);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    A(i, 0) = 1.0;
    for (int j = 1; j <= t_r; ++j) A(i, j) = train[i].gained[j - 1];
    b(i) = train[i].gained[t - 1];
  }

  const linalg::LstSqResult ls = linalg::lstsq_min_norm(A, b);
  Model model;
  model.t_r = t_r;
  model.t = t;
  model.coeffs = ls.coeffs;
  model.trained_on = static_cast<int>(n);
  model.scope = scope;
  model.collinear = ls.rank_deficient;
  return model;
}

double predict(const Model& model, std::span<const double> prefix) {
  if (prefix.size() != static_cast<std::size_t>(model.t_r))
    raise(errc::arity_mismatch,
          "predict: prefix length " + std::to_string(prefix.size()) +
              " != t_r " + std::to_string(model.t_r));
  double y = model.coeffs[0];
  for (std::size_t i = 0; i < prefix.size(); ++i)
    y += model.coeffs[i + 1] * prefix[i];
  return y;
}

double rse(double predicted, double actual) {
  if (!(actual > 0.0)) raise(errc::zero_actual, "rse: actual must be positive");
  const double ratio = predicted / actual - 1.0;
  return ratio * ratio;
}

Mrse mrse(const std::vector<double>& rse_values) {
  if (rse_values.empty()) raise(errc::empty_input, "mrse: no values");
  const std::size_t n = rse_values.size();
  double sum = 0.0;
  for (const double v : rse_values) sum += v;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (const double v : rse_values) ss += (v - mean) * (v - mean);
  const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  return {mean, 1.96 * sd / std::sqrt(static_cast<double>(n)), n};
}

Mrse mrse(const std::vector<Prediction>& predictions) {
  std::vector<double> values;
  values.reserve(predictions.size());
  for (const Prediction& p : predictions) values.push_back(p.rse);
  return mrse(values);
}

namespace {
constexpr int kModelFormatVersion = 1;
}

void save_model(const Model& model, const std::string& path) {
  json doc = {{"format", "stargaze-regression"},
              {"version", kModelFormatVersion},
              {"t_r", model.t_r},
              {"t", model.t},
              {"coeffs", model.coeffs},
              {"trained_on", model.trained_on},
              {"scope", model.scope},
              {"collinear", model.collinear}};
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(errc::io, "cannot write " + path);
  out << doc.dump(2) << '\n';
  if (!out) raise(errc::io, "short write to " + path);
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io, "cannot read " + path);
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded() || doc.value("format", "") != "stargaze-regression")
    raise(errc::format_version_mismatch, path + ": not a regression model");
  if (doc.value("version", -1) != kModelFormatVersion)
    raise(errc::format_version_mismatch, path + ": unsupported version");
  Model model;
  model.t_r = doc.at("t_r").get<int>();
  model.t = doc.at("t").get<int>();
  model.coeffs = doc.at("coeffs").get<std::vector<double>>();
  model.trained_on = doc.at("trained_on").get<int>();
  model.scope = doc.at("scope").get<int>();
  model.collinear = doc.at("collinear").get<bool>();
  if (model.coeffs.size() != static_cast<std::size_t>(model.t_r) + 1)
    raise(errc::format_version_mismatch, path + ": coefficient arity mismatch");
  return model;
}

} // namespace stargaze::regress
