#pragma once

#include "stargaze/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace stargaze::regress {

constexpr int kGenericScope = -1;

/// Linear model mapping the first t_r window weeks to the week-t value:
///   predicted = coeffs[0] + sum_i coeffs[i] * gained[i-1].
struct Model {
  int t_r = 0;
  int t = 0;
  std::vector<double> coeffs; // intercept first, size t_r + 1
  int trained_on = 0;
  int scope = kGenericScope; // kGenericScope or a cluster index
  bool collinear = false;    // design matrix was rank-deficient
};

/// Least-squares fit of gained[t-1] on [1, gained[0..t_r-1]] over the training
/// series. Rank-deficient designs get the minimum-norm solution (relative
/// singular value cutoff 1e-10) and the collinear flag.
/// Throws errc::insufficient_data (needs at least t_r + 2 series, each
/// covering week t) and errc::numerical_failure.
Model fit(const std::vector<WindowedSeries>& train, int t_r, int t,
          int scope = kGenericScope);

/// Applies the model to a t_r-week prefix. Throws errc::arity_mismatch.
/// Negative outputs are reported as-is.
double predict(const Model& model, std::span<const double> prefix);

/// Relative squared error (predicted/actual - 1)^2. Throws errc::zero_actual.
double rse(double predicted, double actual);

struct Mrse {
  double mean = 0.0;
  double ci95 = 0.0; // 1.96 * sample stddev / sqrt(n); 0 when n == 1
  std::size_t n = 0;
};

/// Arithmetic mean of RSE values with a normal-approximation 95% CI.
/// Throws errc::empty_input.
Mrse mrse(const std::vector<double>& rse_values);
Mrse mrse(const std::vector<Prediction>& predictions);

void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

} // namespace stargaze::regress
