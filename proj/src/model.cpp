#include "pucorrect/model.hpp"

#include <cmath>
#include <stdexcept>

namespace pucorrect {

double LinearModel::score(std::span<const double> x) const {
  if (x.size() != weights.size())
    throw std::invalid_argument("feature dimension does not match model");
  double s = bias;
  for (std::size_t j = 0; j < weights.size(); ++j) s += weights[j] * x[j];
  return s;
}

std::vector<double> predict_scores(const LinearModel& model, const Matrix& features) {
  if (features.cols != model.feature_dim())
    throw std::invalid_argument("feature dimension does not match model");
  std::vector<double> out(features.rows);
  for (std::size_t i = 0; i < features.rows; ++i) out[i] = model.score(features.row(i));
  return out;
}

std::vector<double> squash_scores(std::span<const double> scores) {
  std::vector<double> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = std::tanh(scores[i]);
  return out;
}

std::vector<int> predict_labels(std::span<const double> scores, double threshold) {
  std::vector<int> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i)
    out[i] = scores[i] > threshold ? +1 : -1;
  return out;
}

void Standardizer::fit(const Matrix& features) {
  if (features.rows == 0)
    throw std::invalid_argument("Standardizer: empty feature matrix");
  const std::size_t d = features.cols;
  mean.assign(d, 0.0);
  scale.assign(d, 1.0);
  for (std::size_t i = 0; i < features.rows; ++i)
    for (std::size_t j = 0; j < d; ++j) mean[j] += features.at(i, j);
  for (double& m : mean) m /= static_cast<double>(features.rows);
  std::vector<double> var(d, 0.0);
  for (std::size_t i = 0; i < features.rows; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double dlt = features.at(i, j) - mean[j];
      var[j] += dlt * dlt;
    }
  for (std::size_t j = 0; j < d; ++j) {
    const double sd = std::sqrt(var[j] / static_cast<double>(features.rows));
    scale[j] = sd > 1e-12 ? sd : 1.0;
  }
}

Matrix Standardizer::apply(const Matrix& features) const {
  if (features.cols != mean.size())
    throw std::invalid_argument("Standardizer: dimension mismatch");
  Matrix out(features.rows, features.cols);
  for (std::size_t i = 0; i < features.rows; ++i)
    for (std::size_t j = 0; j < features.cols; ++j)
      out.at(i, j) = (features.at(i, j) - mean[j]) / scale[j];
  return out;
}

}  // namespace pucorrect
