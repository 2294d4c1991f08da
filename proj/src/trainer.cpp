#include "pucorrect/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "pucorrect/common.hpp"

namespace pucorrect {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (l2_lambda < 0.0) throw std::invalid_argument("l2_lambda must be >= 0");
}

std::vector<std::size_t> epoch_permutation(std::size_t n, std::uint64_t seed, int epoch) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(epoch)));
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

namespace {

constexpr double kStepFloor = 1e-8;

bool all_finite(const std::vector<double>& xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

double objective(const RiskSpec& spec, const LinearModel& model, const Matrix& features,
                 const std::vector<LabelState>& labels, const RiskAux& aux,
                 double l2_lambda) {
  const std::vector<double> scores = predict_scores(model, features);
  double value = risk_value(spec, scores, labels, aux);
  if (l2_lambda > 0.0) {
    double sq = 0.0;
    for (double w : model.weights) sq += w * w;
    value += 0.5 * l2_lambda * sq;
  }
  return value;
}

}  // namespace

LinearModel train(const Matrix& features, const std::vector<LabelState>& labels,
                  const RiskAux& aux, const RiskSpec& spec, const TrainConfig& config) {
  config.validate();
  spec.validate();
  if (features.rows != labels.size())
    throw std::invalid_argument("train: features/labels length mismatch");
  if (features.rows < 2) throw std::invalid_argument("train: needs at least two rows");
  for (double v : features.data)
    if (!std::isfinite(v))
      throw std::runtime_error("train: non-finite feature value encountered");

  LinearModel model;
  model.weights.assign(features.cols, 0.0);
  model.bias = 0.0;

  double step = config.learning_rate;
  double prev_objective =
      objective(spec, model, features, labels, aux, config.l2_lambda);

  int epoch = 0;
  while (epoch < config.epochs) {
    const LinearModel checkpoint = model;
    const std::vector<std::size_t> order =
        epoch_permutation(features.rows, config.seed, epoch);

    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t count = std::min<std::size_t>(config.batch_size,
                                                      order.size() - start);
      std::span<const std::size_t> batch(order.data() + start, count);
      std::vector<double> grad =
          risk_gradient_subset(spec, model, features, labels, aux, batch);
      if (!all_finite(grad))
        throw std::runtime_error("train: non-finite gradient encountered");
      for (std::size_t j = 0; j < features.cols; ++j) {
        const double g = grad[j] + config.l2_lambda * model.weights[j];
        model.weights[j] -= step * g;
      }
      model.bias -= step * grad[features.cols];
      if (!all_finite(model.weights) || !std::isfinite(model.bias))
        throw std::runtime_error("train: non-finite parameters encountered");
    }

    const double now = objective(spec, model, features, labels, aux, config.l2_lambda);
    if (!std::isfinite(now))
      throw std::runtime_error("train: non-finite objective encountered");
    if (now > prev_objective) {
      // Roll back, halve the step, retry this epoch.
      model = checkpoint;
      step *= 0.5;
      if (step < kStepFloor) break;
      continue;
    }
    prev_objective = now;
    ++epoch;
  }
  return model;
}

}  // namespace pucorrect
