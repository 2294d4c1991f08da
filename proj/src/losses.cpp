#include "pucorrect/losses.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pucorrect/common.hpp"

namespace pucorrect {

BaseLoss parse_loss(const std::string& name) {
  if (name == "hinge") return BaseLoss::Hinge;
  if (name == "double-hinge") return BaseLoss::DoubleHinge;
  if (name == "logistic") return BaseLoss::Logistic;
  throw std::invalid_argument("unknown loss: " + name);
}

const char* loss_name(BaseLoss base) {
  switch (base) {
    case BaseLoss::Hinge: return "hinge";
    case BaseLoss::DoubleHinge: return "double-hinge";
    case BaseLoss::Logistic: return "logistic";
  }
  return "?";
}

double eval_loss(BaseLoss base, double z) {
  switch (base) {
    case BaseLoss::Hinge:
      return std::max(0.0, 1.0 - z);
    case BaseLoss::DoubleHinge:
      return std::max(-z, std::max(0.0, 0.5 - 0.5 * z));
    case BaseLoss::Logistic:
      // log(1 + exp(-z)) without overflow on either tail.
      return z >= 0.0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
  }
  return 0.0;
}

double loss_derivative(BaseLoss base, double z) {
  switch (base) {
    case BaseLoss::Hinge:
      return z < 1.0 ? -1.0 : 0.0;
    case BaseLoss::DoubleHinge:
      if (z < -1.0) return -1.0;
      if (z < 1.0) return -0.5;
      return 0.0;
    case BaseLoss::Logistic:
      // -sigmoid(-z), computed from the bounded tail.
      return z >= 0.0 ? -std::exp(-z) / (1.0 + std::exp(-z))
                      : -1.0 / (1.0 + std::exp(z));
  }
  return 0.0;
}

Assembly parse_assembly(const std::string& name) {
  if (name == "naive") return Assembly::Naive;
  if (name == "ncws") return Assembly::Ncws;
  if (name == "cpu") return Assembly::Cpu;
  if (name == "pconf") return Assembly::PConf;
  if (name == "svmp") return Assembly::WeightedPenalty;
  throw std::invalid_argument("unknown risk assembly: " + name);
}

const char* assembly_name(Assembly assembly) {
  switch (assembly) {
    case Assembly::Naive: return "naive";
    case Assembly::Ncws: return "ncws";
    case Assembly::Cpu: return "cpu";
    case Assembly::PConf: return "pconf";
    case Assembly::WeightedPenalty: return "svmp";
  }
  return "?";
}

void RiskSpec::validate() const {
  if (assembly == Assembly::Cpu) {
    if (!prior) throw std::invalid_argument("cpu risk requires a class prior");
    if (!(*prior >= 0.0 && *prior <= 1.0))
      throw std::invalid_argument("class prior must lie in [0,1]");
  }
  if (assembly == Assembly::WeightedPenalty) {
    if (!penalty_ratio) throw std::invalid_argument("svmp risk requires a penalty ratio");
    if (!(*penalty_ratio > 0.0))
      throw std::invalid_argument("penalty ratio must be positive");
  }
}

namespace {

// Every assembly is a weighted sum of directed losses,
//   risk = sum_i a_i l(g_i) + b_i l(-g_i),
// with normalisers folded into the per-instance coefficients. Value and
// gradient share this builder so they cannot drift apart.
struct Coefficients {
  std::vector<double> a;  // multiplies l(g)
  std::vector<double> b;  // multiplies l(-g)
};

std::vector<std::size_t> full_range(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

double checked_negativity(const RiskAux& aux, std::size_t i) {
  if (i >= aux.negativity.size() || !std::isfinite(aux.negativity[i]) ||
      !(aux.negativity[i] > 0.0 && aux.negativity[i] < 1.0))
    throw std::invalid_argument("missing or invalid negativity for unlabelled instance");
  return aux.negativity[i];
}

double checked_confidence(const RiskAux& aux, std::size_t i) {
  if (i >= aux.confidence.size() || !std::isfinite(aux.confidence[i]) ||
      !(aux.confidence[i] > 0.0 && aux.confidence[i] < 1.0))
    throw std::invalid_argument("missing or invalid confidence for positive instance");
  return aux.confidence[i];
}

Coefficients build_coefficients(const RiskSpec& spec,
                                std::span<const LabelState> labels,
                                const RiskAux& aux,
                                std::span<const std::size_t> subset) {
  spec.validate();
  const std::size_t m = subset.size();
  if (m == 0) throw std::invalid_argument("risk over an empty instance set");

  std::size_t n_pos = 0;
  for (std::size_t i : subset)
    if (labels[i] == LabelState::Positive) ++n_pos;
  const std::size_t n_unl = m - n_pos;

  Coefficients c;
  c.a.assign(m, 0.0);
  c.b.assign(m, 0.0);
  const double inv_n = 1.0 / static_cast<double>(m);

  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = subset[k];
    const bool pos = labels[i] == LabelState::Positive;
    switch (spec.assembly) {
      case Assembly::Naive:
        (pos ? c.a[k] : c.b[k]) = inv_n;
        break;
      case Assembly::Ncws:
        if (pos) {
          c.a[k] = inv_n;
        } else {
          const double n = checked_negativity(aux, i);
          c.a[k] = ((1.0 - n) / n) * inv_n;
          c.b[k] = inv_n;
        }
        break;
      case Assembly::Cpu:
        if (pos) {
          const double w = *spec.prior / static_cast<double>(n_pos);
          c.a[k] = w;
          c.b[k] = -w;
        } else {
          c.b[k] = 1.0 / static_cast<double>(n_unl);
        }
        break;
      case Assembly::PConf:
        if (pos) {
          const double r = checked_confidence(aux, i);
          c.a[k] = 1.0 / static_cast<double>(n_pos);
          c.b[k] = ((1.0 - r) / r) / static_cast<double>(n_pos);
        }
        break;
      case Assembly::WeightedPenalty:
        if (pos)
          c.a[k] = *spec.penalty_ratio * inv_n;
        else
          c.b[k] = inv_n;
        break;
    }
  }
  return c;
}

double value_from_coefficients(const Coefficients& c, std::span<const double> scores,
                               std::span<const std::size_t> subset, BaseLoss base) {
  std::vector<double> terms(subset.size());
  for (std::size_t k = 0; k < subset.size(); ++k) {
    const double g = scores[subset[k]];
    double t = 0.0;
    if (c.a[k] != 0.0) t += c.a[k] * eval_loss(base, g);
    if (c.b[k] != 0.0) t += c.b[k] * eval_loss(base, -g);
    terms[k] = t;
  }
  return pairwise_sum(terms);
}

}  // namespace

double risk_naive(std::span<const double> scores, std::span<const LabelState> labels,
                  BaseLoss base) {
  if (scores.empty() || scores.size() != labels.size())
    throw std::invalid_argument("risk_naive: empty or mismatched inputs");
  RiskSpec spec{Assembly::Naive, base, {}, {}};
  return risk_value(spec, scores, labels, {});
}

double risk_ncws(std::span<const double> scores, std::span<const LabelState> labels,
                 std::span<const double> negativity, BaseLoss base) {
  if (scores.empty() || scores.size() != labels.size())
    throw std::invalid_argument("risk_ncws: empty or mismatched inputs");
  RiskSpec spec{Assembly::Ncws, base, {}, {}};
  RiskAux aux;
  aux.negativity.assign(negativity.begin(), negativity.end());
  return risk_value(spec, scores, labels, aux);
}

double risk_cpu(std::span<const double> scores, std::span<const LabelState> labels,
                double pi_plus, BaseLoss base) {
  if (scores.empty() || scores.size() != labels.size())
    throw std::invalid_argument("risk_cpu: empty or mismatched inputs");
  std::size_t n_pos = 0;
  for (LabelState s : labels)
    if (s == LabelState::Positive) ++n_pos;
  if (n_pos == 0 || n_pos == labels.size())
    throw std::invalid_argument("risk_cpu: needs at least one positive and one unlabelled");
  RiskSpec spec{Assembly::Cpu, base, pi_plus, {}};
  return risk_value(spec, scores, labels, {});
}

double risk_pconf(std::span<const double> scores, std::span<const LabelState> labels,
                  std::span<const double> confidence, BaseLoss base) {
  if (scores.empty() || scores.size() != labels.size())
    throw std::invalid_argument("risk_pconf: empty or mismatched inputs");
  bool any_pos = false;
  for (LabelState s : labels) any_pos |= s == LabelState::Positive;
  if (!any_pos) throw std::invalid_argument("risk_pconf: empty positive set");
  RiskSpec spec{Assembly::PConf, base, {}, {}};
  RiskAux aux;
  aux.confidence.assign(confidence.begin(), confidence.end());
  return risk_value(spec, scores, labels, aux);
}

double risk_weighted_penalty(std::span<const double> scores,
                             std::span<const LabelState> labels, double penalty_ratio,
                             BaseLoss base) {
  if (scores.empty() || scores.size() != labels.size())
    throw std::invalid_argument("risk_weighted_penalty: empty or mismatched inputs");
  RiskSpec spec{Assembly::WeightedPenalty, base, {}, penalty_ratio};
  return risk_value(spec, scores, labels, {});
}

double risk_value(const RiskSpec& spec, std::span<const double> scores,
                  std::span<const LabelState> labels, const RiskAux& aux) {
  const auto idx = full_range(scores.size());
  return risk_value_subset(spec, scores, labels, aux, idx);
}

double risk_value_subset(const RiskSpec& spec, std::span<const double> scores,
                         std::span<const LabelState> labels, const RiskAux& aux,
                         std::span<const std::size_t> subset) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("risk_value: scores/labels length mismatch");
  const Coefficients c = build_coefficients(spec, labels, aux, subset);
  return value_from_coefficients(c, scores, subset, spec.base);
}

std::vector<double> risk_gradient(const RiskSpec& spec, const LinearModel& model,
                                  const Matrix& features,
                                  std::span<const LabelState> labels,
                                  const RiskAux& aux) {
  const auto idx = full_range(features.rows);
  return risk_gradient_subset(spec, model, features, labels, aux, idx);
}

std::vector<double> risk_gradient_subset(const RiskSpec& spec, const LinearModel& model,
                                         const Matrix& features,
                                         std::span<const LabelState> labels,
                                         const RiskAux& aux,
                                         std::span<const std::size_t> subset) {
  if (features.rows != labels.size())
    throw std::invalid_argument("risk_gradient: features/labels length mismatch");
  if (features.cols != model.feature_dim())
    throw std::invalid_argument("risk_gradient: feature dimension mismatch");

  const Coefficients c = build_coefficients(spec, labels, aux, subset);
  const std::size_t d = features.cols;
  std::vector<double> grad(d + 1, 0.0);

  for (std::size_t k = 0; k < subset.size(); ++k) {
    const std::size_t i = subset[k];
    const auto x = features.row(i);
    const double g = model.score(x);
    // d/dg [ a l(g) + b l(-g) ] = a l'(g) - b l'(-g)
    double dg = 0.0;
    if (c.a[k] != 0.0) dg += c.a[k] * loss_derivative(spec.base, g);
    if (c.b[k] != 0.0) dg -= c.b[k] * loss_derivative(spec.base, -g);
    if (dg == 0.0) continue;
    for (std::size_t j = 0; j < d; ++j) grad[j] += dg * x[j];
    grad[d] += dg;
  }
  return grad;
}

}  // namespace pucorrect
