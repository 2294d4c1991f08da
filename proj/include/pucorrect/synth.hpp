#pragma once

#include <random>
#include <string>
#include <vector>

#include "pucorrect/core_data.hpp"
#include "pucorrect/losses.hpp"
#include "pucorrect/model.hpp"

namespace pucorrect {

/// How quickly a truly-positive instance acquires its observed label as it
/// ages. All variants map age to a non-decreasing probability in [0, 1].
struct Exposure {
  enum class Kind { Linear, Logistic, Step };
  Kind kind = Kind::Linear;
  double step_age = 0.0;  // Step only

  double operator()(int age_days, int max_age_days) const;
};

/// "linear" | "logistic" | "step:<a0>"
Exposure parse_exposure(const std::string& spec);
std::string exposure_name(const Exposure& exposure);

struct SynthConfig {
  int n_instances = 20000;
  double positive_fraction = 0.45;
  int max_age_days = 1000;
  Exposure exposure;
  double feature_noise = 1.0;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SynthResult {
  Dataset dataset;              // observed PU labels
  std::vector<int> true_labels; // hidden truth, +1 / -1, aligned with records
};

/// Draws true labels from positive_fraction and class-conditional latent
/// coordinates from two Gaussian clusters, renders them into review records
/// (length, sentences, word choice, rating all carry the class signal), and
/// censors the labels: an instance is observed Positive iff it is truly
/// positive AND a Bernoulli(exposure(age)) succeeds. Ages are uniform on
/// [0, max_age_days], independent of the true class.
SynthResult generate(const SynthConfig& config);

void write_jsonl(const std::vector<ReviewRecord>& records, const std::string& path);
void write_truth_csv(const SynthResult& result, const std::string& path);

/// Reads an id,true_label sidecar and aligns it to the given records.
/// Throws if a record id has no truth row.
std::vector<int> load_truth_csv(const std::string& path,
                                const std::vector<ReviewRecord>& records);

/// Finite ground-truth joint p(x, y) for the brute-force oracle, stored as
/// the joint masses p(x_i, +1) and p(x_i, -1) over a small support.
struct DiscreteDistribution {
  Matrix support;              // one feature point per row
  std::vector<double> p_pos;   // p(x_i, y=+1)
  std::vector<double> p_neg;   // p(x_i, y=-1)

  std::size_t size() const { return p_pos.size(); }
  double p_x(std::size_t i) const { return p_pos[i] + p_neg[i]; }
  double prior_pos() const;
  double prior_neg() const;
  /// Exact negativity n(x_i) = p(y=-1 | x_i).
  double posterior_neg(std::size_t i) const { return p_neg[i] / p_x(i); }

  /// Masses sum to one and every point keeps both classes alive, so the
  /// posterior division is defined everywhere. Throws otherwise.
  void validate() const;
};

enum class RiskForm {
  PriorWeighted,      // pi+ E+[l(g)] + pi- E-[l(-g)]
  NegativityWeighted  // pi- E-[((1-n)/n) l(g) + l(-g)], n exact
};

/// Exact risk by enumeration over the support. The two forms are
/// algebraically identical when n is the exact posterior.
double exact_risk(const DiscreteDistribution& dist, const LinearModel& model,
                  RiskForm form, BaseLoss base);

/// NegativityWeighted form with n clamped to [epsilon, 1-epsilon] first;
/// quantifies the bias the clamp introduces.
double exact_risk_clamped(const DiscreteDistribution& dist, const LinearModel& model,
                          BaseLoss base, double epsilon);

struct IdentityReport {
  double max_risk_diff = 0.0;       // max |prior-form - negativity-form|
  double max_pointwise_diff = 0.0;  // max |pi+ p(x|+) - pi- p(x|-)(1-n)/n|
};

IdentityReport verify_identity(const DiscreteDistribution& dist,
                               std::span<const LinearModel> models, BaseLoss base);

/// +1 iff p(y=+1 | x) > 0.5, ties negative.
std::vector<int> bayes_labels(const DiscreteDistribution& dist);

/// Random small distributions/models for oracle sweeps. Joint masses are
/// bounded away from zero so every posterior stays inside (0, 1).
DiscreteDistribution random_distribution(std::mt19937_64& rng, std::size_t max_support = 64,
                                         std::size_t dim = 2);
LinearModel random_model(std::mt19937_64& rng, std::size_t dim);

}  // namespace pucorrect
