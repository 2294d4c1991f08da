#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pucorrect/core_data.hpp"
#include "pucorrect/model.hpp"

namespace pucorrect {

/// Convex, non-increasing margin losses. DoubleHinge is
/// max(-z, max(0, 1/2 - z/2)); its composite l(z) - l(-z) is exactly -z,
/// which is what the composite-risk assembly relies on.
enum class BaseLoss { Hinge, DoubleHinge, Logistic };

BaseLoss parse_loss(const std::string& name);
const char* loss_name(BaseLoss base);

double eval_loss(BaseLoss base, double z);

/// Subgradient in z. Conventions at the kinks: hinge takes 0 at z = 1;
/// double hinge takes the flatter side at both kinks (-1/2 at z = -1,
/// 0 at z = 1). A fixed convention keeps training deterministic.
double loss_derivative(BaseLoss base, double z);

/// The five per-dataset empirical risk assemblies.
enum class Assembly { Naive, Ncws, Cpu, PConf, WeightedPenalty };

Assembly parse_assembly(const std::string& name);
const char* assembly_name(Assembly assembly);

struct RiskSpec {
  Assembly assembly = Assembly::Naive;
  BaseLoss base = BaseLoss::Hinge;
  std::optional<double> prior;          // pi_plus, Cpu only
  std::optional<double> penalty_ratio;  // WeightedPenalty only

  void validate() const;
};

/// Per-instance auxiliary inputs, aligned with the instance vectors.
/// negativity is consulted at unlabelled positions (Ncws), confidence at
/// positive positions (PConf); unused entries may be NaN.
struct RiskAux {
  std::vector<double> negativity;
  std::vector<double> confidence;
};

/// Treat every unlabelled instance as negative: mean of l(y g(x)).
double risk_naive(std::span<const double> scores, std::span<const LabelState> labels,
                  BaseLoss base);

/// Negativity-weighted risk:
///   [ sum_pos l(g) + sum_unl ((1-n)/n) l(g) + l(-g) ] / N.
/// The division by N is a normalisation convention; it rescales the
/// objective without moving its minimisers.
double risk_ncws(std::span<const double> scores, std::span<const LabelState> labels,
                 std::span<const double> negativity, BaseLoss base);

/// Composite positive-unlabelled risk:
///   pi+ mean_pos[ l(g) - l(-g) ] + mean_unl[ l(-g) ].
/// May be negative. pi_plus in [0,1] is accepted here so oracle tests can
/// probe the degenerate ends; production priors come from ClassPriors.
double risk_cpu(std::span<const double> scores, std::span<const LabelState> labels,
                double pi_plus, BaseLoss base);

/// Positive-confidence risk over the positively-labelled instances only:
///   mean_pos[ l(g) + ((1-r)/r) l(-g) ].
/// Unlabelled instances contribute nothing.
double risk_pconf(std::span<const double> scores, std::span<const LabelState> labels,
                  std::span<const double> confidence, BaseLoss base);

/// Class-weighted penalty risk:
///   [ sum_pos ratio * l(g) + sum_unl l(-g) ] / N.
double risk_weighted_penalty(std::span<const double> scores,
                             std::span<const LabelState> labels,
                             double penalty_ratio, BaseLoss base);

/// Dispatch on spec.assembly. aux must carry whatever the assembly consumes.
double risk_value(const RiskSpec& spec, std::span<const double> scores,
                  std::span<const LabelState> labels, const RiskAux& aux);

/// Analytic (sub)gradient of the assembled risk with respect to
/// (weights..., bias); the bias slot is last. Chain rule through
/// g(x) = w . x + b.
std::vector<double> risk_gradient(const RiskSpec& spec, const LinearModel& model,
                                  const Matrix& features,
                                  std::span<const LabelState> labels,
                                  const RiskAux& aux);

/// Subset variants used for mini-batch training: the subset is treated as
/// its own dataset (normalisers computed over the subset). A batch missing
/// one of Cpu's classes simply drops that class's term.
double risk_value_subset(const RiskSpec& spec, std::span<const double> scores,
                         std::span<const LabelState> labels, const RiskAux& aux,
                         std::span<const std::size_t> subset);
std::vector<double> risk_gradient_subset(const RiskSpec& spec, const LinearModel& model,
                                         const Matrix& features,
                                         std::span<const LabelState> labels,
                                         const RiskAux& aux,
                                         std::span<const std::size_t> subset);

}  // namespace pucorrect
