#pragma once

#include <functional>
#include <string>

#include "pucorrect/core_data.hpp"

namespace pucorrect {

/// Probability that an unlabelled instance belongs to the latent negative
/// class, clamped to [epsilon, 1-epsilon] so the (1-n)/n risk weight stays
/// finite.
struct NegativityScore {
  double value = 0.5;
};

/// Probability that an instance is positive (the r(x) consumed by the
/// positive-confidence risk), clamped to [epsilon, 1-epsilon].
struct ConfidenceScore {
  double value = 0.5;
};

/// Age-based negativity: clamp(log(age+1) / log(max_age+2), eps, 1-eps).
/// Monotone non-decreasing in age for a fixed max age and invariant to the
/// logarithm base. Throws if age_days > max_age_days or epsilon is outside
/// (0, 0.5).
NegativityScore negativity_age(int age_days, int max_age_days, double epsilon);

/// The factor (1-n)/n that reweights the positive-direction loss of an
/// unlabelled instance. Strictly decreasing in n; clamping bounds it by
/// (1-eps)/eps.
double negativity_weight(NegativityScore n);

/// Default positive confidence for an instance with negativity n:
/// clamp(1-n, eps, 1-eps).
ConfidenceScore positivity_default(NegativityScore n, double epsilon = 1e-3);

constexpr double kDefaultEpsilon = 1e-3;

/// Per-record negativity source. Any map into (0,1) may stand in for the age
/// rule, so the pipeline takes a function rather than hard-wiring ages.
using NegativityFn = std::function<NegativityScore(const ReviewRecord&)>;

/// Builds a negativity source from its CLI spelling:
///   "age"           log-age rule over [0, max_age_days]; older inference
///                   ages clamp to 1-eps rather than erroring
///   "constant:<v>"  the same clamped score for every record
///   "file:<path>"   per-id scores from a CSV of id,score rows
/// Throws on an unknown spec, an unreadable file, or (at call time) a record
/// id missing from the file.
NegativityFn make_negativity_fn(const std::string& spec, int max_age_days,
                                double epsilon);

}  // namespace pucorrect
