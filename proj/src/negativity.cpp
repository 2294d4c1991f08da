#include "pucorrect/negativity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace pucorrect {

namespace {

double clamp_score(double v, double epsilon) {
  return std::clamp(v, epsilon, 1.0 - epsilon);
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw std::invalid_argument("epsilon must lie in (0, 0.5)");
}

}  // namespace

NegativityScore negativity_age(int age_days, int max_age_days, double epsilon) {
  check_epsilon(epsilon);
  if (age_days < 0) throw std::invalid_argument("age_days must be >= 0");
  if (age_days > max_age_days)
    throw std::invalid_argument("age_days exceeds max_age_days");
  const double raw =
      std::log(static_cast<double>(age_days) + 1.0) /
      std::log(static_cast<double>(max_age_days) + 2.0);
  return {clamp_score(raw, epsilon)};
}

double negativity_weight(NegativityScore n) { return (1.0 - n.value) / n.value; }

ConfidenceScore positivity_default(NegativityScore n, double epsilon) {
  check_epsilon(epsilon);
  return {clamp_score(1.0 - n.value, epsilon)};
}

NegativityFn make_negativity_fn(const std::string& spec, int max_age_days,
                                double epsilon) {
  check_epsilon(epsilon);

  if (spec == "age") {
    return [max_age_days, epsilon](const ReviewRecord& rec) {
      // Inference-time records older than the training max clamp to the top
      // of the score range instead of erroring.
      const int age = std::min(rec.age_days, max_age_days);
      return negativity_age(age, max_age_days, epsilon);
    };
  }

  if (spec.rfind("constant:", 0) == 0) {
    double v = 0.0;
    try {
      v = std::stod(spec.substr(9));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad negativity constant: " + spec);
    }
    const double clamped = clamp_score(v, epsilon);
    return [clamped](const ReviewRecord&) { return NegativityScore{clamped}; };
  }

  if (spec.rfind("file:", 0) == 0) {
    const std::string path = spec.substr(5);
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open negativity file: " + path);
    auto table = std::make_shared<std::unordered_map<std::string, double>>();
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const std::size_t comma = line.find(',');
      if (comma == std::string::npos)
        throw std::runtime_error("bad negativity file row: " + line);
      std::string id = line.substr(0, comma);
      if (id == "id") continue;  // optional header
      double v = 0.0;
      try {
        v = std::stod(line.substr(comma + 1));
      } catch (const std::exception&) {
        throw std::runtime_error("bad negativity score in row: " + line);
      }
      (*table)[std::move(id)] = clamp_score(v, epsilon);
    }
    return [table](const ReviewRecord& rec) {
      auto it = table->find(rec.id);
      if (it == table->end())
        throw std::runtime_error("no negativity score for id: " + rec.id);
      return NegativityScore{it->second};
    };
  }

  throw std::invalid_argument("unknown negativity spec: " + spec);
}

}  // namespace pucorrect
