#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "pucorrect/losses.hpp"

using namespace pucorrect;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::vector<LabelState> labels_from(const std::vector<int>& pos_mask) {
  std::vector<LabelState> out;
  for (int p : pos_mask)
    out.push_back(p ? LabelState::Positive : LabelState::Unlabelled);
  return out;
}

struct RandomProblem {
  Matrix features;
  std::vector<LabelState> labels;
  RiskAux aux;
};

RandomProblem random_problem(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::uniform_real_distribution<double> score(0.05, 0.95);
  std::bernoulli_distribution is_pos(0.5);

  RandomProblem p;
  p.features = Matrix(n, d);
  bool have_pos = false, have_unl = false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) p.features.at(i, j) = coord(rng);
    const bool pos = i == 0 ? true : (i == 1 ? false : is_pos(rng));
    p.labels.push_back(pos ? LabelState::Positive : LabelState::Unlabelled);
    have_pos |= pos;
    have_unl |= !pos;
    p.aux.negativity.push_back(score(rng));
    p.aux.confidence.push_back(score(rng));
  }
  (void)have_pos;
  (void)have_unl;
  return p;
}

std::vector<RiskSpec> all_specs(BaseLoss base) {
  return {
      {Assembly::Naive, base, {}, {}},
      {Assembly::Ncws, base, {}, {}},
      {Assembly::Cpu, base, 0.35, {}},
      {Assembly::PConf, base, {}, {}},
      {Assembly::WeightedPenalty, base, {}, 2.5},
  };
}

double risk_of_model(const RiskSpec& spec, const LinearModel& model,
                     const RandomProblem& p) {
  const std::vector<double> scores = predict_scores(model, p.features);
  return risk_value(spec, scores, p.labels, p.aux);
}

}  // namespace

TEST_CASE("base loss values") {
  CHECK(eval_loss(BaseLoss::Hinge, 0.0) == doctest::Approx(1.0));
  CHECK(eval_loss(BaseLoss::Hinge, 1.0) == doctest::Approx(0.0));
  CHECK(eval_loss(BaseLoss::Hinge, -1.0) == doctest::Approx(2.0));

  CHECK(eval_loss(BaseLoss::DoubleHinge, 0.0) == doctest::Approx(0.5));
  CHECK(eval_loss(BaseLoss::DoubleHinge, 1.0) == doctest::Approx(0.0));
  CHECK(eval_loss(BaseLoss::DoubleHinge, -1.0) == doctest::Approx(1.0));

  CHECK(eval_loss(BaseLoss::Logistic, 0.0) ==
        doctest::Approx(0.6931471805599453).epsilon(1e-12));
}

TEST_CASE("logistic loss is overflow-safe") {
  CHECK(std::isfinite(eval_loss(BaseLoss::Logistic, -1000.0)));
  CHECK(eval_loss(BaseLoss::Logistic, -1000.0) == doctest::Approx(1000.0));
  CHECK(eval_loss(BaseLoss::Logistic, 1000.0) == doctest::Approx(0.0));
  CHECK(std::isfinite(loss_derivative(BaseLoss::Logistic, -1000.0)));
}

TEST_CASE("subgradient conventions at the kinks") {
  CHECK(loss_derivative(BaseLoss::Hinge, 1.0) == 0.0);
  CHECK(loss_derivative(BaseLoss::Hinge, 0.999) == -1.0);
  CHECK(loss_derivative(BaseLoss::DoubleHinge, -1.0) == -0.5);
  CHECK(loss_derivative(BaseLoss::DoubleHinge, 1.0) == 0.0);
  CHECK(loss_derivative(BaseLoss::DoubleHinge, -1.5) == -1.0);
  CHECK(loss_derivative(BaseLoss::Logistic, 0.0) == doctest::Approx(-0.5));
}

TEST_CASE("double hinge composite is affine: l(z) - l(-z) = -z") {
  for (double z : {-3.0, -1.0, -0.25, 0.0, 0.5, 1.0, 4.0}) {
    CHECK(eval_loss(BaseLoss::DoubleHinge, z) - eval_loss(BaseLoss::DoubleHinge, -z) ==
          doctest::Approx(-z).epsilon(1e-12));
    CHECK(eval_loss(BaseLoss::Logistic, z) - eval_loss(BaseLoss::Logistic, -z) ==
          doctest::Approx(-z).epsilon(1e-12));
  }
}

TEST_CASE("naive risk treats unlabelled as negative") {
  const std::vector<double> one{1.0};
  CHECK(risk_naive(one, labels_from({1}), BaseLoss::Hinge) == doctest::Approx(0.0));

  const std::vector<double> two{0.0, 0.0};
  CHECK(risk_naive(two, labels_from({1, 0}), BaseLoss::Hinge) == doctest::Approx(1.0));

  CHECK(risk_naive(one, labels_from({0}), BaseLoss::Hinge) == doctest::Approx(2.0));
  CHECK_THROWS(risk_naive({}, {}, BaseLoss::Hinge));
}

TEST_CASE("negativity-weighted risk") {
  const std::vector<double> zero{0.0};
  const std::vector<double> n_half{0.5};
  CHECK(risk_ncws(zero, labels_from({0}), n_half, BaseLoss::Hinge) ==
        doctest::Approx(2.0));

  CHECK(risk_ncws(zero, labels_from({1}), std::vector<double>{kNan},
                  BaseLoss::Hinge) == doctest::Approx(1.0));

  const std::vector<double> neg_one{-1.0};
  const std::vector<double> n_high{0.999};
  CHECK(risk_ncws(neg_one, labels_from({0}), n_high, BaseLoss::Hinge) ==
        doctest::Approx(0.0020020020020020037).epsilon(1e-12));

  // An unlabelled instance without a usable negativity is an error.
  CHECK_THROWS(risk_ncws(zero, labels_from({0}), std::vector<double>{kNan},
                         BaseLoss::Hinge));
  CHECK_THROWS(risk_ncws(zero, labels_from({0}), std::vector<double>{},
                         BaseLoss::Hinge));
}

TEST_CASE("composite positive-unlabelled risk") {
  const std::vector<double> zeros{0.0, 0.0};
  CHECK(risk_cpu(zeros, labels_from({1, 0}), 0.5, BaseLoss::Hinge) ==
        doctest::Approx(1.0));

  const std::vector<double> correct{1.0, -1.0};
  CHECK(risk_cpu(correct, labels_from({1, 0}), 0.5, BaseLoss::Hinge) ==
        doctest::Approx(-1.0));

  // Degenerate prior collapses to the unlabelled mean.
  const std::vector<double> mixed{0.3, -0.2, 0.8};
  const auto labels = labels_from({1, 0, 0});
  const double expect =
      0.5 * (eval_loss(BaseLoss::Hinge, 0.2) + eval_loss(BaseLoss::Hinge, -0.8));
  CHECK(risk_cpu(mixed, labels, 0.0, BaseLoss::Hinge) == doctest::Approx(expect));

  CHECK_THROWS(risk_cpu(zeros, labels_from({1, 1}), 0.5, BaseLoss::Hinge));
  CHECK_THROWS(risk_cpu(zeros, labels_from({0, 0}), 0.5, BaseLoss::Hinge));
}

TEST_CASE("positive-confidence risk ignores unlabelled instances") {
  const std::vector<double> zero{0.0};
  const std::vector<double> r_half{0.5};
  CHECK(risk_pconf(zero, labels_from({1}), r_half, BaseLoss::Hinge) ==
        doctest::Approx(2.0));

  const std::vector<double> one{1.0};
  const std::vector<double> r_high{0.999};
  CHECK(risk_pconf(one, labels_from({1}), r_high, BaseLoss::Hinge) ==
        doctest::Approx(0.0).epsilon(1e-2));

  const std::vector<double> with_unl{1.0, -3.0, 7.0};
  const std::vector<double> conf{0.7, kNan, kNan};
  const std::vector<double> alone{1.0};
  const std::vector<double> conf_alone{0.7};
  CHECK(risk_pconf(with_unl, labels_from({1, 0, 0}), conf, BaseLoss::Hinge) ==
        risk_pconf(alone, labels_from({1}), conf_alone, BaseLoss::Hinge));

  CHECK_THROWS(risk_pconf(zero, labels_from({0}), r_half, BaseLoss::Hinge));
}

TEST_CASE("weighted penalty risk") {
  const std::vector<double> zeros{0.0, 0.0, 0.0, 0.0, 0.0};
  const auto labels = labels_from({1, 0, 0, 0, 0});
  CHECK(risk_weighted_penalty(zeros, labels, 4.0, BaseLoss::Hinge) ==
        doctest::Approx(1.6));

  // ratio 1 reduces to the naive risk
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> score(-2.0, 2.0);
  std::vector<double> scores(5);
  for (double& s : scores) s = score(rng);
  CHECK(risk_weighted_penalty(scores, labels, 1.0, BaseLoss::Hinge) ==
        doctest::Approx(risk_naive(scores, labels, BaseLoss::Hinge)).epsilon(1e-15));

  const std::vector<double> all_correct{1.0, -1.0, -1.0, -1.0, -1.0};
  CHECK(risk_weighted_penalty(all_correct, labels, 4.0, BaseLoss::Hinge) ==
        doctest::Approx(0.0));

  CHECK_THROWS(risk_weighted_penalty(zeros, labels, 0.0, BaseLoss::Hinge));
  CHECK_THROWS(risk_weighted_penalty(zeros, labels, -1.0, BaseLoss::Hinge));
}

TEST_CASE("gradient hand cases") {
  Matrix x(1, 2);
  x.at(0, 0) = 1.0;
  x.at(0, 1) = 0.0;
  LinearModel zero_model;
  zero_model.weights = {0.0, 0.0};

  const RiskSpec naive{Assembly::Naive, BaseLoss::Hinge, {}, {}};
  const auto grad = risk_gradient(naive, zero_model, x, labels_from({1}), {});
  REQUIRE(grad.size() == 3);
  CHECK(grad[0] == doctest::Approx(-1.0));
  CHECK(grad[1] == doctest::Approx(0.0));
  CHECK(grad[2] == doctest::Approx(-1.0));

  // All margins beyond the hinge's flat region: zero vector.
  Matrix x2(2, 2);
  x2.at(0, 0) = 1.0;
  x2.at(1, 0) = -1.0;
  LinearModel wide;
  wide.weights = {10.0, 0.0};
  const auto flat = risk_gradient(naive, wide, x2, labels_from({1, 0}), {});
  CHECK(flat[0] == 0.0);
  CHECK(flat[1] == 0.0);
  CHECK(flat[2] == 0.0);
  const RiskSpec penal{Assembly::WeightedPenalty, BaseLoss::Hinge, {}, 3.0};
  const auto flat2 = risk_gradient(penal, wide, x2, labels_from({1, 0}), {});
  CHECK(flat2[0] == 0.0);
  CHECK(flat2[2] == 0.0);

  const RiskSpec logistic{Assembly::Naive, BaseLoss::Logistic, {}, {}};
  const auto lg = risk_gradient(logistic, zero_model, x, labels_from({1}), {});
  CHECK(lg[0] == doctest::Approx(-0.5));
  CHECK(lg[2] == doctest::Approx(-0.5));

  CHECK_THROWS(risk_gradient(naive, wide, x, labels_from({1, 0}), {}));
}

TEST_CASE("analytic gradients match central finite differences at smooth points") {
  std::mt19937_64 rng(20240915);
  std::uniform_real_distribution<double> wdist(-1.5, 1.5);
  const double h = 1e-5;

  for (BaseLoss base : {BaseLoss::Hinge, BaseLoss::DoubleHinge, BaseLoss::Logistic}) {
    for (const RiskSpec& spec : all_specs(base)) {
      int checked = 0;
      while (checked < 20) {
        RandomProblem p = random_problem(rng, 12, 3);
        LinearModel model;
        model.weights = {wdist(rng), wdist(rng), wdist(rng)};
        model.bias = wdist(rng);

        // Stay away from the kinks so the objective is differentiable.
        bool smooth = true;
        for (std::size_t i = 0; i < p.features.rows; ++i) {
          const double g = model.score(p.features.row(i));
          if (std::abs(std::abs(g) - 1.0) < 1e-3) smooth = false;
        }
        if (!smooth) continue;
        ++checked;

        const auto analytic = risk_gradient(spec, model, p.features, p.labels, p.aux);
        for (std::size_t j = 0; j < analytic.size(); ++j) {
          LinearModel lo = model, hi = model;
          if (j < model.weights.size()) {
            lo.weights[j] -= h;
            hi.weights[j] += h;
          } else {
            lo.bias -= h;
            hi.bias += h;
          }
          const double fd = (risk_of_model(spec, hi, p) - risk_of_model(spec, lo, p)) /
                            (2.0 * h);
          const double denom = std::max({1.0, std::abs(fd), std::abs(analytic[j])});
          CHECK(std::abs(analytic[j] - fd) / denom < 1e-4);
        }
      }
    }
  }
}

TEST_CASE("scaling the ncws class weights rescales values without moving minimisers") {
  std::mt19937_64 rng(77);
  RandomProblem p = random_problem(rng, 30, 3);
  const RiskSpec spec{Assembly::Ncws, BaseLoss::Hinge, {}, {}};

  std::uniform_real_distribution<double> wdist(-2.0, 2.0);
  std::vector<double> values;
  for (int m = 0; m < 25; ++m) {
    LinearModel model;
    model.weights = {wdist(rng), wdist(rng), wdist(rng)};
    model.bias = wdist(rng);
    values.push_back(risk_of_model(spec, model, p));
  }
  const auto argmin = std::min_element(values.begin(), values.end()) - values.begin();
  for (double c : {0.1, 3.0, 42.0}) {
    std::vector<double> scaled;
    for (double v : values) scaled.push_back(c * v);
    const auto argmin_scaled =
        std::min_element(scaled.begin(), scaled.end()) - scaled.begin();
    CHECK(argmin_scaled == argmin);
  }
}

TEST_CASE("ncws with all n = 1/2 reduces to naive plus the unlabelled positive-direction mass") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> sdist(-2.0, 2.0);
  const std::size_t n = 40;
  std::vector<double> scores(n);
  for (double& s : scores) s = sdist(rng);
  std::vector<LabelState> labels;
  std::vector<double> neg(n, 0.5);
  for (std::size_t i = 0; i < n; ++i)
    labels.push_back(i % 3 == 0 ? LabelState::Positive : LabelState::Unlabelled);

  for (BaseLoss base : {BaseLoss::Hinge, BaseLoss::DoubleHinge, BaseLoss::Logistic}) {
    const double ncws = risk_ncws(scores, labels, neg, base);
    double unl_pos_mass = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (labels[i] == LabelState::Unlabelled) unl_pos_mass += eval_loss(base, scores[i]);
    const double expect = risk_naive(scores, labels, base) + unl_pos_mass / n;
    CHECK(ncws == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("midpoint convexity holds along random parameter segments") {
  // The composite assembly is probed only with the bases whose composite
  // l(z) - l(-z) is affine (double hinge, logistic); with the plain hinge it
  // is genuinely non-convex, which is why the double hinge exists.
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> wdist(-2.0, 2.0);

  for (BaseLoss base : {BaseLoss::Hinge, BaseLoss::DoubleHinge, BaseLoss::Logistic}) {
    for (const RiskSpec& spec : all_specs(base)) {
      if (spec.assembly == Assembly::Cpu && base == BaseLoss::Hinge) continue;
      RandomProblem p = random_problem(rng, 20, 3);
      for (int trial = 0; trial < 20; ++trial) {
        LinearModel a, b, mid;
        a.weights = {wdist(rng), wdist(rng), wdist(rng)};
        a.bias = wdist(rng);
        b.weights = {wdist(rng), wdist(rng), wdist(rng)};
        b.bias = wdist(rng);
        mid.weights.resize(3);
        for (int j = 0; j < 3; ++j) mid.weights[j] = 0.5 * (a.weights[j] + b.weights[j]);
        mid.bias = 0.5 * (a.bias + b.bias);
        const double fa = risk_of_model(spec, a, p);
        const double fb = risk_of_model(spec, b, p);
        const double fm = risk_of_model(spec, mid, p);
        CHECK(fm <= 0.5 * (fa + fb) + 1e-9);
      }
    }
  }
}

TEST_CASE("spec validation") {
  RiskSpec cpu{Assembly::Cpu, BaseLoss::Hinge, {}, {}};
  CHECK_THROWS(cpu.validate());
  cpu.prior = 0.4;
  CHECK_NOTHROW(cpu.validate());
  RiskSpec penal{Assembly::WeightedPenalty, BaseLoss::Hinge, {}, {}};
  CHECK_THROWS(penal.validate());
  penal.penalty_ratio = -2.0;
  CHECK_THROWS(penal.validate());
  CHECK(parse_assembly("svmp") == Assembly::WeightedPenalty);
  CHECK(parse_loss("double-hinge") == BaseLoss::DoubleHinge);
  CHECK_THROWS(parse_loss("l2"));
  CHECK_THROWS(parse_assembly("bogus"));
}
