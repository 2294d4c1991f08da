#include "pucorrect/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "pucorrect/common.hpp"

namespace pucorrect {

double Exposure::operator()(int age_days, int max_age_days) const {
  if (max_age_days <= 0) return 1.0;
  const double a = static_cast<double>(age_days);
  const double m = static_cast<double>(max_age_days);
  switch (kind) {
    case Kind::Linear:
      return std::clamp(a / m, 0.0, 1.0);
    case Kind::Logistic:
      // Centred at half the age range, ~[0.018, 0.982] at the ends.
      return 1.0 / (1.0 + std::exp(-8.0 * (a / m - 0.5)));
    case Kind::Step:
      return a >= step_age ? 1.0 : 0.0;
  }
  return 1.0;
}

Exposure parse_exposure(const std::string& spec) {
  if (spec == "linear") return {Exposure::Kind::Linear, 0.0};
  if (spec == "logistic") return {Exposure::Kind::Logistic, 0.0};
  if (spec.rfind("step:", 0) == 0) {
    try {
      return {Exposure::Kind::Step, std::stod(spec.substr(5))};
    } catch (const std::exception&) {
      throw std::invalid_argument("bad step exposure: " + spec);
    }
  }
  throw std::invalid_argument("unknown exposure: " + spec);
}

std::string exposure_name(const Exposure& exposure) {
  switch (exposure.kind) {
    case Exposure::Kind::Linear: return "linear";
    case Exposure::Kind::Logistic: return "logistic";
    case Exposure::Kind::Step: return "step:" + std::to_string(exposure.step_age);
  }
  return "?";
}

void SynthConfig::validate() const {
  if (n_instances < 1) throw std::invalid_argument("synth: n_instances must be >= 1");
  if (!(positive_fraction > 0.0 && positive_fraction < 1.0))
    throw std::invalid_argument("synth: positive_fraction must lie in (0,1)");
  if (max_age_days < 0) throw std::invalid_argument("synth: max_age_days must be >= 0");
  if (feature_noise < 0.0) throw std::invalid_argument("synth: feature_noise must be >= 0");
}

namespace {

// Word pools for rendering latent coordinates into review text. The tinted
// pools separate the classes through term frequencies; suffixes feed the
// syntactic percentages.
const std::vector<std::string>& positive_words() {
  static const std::vector<std::string> words = {
      "excellent", "wonderful", "delightful", "superb",   "fantastic",
      "helpful",   "insightful", "detailed",  "thorough", "useful",
      "great",     "amazing",   "flawless",   "brilliant", "outstanding"};
  return words;
}

const std::vector<std::string>& negative_words() {
  static const std::vector<std::string> words = {
      "terrible", "awful",  "bland",  "boring", "useless",
      "mediocre", "broken", "noisy",  "dull",   "flimsy",
      "pointless", "sloppy", "cheap", "defective", "forgettable"};
  return words;
}

const std::vector<std::string>& neutral_words() {
  static const std::vector<std::string> words = {
      "the",   "a",     "this",  "item",  "product", "place", "service",
      "time",  "order", "price", "staff", "room",    "food",  "day",
      "week",  "thing", "bit",   "lot",   "visit",   "box"};
  return words;
}

const std::vector<std::string>& adverb_words() {
  static const std::vector<std::string> words = {
      "really", "quickly", "slowly", "barely", "mostly",
      "clearly", "honestly", "truly", "fairly", "simply"};
  return words;
}

const std::string& pick(const std::vector<std::string>& pool, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> d(0, pool.size() - 1);
  return pool[d(rng)];
}

std::string render_text(bool truly_positive, double u1, double u2,
                        std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Latent coordinate 1 drives length, coordinate 2 drives sentence count.
  int len = std::clamp(static_cast<int>(std::lround(26.0 + 9.0 * u1)), 3, 150);
  int sentences = std::clamp(static_cast<int>(std::lround(3.5 + 1.4 * u2)), 1, 15);
  sentences = std::min(sentences, len);

  const double question_prob = truly_positive ? 0.08 : 0.22;
  const auto& tinted = truly_positive ? positive_words() : negative_words();

  const int base = len / sentences;
  const int remainder = len % sentences;

  std::string text;
  for (int s = 0; s < sentences; ++s) {
    const int words = base + (s < remainder ? 1 : 0);
    for (int w = 0; w < words; ++w) {
      if (w > 0) text.push_back(' ');
      const double r = unit(rng);
      if (r < 0.25)
        text += pick(tinted, rng);
      else if (r < 0.40)
        text += pick(adverb_words(), rng);
      else
        text += pick(neutral_words(), rng);
    }
    text.push_back(unit(rng) < question_prob ? '?' : '.');
    if (s + 1 < sentences) text.push_back(' ');
  }
  return text;
}

}  // namespace

SynthResult generate(const SynthConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> age_dist(0, config.max_age_days);
  std::uniform_int_distribution<int> user_dist(0, 49);
  std::uniform_int_distribution<int> extra_votes(0, 3);

  SynthResult result;
  result.dataset.records.reserve(config.n_instances);
  result.dataset.labels.reserve(config.n_instances);
  result.true_labels.reserve(config.n_instances);

  for (int i = 0; i < config.n_instances; ++i) {
    const bool truly_positive = unit(rng) < config.positive_fraction;
    const double centre = truly_positive ? 1.0 : -1.0;
    const double u1 = centre + config.feature_noise * gauss(rng);
    const double u2 = centre + config.feature_noise * gauss(rng);
    const int age = age_dist(rng);
    const bool observed =
        truly_positive && unit(rng) < config.exposure(age, config.max_age_days);

    ReviewRecord rec;
    rec.id = "s" + std::to_string(i);
    rec.user_id = "u" + std::to_string(user_dist(rng));
    rec.text = render_text(truly_positive, u1, u2, rng);
    rec.rating = std::clamp(3.0 + 0.7 * u2 + 0.3 * gauss(rng), 1.0, 5.0);
    rec.age_days = age;
    rec.helpful_votes = observed ? 1 + extra_votes(rng) : 0;

    result.dataset.records.push_back(std::move(rec));
    result.dataset.labels.push_back(observed ? LabelState::Positive
                                             : LabelState::Unlabelled);
    result.true_labels.push_back(truly_positive ? +1 : -1);
  }
  result.dataset.recount();
  return result;
}

void write_jsonl(const std::vector<ReviewRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (const ReviewRecord& rec : records) {
    nlohmann::json j;
    j["id"] = rec.id;
    j["user_id"] = rec.user_id ? nlohmann::json(*rec.user_id) : nlohmann::json();
    j["text"] = rec.text;
    j["rating"] = rec.rating;
    j["age_days"] = rec.age_days;
    j["helpful_votes"] = rec.helpful_votes;
    out << j.dump() << '\n';
  }
}

void write_truth_csv(const SynthResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << "id,true_label\n";
  for (std::size_t i = 0; i < result.dataset.records.size(); ++i)
    out << result.dataset.records[i].id << ',' << result.true_labels[i] << '\n';
}

std::vector<int> load_truth_csv(const std::string& path,
                                const std::vector<ReviewRecord>& records) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open truth file: " + path);
  std::unordered_map<std::string, int> table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) continue;
    std::string id = line.substr(0, comma);
    if (id == "id") continue;
    const std::string value = line.substr(comma + 1);
    table[std::move(id)] = std::stoi(value);
  }
  std::vector<int> out;
  out.reserve(records.size());
  for (const ReviewRecord& rec : records) {
    auto it = table.find(rec.id);
    if (it == table.end())
      throw std::runtime_error("truth file misses id: " + rec.id);
    out.push_back(it->second >= 0 ? +1 : -1);
  }
  return out;
}

double DiscreteDistribution::prior_pos() const {
  return pairwise_sum(p_pos);
}

double DiscreteDistribution::prior_neg() const {
  return pairwise_sum(p_neg);
}

void DiscreteDistribution::validate() const {
  if (p_pos.empty() || p_pos.size() != p_neg.size() || support.rows != p_pos.size())
    throw std::invalid_argument("DiscreteDistribution: inconsistent sizes");
  double total = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!(p_pos[i] > 0.0) || !(p_neg[i] > 0.0))
      throw std::invalid_argument(
          "DiscreteDistribution: every support point needs mass in both classes");
    total += p_pos[i] + p_neg[i];
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("DiscreteDistribution: masses must sum to 1");
}

double exact_risk(const DiscreteDistribution& dist, const LinearModel& model,
                  RiskForm form, BaseLoss base) {
  dist.validate();
  if (dist.support.cols != model.feature_dim())
    throw std::invalid_argument("exact_risk: model dimension mismatch");

  std::vector<double> terms(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double g = model.score(dist.support.row(i));
    if (form == RiskForm::PriorWeighted) {
      terms[i] = dist.p_pos[i] * eval_loss(base, g) +
                 dist.p_neg[i] * eval_loss(base, -g);
    } else {
      const double n = dist.posterior_neg(i);
      terms[i] = dist.p_neg[i] *
                 (((1.0 - n) / n) * eval_loss(base, g) + eval_loss(base, -g));
    }
  }
  return pairwise_sum(terms);
}

double exact_risk_clamped(const DiscreteDistribution& dist, const LinearModel& model,
                          BaseLoss base, double epsilon) {
  dist.validate();
  std::vector<double> terms(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double g = model.score(dist.support.row(i));
    const double n = std::clamp(dist.posterior_neg(i), epsilon, 1.0 - epsilon);
    terms[i] = dist.p_neg[i] *
               (((1.0 - n) / n) * eval_loss(base, g) + eval_loss(base, -g));
  }
  return pairwise_sum(terms);
}

IdentityReport verify_identity(const DiscreteDistribution& dist,
                               std::span<const LinearModel> models, BaseLoss base) {
  dist.validate();
  IdentityReport report;

  // Pointwise identity: pi+ p(x|+) equals pi- p(x|-) (1-n)/n at every point.
  const double pi_pos = dist.prior_pos();
  const double pi_neg = dist.prior_neg();
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double n = dist.posterior_neg(i);
    const double lhs = pi_pos * (dist.p_pos[i] / pi_pos);
    const double rhs = pi_neg * (dist.p_neg[i] / pi_neg) * ((1.0 - n) / n);
    report.max_pointwise_diff = std::max(report.max_pointwise_diff, std::abs(lhs - rhs));
  }

  for (const LinearModel& model : models) {
    const double prior_form = exact_risk(dist, model, RiskForm::PriorWeighted, base);
    const double neg_form = exact_risk(dist, model, RiskForm::NegativityWeighted, base);
    report.max_risk_diff = std::max(report.max_risk_diff, std::abs(prior_form - neg_form));
  }
  return report;
}

std::vector<int> bayes_labels(const DiscreteDistribution& dist) {
  dist.validate();
  std::vector<int> out(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i)
    out[i] = 1.0 - dist.posterior_neg(i) > 0.5 ? +1 : -1;
  return out;
}

DiscreteDistribution random_distribution(std::mt19937_64& rng, std::size_t max_support,
                                         std::size_t dim) {
  std::uniform_int_distribution<std::size_t> size_dist(4, max_support);
  const std::size_t m = size_dist(rng);

  DiscreteDistribution dist;
  dist.support = Matrix(m, dim);
  dist.p_pos.resize(m);
  dist.p_neg.resize(m);

  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::uniform_real_distribution<double> mass(0.05, 1.0);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < dim; ++j) dist.support.at(i, j) = coord(rng);
    dist.p_pos[i] = mass(rng);
    dist.p_neg[i] = mass(rng);
    total += dist.p_pos[i] + dist.p_neg[i];
  }
  for (std::size_t i = 0; i < m; ++i) {
    dist.p_pos[i] /= total;
    dist.p_neg[i] /= total;
  }
  return dist;
}

LinearModel random_model(std::mt19937_64& rng, std::size_t dim) {
  std::uniform_real_distribution<double> w(-3.0, 3.0);
  LinearModel model;
  model.weights.resize(dim);
  for (double& x : model.weights) x = w(rng);
  model.bias = w(rng) / 1.5;
  return model;
}

}  // namespace pucorrect
