#include "pucorrect/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "pucorrect/common.hpp"
#include "pucorrect/negativity.hpp"
#include "pucorrect/synth.hpp"

namespace pucorrect {

namespace {

const std::vector<std::pair<const char*, const char*>>& known_keys() {
  static const std::vector<std::pair<const char*, const char*>> keys = {
      {"data.input", ""},
      {"data.format", "jsonl"},
      {"data.threshold", "1"},
      {"data.folds", "5"},
      {"data.seed", "42"},
      {"data.truth", ""},
      {"features.set", "all"},
      {"features.max_vocab", "1000"},
      {"risk.assembly", "ncws"},
      {"risk.loss", "hinge"},
      {"risk.negativity", "age"},
      {"risk.epsilon", "0.001"},
      {"risk.prior", "auto"},
      {"risk.penalty_ratio", "auto"},
      {"train.lr", "0.05"},
      {"train.epochs", "30"},
      {"train.batch_size", "100"},
      {"train.l2", "0.0001"},
      {"eval.outdir", "compare_out"},
      {"eval.bins", "40"},
  };
  return keys;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string fmt(double v, const char* spec = "%.4f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

ExperimentConfig::ExperimentConfig() {
  for (const auto& [key, value] : known_keys()) values_[key] = value;
}

void ExperimentConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("bad config line (expected key=value): " + line);
    set(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw std::invalid_argument("unknown config key: " + key);
  it->second = value;
}

const std::string& ExperimentConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw std::invalid_argument("unknown config key: " + key);
  return it->second;
}

int ExperimentConfig::get_int(const std::string& key) const {
  return std::stoi(get(key));
}

double ExperimentConfig::get_double(const std::string& key) const {
  return std::stod(get(key));
}

std::uint64_t ExperimentConfig::get_u64(const std::string& key) const {
  return std::stoull(get(key));
}

std::string ExperimentConfig::resolved() const {
  std::string out;
  for (const auto& [key, value] : values_) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  }
  return out;
}

std::string ExperimentConfig::hash() const { return hex16(fnv1a64(resolved())); }

const ApproachResult& CompareResult::by_assembly(Assembly assembly) const {
  for (const ApproachResult& a : approaches)
    if (a.assembly == assembly) return a;
  throw std::logic_error("approach missing from compare result");
}

namespace {

struct FoldInputs {
  Dataset train;                 // balanced training fold
  RiskAux aux;                   // negativity + confidence over train
  Matrix x_train;                // standardized
  Matrix x_test;                 // standardized
  double prior_auto = 0.5;
  double ratio_auto = 1.0;
};

FoldInputs prepare_fold(const Dataset& full, const FoldSplit& folds, int fold,
                        const ExperimentConfig& config, int global_max_age) {
  FoldInputs out;
  const Dataset train_raw = full.subset(folds.train_indices(fold));
  const Dataset test = full.subset(folds.test_indices(fold));

  // Class ratios are taken before down-sampling; the balanced set would
  // make them uninformative.
  if (train_raw.n_positive == 0)
    throw std::runtime_error("training fold has no positive instances");
  out.ratio_auto = static_cast<double>(train_raw.n_unlabelled) /
                   static_cast<double>(train_raw.n_positive);
  out.prior_auto = static_cast<double>(train_raw.n_positive) /
                   static_cast<double>(train_raw.size());

  const std::uint64_t seed = config.get_u64("data.seed");
  out.train = downsample_balance(train_raw, mix_seed(seed, 1000 + fold)).dataset;

  FeatureExtractor fx(parse_feature_set(config.get("features.set")),
                      config.get_int("features.max_vocab"),
                      config.get_double("risk.epsilon"));
  fx.fit(out.train.records, global_max_age);

  Standardizer st;
  Matrix x_train = fx.transform(out.train.records);
  st.fit(x_train);
  out.x_train = st.apply(x_train);
  out.x_test = st.apply(fx.transform(test.records));

  const NegativityFn nf = make_negativity_fn(config.get("risk.negativity"),
                                             global_max_age,
                                             config.get_double("risk.epsilon"));
  const double eps = config.get_double("risk.epsilon");
  out.aux.negativity.reserve(out.train.size());
  out.aux.confidence.reserve(out.train.size());
  for (const ReviewRecord& rec : out.train.records) {
    const NegativityScore n = nf(rec);
    out.aux.negativity.push_back(n.value);
    out.aux.confidence.push_back(positivity_default(n, eps).value);
  }
  return out;
}

RiskSpec spec_for(Assembly assembly, BaseLoss base, const ExperimentConfig& config,
                  const FoldInputs& fold) {
  RiskSpec spec;
  spec.assembly = assembly;
  spec.base = base;
  if (assembly == Assembly::Cpu) {
    const std::string& prior = config.get("risk.prior");
    spec.prior =
        prior == "auto" ? fold.prior_auto : ClassPriors(std::stod(prior)).pi_plus;
  }
  if (assembly == Assembly::WeightedPenalty) {
    const std::string& ratio = config.get("risk.penalty_ratio");
    spec.penalty_ratio = ratio == "auto" ? fold.ratio_auto : std::stod(ratio);
  }
  return spec;
}

PRF1 mean_of(const std::vector<PRF1>& folds) {
  PRF1 out;
  for (const PRF1& m : folds) {
    out.precision += m.precision;
    out.recall += m.recall;
    out.f1 += m.f1;
    out.tp += m.tp;
    out.fp += m.fp;
    out.fn += m.fn;
    out.tn += m.tn;
  }
  const double k = static_cast<double>(folds.size());
  out.precision /= k;
  out.recall /= k;
  out.f1 /= k;
  return out;
}

}  // namespace

CompareResult run_compare(const ExperimentConfig& config) {
  const std::string input = config.get("data.input");
  if (input.empty()) throw std::invalid_argument("compare: data.input is required");

  const LoadResult loaded = load_reviews(input, parse_format(config.get("data.format")));
  Dataset dataset = apply_threshold(loaded.records, config.get_int("data.threshold"));

  std::vector<int> truth;
  const bool have_truth = !config.get("data.truth").empty();
  if (have_truth) truth = load_truth_csv(config.get("data.truth"), dataset.records);

  const int k = config.get_int("data.folds");
  const std::uint64_t seed = config.get_u64("data.seed");
  const int global_max_age = max_age_days(dataset.records);
  const FoldSplit folds = split_folds(dataset, k, seed);
  const BaseLoss base = parse_loss(config.get("risk.loss"));
  const int bins = config.get_int("eval.bins");

  TrainConfig train_config;
  train_config.learning_rate = config.get_double("train.lr");
  train_config.epochs = config.get_int("train.epochs");
  train_config.batch_size = config.get_int("train.batch_size");
  train_config.l2_lambda = config.get_double("train.l2");

  const std::vector<Assembly> order = {Assembly::Naive, Assembly::Ncws, Assembly::Cpu,
                                       Assembly::PConf, Assembly::WeightedPenalty};

  CompareResult result;
  result.resolved_config = config.resolved();
  result.config_hash = config.hash();
  result.data_summary = dataset_summary(input, dataset);
  result.skipped_lines = loaded.skipped;
  result.folds = k;
  result.approaches.resize(order.size());
  for (std::size_t a = 0; a < order.size(); ++a) {
    result.approaches[a].assembly = order[a];
    result.approaches[a].pooled_pred.assign(dataset.size(), -1);
    result.approaches[a].pooled_squash.assign(dataset.size(), 0.0);
    result.approaches[a].fold_metrics.resize(k);
  }

  for (int fold = 0; fold < k; ++fold) {
    const FoldInputs inputs = prepare_fold(dataset, folds, fold, config, global_max_age);
    const std::vector<std::size_t> test_idx = folds.test_indices(fold);

    std::vector<int> observed_fold;
    observed_fold.reserve(test_idx.size());
    for (std::size_t i : test_idx)
      observed_fold.push_back(dataset.labels[i] == LabelState::Positive ? +1 : -1);

    TrainConfig tc = train_config;
    tc.seed = mix_seed(seed, 7000 + fold);  // shared by every approach

    for (std::size_t a = 0; a < order.size(); ++a) {
      const RiskSpec spec = spec_for(order[a], base, config, inputs);
      const LinearModel model =
          train(inputs.x_train, inputs.train.labels, inputs.aux, spec, tc);
      const std::vector<double> scores = predict_scores(model, inputs.x_test);
      const std::vector<double> squashed = squash_scores(scores);
      const std::vector<int> pred = predict_labels(scores);

      for (std::size_t t = 0; t < test_idx.size(); ++t) {
        result.approaches[a].pooled_pred[test_idx[t]] = pred[t];
        result.approaches[a].pooled_squash[test_idx[t]] = squashed[t];
      }
      result.approaches[a].fold_metrics[fold] = prf1(pred, observed_fold);
    }
  }

  const std::vector<int> observed = observed_truth(dataset.labels);
  const std::vector<int>& basic_pred = result.approaches[0].pooled_pred;
  for (std::size_t a = 0; a < order.size(); ++a) {
    ApproachResult& ar = result.approaches[a];
    ar.mean_folds = mean_of(ar.fold_metrics);
    ar.pooled_observed = prf1(ar.pooled_pred, observed);
    if (have_truth) ar.pooled_truth = prf1(ar.pooled_pred, truth);
    if (a > 0) {
      ar.mcnemar_vs_basic = mcnemar(basic_pred, ar.pooled_pred, observed);
      ar.flips_vs_basic = flip_report(basic_pred, ar.pooled_pred, dataset.labels);
    }
    ar.histogram = score_histogram(ar.pooled_squash, bins);
  }
  return result;
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

std::string metrics_row(const char* approach, const std::string& scope, const PRF1& m) {
  std::string row;
  row += approach;
  row += ',' + scope;
  row += ',' + fmt(m.precision) + ',' + fmt(m.recall) + ',' + fmt(m.f1);
  row += ',' + std::to_string(m.tp) + ',' + std::to_string(m.fp);
  row += ',' + std::to_string(m.fn) + ',' + std::to_string(m.tn) + '\n';
  return row;
}

}  // namespace

void write_compare_reports(const CompareResult& result, const std::string& outdir) {
  std::filesystem::create_directories(outdir);
  const std::string stamp = "# config_hash=" + result.config_hash + "\n";

  // metrics.csv
  {
    std::string csv = stamp;
    csv += "approach,scope,precision,recall,f1,tp,fp,fn,tn\n";
    for (const ApproachResult& ar : result.approaches) {
      const char* name = assembly_name(ar.assembly);
      for (std::size_t f = 0; f < ar.fold_metrics.size(); ++f)
        csv += metrics_row(name, "fold" + std::to_string(f), ar.fold_metrics[f]);
      csv += metrics_row(name, "fold_mean", ar.mean_folds);
      csv += metrics_row(name, "pooled", ar.pooled_observed);
      if (ar.pooled_truth) csv += metrics_row(name, "pooled_truth", *ar.pooled_truth);
    }
    write_file(outdir + "/metrics.csv", csv);
  }

  // flips.csv: paired significance and flip counts against the basic classifier.
  {
    std::string csv = stamp;
    csv += "approach,b,c,statistic,significant,flipped,base_negative,flip_pct\n";
    for (std::size_t a = 1; a < result.approaches.size(); ++a) {
      const ApproachResult& ar = result.approaches[a];
      csv += assembly_name(ar.assembly);
      csv += ',' + std::to_string(ar.mcnemar_vs_basic.b);
      csv += ',' + std::to_string(ar.mcnemar_vs_basic.c);
      csv += ',' + fmt(ar.mcnemar_vs_basic.statistic, "%.3f");
      csv += ar.mcnemar_vs_basic.significant_05 ? ",1" : ",0";
      csv += ',' + std::to_string(ar.flips_vs_basic.flipped);
      csv += ',' + std::to_string(ar.flips_vs_basic.base_negative);
      csv += ',' + fmt(ar.flips_vs_basic.pct, "%.4f") + '\n';
    }
    write_file(outdir + "/flips.csv", csv);
  }

  // histogram_<approach>.csv
  for (const ApproachResult& ar : result.approaches) {
    std::string csv = stamp;
    csv += "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < ar.histogram.counts.size(); ++b) {
      csv += fmt(ar.histogram.edges[b]) + ',' + fmt(ar.histogram.edges[b + 1]);
      csv += ',' + std::to_string(ar.histogram.counts[b]) + '\n';
    }
    write_file(outdir + "/histogram_" + assembly_name(ar.assembly) + ".csv", csv);
  }

  // resolved_config.txt
  write_file(outdir + "/resolved_config.txt",
             stamp + result.resolved_config);

  // report.txt
  {
    std::string txt;
    txt += "compare report\n";
    txt += stamp;
    txt += result.data_summary + "\n";
    txt += "skipped_lines=" + std::to_string(result.skipped_lines) + "\n";
    txt += "folds=" + std::to_string(result.folds) + "\n\n";

    txt += "pooled held-out metrics (observed labels)\n";
    txt += "approach   precision  recall   f1       mcnemar      flips-vs-basic\n";
    for (std::size_t a = 0; a < result.approaches.size(); ++a) {
      const ApproachResult& ar = result.approaches[a];
      char line[160];
      std::string mc = "-";
      std::string flips = "-";
      if (a > 0) {
        mc = fmt(ar.mcnemar_vs_basic.statistic, "%.3f");
        if (ar.mcnemar_vs_basic.significant_05) mc += "*";
        flips = format_flip(ar.flips_vs_basic);
      }
      std::snprintf(line, sizeof line, "%-10s %-10s %-8s %-8s %-12s %s\n",
                    assembly_name(ar.assembly), fmt(ar.pooled_observed.precision).c_str(),
                    fmt(ar.pooled_observed.recall).c_str(),
                    fmt(ar.pooled_observed.f1).c_str(), mc.c_str(), flips.c_str());
      txt += line;
    }

    txt += "\nper-fold F1 (observed labels)\n";
    for (const ApproachResult& ar : result.approaches) {
      txt += std::string(assembly_name(ar.assembly)) + ":";
      for (const PRF1& m : ar.fold_metrics) txt += " " + fmt(m.f1);
      txt += "  mean " + fmt(ar.mean_folds.f1) + "\n";
    }

    if (result.approaches[0].pooled_truth) {
      txt += "\npooled held-out metrics (true labels)\n";
      txt += "approach   precision  recall   f1\n";
      for (const ApproachResult& ar : result.approaches) {
        char line[120];
        std::snprintf(line, sizeof line, "%-10s %-10s %-8s %s\n",
                      assembly_name(ar.assembly), fmt(ar.pooled_truth->precision).c_str(),
                      fmt(ar.pooled_truth->recall).c_str(),
                      fmt(ar.pooled_truth->f1).c_str());
        txt += line;
      }
    }
    write_file(outdir + "/report.txt", txt);
  }
}

namespace {

nlohmann::json tfidf_to_json(const TfidfModel& model) {
  nlohmann::json j;
  j["n_docs"] = model.n_docs;
  j["terms"] = model.terms;
  j["doc_freq"] = model.doc_freq;
  return j;
}

TfidfModel tfidf_from_json(const nlohmann::json& j) {
  TfidfModel model;
  model.n_docs = j.at("n_docs").get<int>();
  model.terms = j.at("terms").get<std::vector<std::string>>();
  model.doc_freq = j.at("doc_freq").get<std::vector<int>>();
  for (std::size_t i = 0; i < model.terms.size(); ++i)
    model.vocabulary[model.terms[i]] = static_cast<int>(i);
  return model;
}

}  // namespace

void save_model_bundle(const ModelBundle& bundle, const std::string& path) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["model"] = {{"feature_dim", bundle.model.feature_dim()},
                {"weights", bundle.model.weights},
                {"bias", bundle.model.bias}};
  if (bundle.standardizer.fitted())
    j["standardizer"] = {{"mean", bundle.standardizer.mean},
                         {"scale", bundle.standardizer.scale}};
  nlohmann::json features;
  features["set"] = feature_set_name(bundle.extractor.selector());
  features["max_vocab"] = bundle.extractor.max_vocab();
  features["epsilon"] = bundle.extractor.epsilon();
  features["max_age"] = bundle.extractor.max_age();
  features["has_user_stats"] = bundle.extractor.has_user_stats();
  features["tfidf"] = tfidf_to_json(bundle.extractor.tfidf());
  std::vector<std::pair<std::string, UserStat>> users(
      bundle.extractor.user_stats().begin(), bundle.extractor.user_stats().end());
  std::sort(users.begin(), users.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  nlohmann::json user_rows = nlohmann::json::array();
  for (const auto& [id, stat] : users)
    user_rows.push_back({id, stat.mean_rating, stat.review_count});
  features["user_stats"] = std::move(user_rows);
  j["features"] = std::move(features);
  j["schema"] = bundle.extractor.schema();
  j["risk"] = {{"assembly", assembly_name(bundle.assembly)},
               {"loss", loss_name(bundle.base)}};

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << j.dump(2) << '\n';
}

ModelBundle load_model_bundle(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  nlohmann::json j;
  in >> j;
  if (j.at("format_version").get<int>() != 1)
    throw std::runtime_error("unsupported model format version");

  ModelBundle bundle;
  bundle.model.weights = j.at("model").at("weights").get<std::vector<double>>();
  bundle.model.bias = j.at("model").at("bias").get<double>();
  if (j.contains("standardizer")) {
    bundle.standardizer.mean =
        j["standardizer"].at("mean").get<std::vector<double>>();
    bundle.standardizer.scale =
        j["standardizer"].at("scale").get<std::vector<double>>();
  }
  const nlohmann::json& features = j.at("features");
  UserStats stats;
  for (const auto& row : features.at("user_stats"))
    stats[row.at(0).get<std::string>()] = {row.at(1).get<double>(),
                                            row.at(2).get<int>()};
  bundle.extractor = FeatureExtractor::restore(
      parse_feature_set(features.at("set").get<std::string>()),
      features.at("max_vocab").get<int>(), features.at("epsilon").get<double>(),
      features.at("max_age").get<int>(), tfidf_from_json(features.at("tfidf")),
      std::move(stats), features.at("has_user_stats").get<bool>());
  bundle.assembly = parse_assembly(j.at("risk").at("assembly").get<std::string>());
  bundle.base = parse_loss(j.at("risk").at("loss").get<std::string>());
  return bundle;
}

ModelBundle train_single(const ExperimentConfig& config) {
  const std::string input = config.get("data.input");
  if (input.empty()) throw std::invalid_argument("train: data.input is required");
  const LoadResult loaded = load_reviews(input, parse_format(config.get("data.format")));
  Dataset dataset = apply_threshold(loaded.records, config.get_int("data.threshold"));

  const double eps = config.get_double("risk.epsilon");
  const int global_max_age = max_age_days(dataset.records);

  if (dataset.n_positive == 0)
    throw std::runtime_error("train: dataset has no positive instances");
  const double ratio_auto = dataset.n_unlabelled > 0
                                ? static_cast<double>(dataset.n_unlabelled) /
                                      static_cast<double>(dataset.n_positive)
                                : 1.0;
  const double prior_auto =
      static_cast<double>(dataset.n_positive) / static_cast<double>(dataset.size());

  const std::uint64_t seed = config.get_u64("data.seed");
  const Dataset balanced = downsample_balance(dataset, mix_seed(seed, 1)).dataset;

  ModelBundle bundle;
  bundle.assembly = parse_assembly(config.get("risk.assembly"));
  bundle.base = parse_loss(config.get("risk.loss"));
  bundle.extractor = FeatureExtractor(parse_feature_set(config.get("features.set")),
                                      config.get_int("features.max_vocab"), eps);
  bundle.extractor.fit(balanced.records, global_max_age);

  Matrix x_raw = bundle.extractor.transform(balanced.records);
  bundle.standardizer.fit(x_raw);
  const Matrix x = bundle.standardizer.apply(x_raw);

  const NegativityFn nf =
      make_negativity_fn(config.get("risk.negativity"), global_max_age, eps);
  RiskAux aux;
  for (const ReviewRecord& rec : balanced.records) {
    const NegativityScore n = nf(rec);
    aux.negativity.push_back(n.value);
    aux.confidence.push_back(positivity_default(n, eps).value);
  }

  RiskSpec spec;
  spec.assembly = bundle.assembly;
  spec.base = bundle.base;
  if (spec.assembly == Assembly::Cpu) {
    const std::string& prior = config.get("risk.prior");
    spec.prior =
        prior == "auto" ? prior_auto : ClassPriors(std::stod(prior)).pi_plus;
  }
  if (spec.assembly == Assembly::WeightedPenalty) {
    const std::string& ratio = config.get("risk.penalty_ratio");
    spec.penalty_ratio = ratio == "auto" ? ratio_auto : std::stod(ratio);
  }

  TrainConfig tc;
  tc.learning_rate = config.get_double("train.lr");
  tc.epochs = config.get_int("train.epochs");
  tc.batch_size = config.get_int("train.batch_size");
  tc.l2_lambda = config.get_double("train.l2");
  tc.seed = mix_seed(seed, 2);

  bundle.model = train(x, balanced.labels, aux, spec, tc);
  return bundle;
}

EvalReport evaluate_model(const ModelBundle& bundle, const Dataset& dataset,
                          const std::vector<int>* truth) {
  EvalReport report;
  report.n = dataset.size();
  Matrix x = bundle.extractor.transform(dataset.records);
  if (bundle.standardizer.fitted()) x = bundle.standardizer.apply(x);
  const std::vector<double> scores = predict_scores(bundle.model, x);
  const std::vector<int> pred = predict_labels(scores);
  report.vs_observed = prf1(pred, observed_truth(dataset.labels));
  if (truth) report.vs_truth = prf1(pred, *truth);
  return report;
}

void write_dense_csv(const Matrix& features, const std::vector<std::string>& schema,
                     const std::string& path, const std::string& comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  if (!comment.empty()) out << "# " << comment << '\n';
  for (std::size_t j = 0; j < schema.size(); ++j)
    out << (j ? "," : "") << schema[j];
  out << '\n';
  char buf[64];
  for (std::size_t i = 0; i < features.rows; ++i) {
    for (std::size_t j = 0; j < features.cols; ++j) {
      std::snprintf(buf, sizeof buf, "%.10g", features.at(i, j));
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
}

void write_sparse_triplets(const Matrix& features, const std::string& path,
                           const std::string& comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "# rows=" << features.rows << " cols=" << features.cols << '\n';
  out << "row,col,value\n";
  char buf[64];
  for (std::size_t i = 0; i < features.rows; ++i)
    for (std::size_t j = 0; j < features.cols; ++j) {
      const double v = features.at(i, j);
      if (v == 0.0) continue;
      std::snprintf(buf, sizeof buf, "%.10g", v);
      out << i << ',' << j << ',' << buf << '\n';
    }
}

}  // namespace pucorrect
