#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pucorrect/common.hpp"
#include "pucorrect/core_data.hpp"
#include "pucorrect/eval.hpp"
#include "pucorrect/features.hpp"
#include "pucorrect/negativity.hpp"
#include "pucorrect/pipeline.hpp"
#include "pucorrect/synth.hpp"

namespace {

using namespace pucorrect;

std::string stem_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

struct IngestArgs {
  std::string input;
  std::string format = "jsonl";
  int threshold = 1;
  std::string output;
  std::string name;
};

int cmd_ingest(const IngestArgs& args) {
  const LoadResult loaded = load_reviews(args.input, parse_format(args.format));
  if (loaded.records.empty()) {
    std::cerr << "error: no parseable records in " << args.input << "\n";
    return 1;
  }
  const Dataset dataset = apply_threshold(loaded.records, args.threshold);
  const std::string name = args.name.empty() ? stem_of(args.input) : args.name;
  std::cout << dataset_summary(name, dataset) << "\n";
  std::cout << "skipped malformed lines: " << loaded.skipped << "\n";
  if (!args.output.empty()) {
    write_jsonl(dataset.records, args.output);
    std::cout << "wrote " << dataset.size() << " records to " << args.output << "\n";
  }
  return 0;
}

struct SynthArgs {
  SynthConfig config;
  std::string exposure = "linear";
  std::string output;
  std::string truth;
};

int cmd_synth(SynthArgs args) {
  args.config.exposure = parse_exposure(args.exposure);
  const SynthResult result = generate(args.config);
  write_jsonl(result.dataset.records, args.output);
  const std::string truth_path =
      args.truth.empty() ? args.output + ".truth.csv" : args.truth;
  write_truth_csv(result, truth_path);
  std::cout << dataset_summary(stem_of(args.output), result.dataset) << "\n";
  std::cout << "truth sidecar: " << truth_path << "\n";
  return 0;
}

struct FeaturizeArgs {
  std::string input;
  std::string format = "jsonl";
  std::string features = "all";
  int max_vocab = 10000;
  double epsilon = kDefaultEpsilon;
  std::string output;
};

int cmd_featurize(const FeaturizeArgs& args) {
  const LoadResult loaded = load_reviews(args.input, parse_format(args.format));
  if (loaded.records.empty()) {
    std::cerr << "error: no parseable records in " << args.input << "\n";
    return 1;
  }
  const FeatureSet set = parse_feature_set(args.features);
  FeatureExtractor fx(set, args.max_vocab, args.epsilon);
  fx.fit(loaded.records);
  const Matrix x = fx.transform(loaded.records);
  const std::string comment =
      "features=" + std::string(feature_set_name(set)) +
      " records=" + std::to_string(loaded.records.size());
  if (set == FeatureSet::Ugr)
    write_sparse_triplets(x, args.output, comment);
  else
    write_dense_csv(x, fx.schema(), args.output, comment);
  std::cout << "wrote " << x.rows << " x " << x.cols << " feature matrix to "
            << args.output << "\n";
  return 0;
}

struct EvaluateArgs {
  std::string input;
  std::string format = "jsonl";
  int threshold = 1;
  std::string model_path;
  std::string truth;
};

void print_prf1(const char* tag, const PRF1& m) {
  std::printf("%-14s precision=%.4f recall=%.4f f1=%.4f (tp=%ld fp=%ld fn=%ld tn=%ld)\n",
              tag, m.precision, m.recall, m.f1, m.tp, m.fp, m.fn, m.tn);
}

int cmd_evaluate(const EvaluateArgs& args) {
  const ModelBundle bundle = load_model_bundle(args.model_path);
  const LoadResult loaded = load_reviews(args.input, parse_format(args.format));
  const Dataset dataset = apply_threshold(loaded.records, args.threshold);
  std::vector<int> truth;
  const std::vector<int>* truth_ptr = nullptr;
  if (!args.truth.empty()) {
    truth = load_truth_csv(args.truth, dataset.records);
    truth_ptr = &truth;
  }
  const EvalReport report = evaluate_model(bundle, dataset, truth_ptr);
  std::cout << "evaluated " << report.n << " instances with "
            << assembly_name(bundle.assembly) << "/" << loss_name(bundle.base)
            << " model\n";
  print_prf1("observed:", report.vs_observed);
  if (report.vs_truth) print_prf1("truth:", *report.vs_truth);
  return 0;
}

struct CorrelateArgs {
  std::string input;
  std::string format = "jsonl";
  int threshold = 1;
  int bin_width = 30;
  std::string output;
};

int cmd_correlate(const CorrelateArgs& args) {
  const LoadResult loaded = load_reviews(args.input, parse_format(args.format));
  const Dataset dataset = apply_threshold(loaded.records, args.threshold);
  const std::vector<AgeBin> curve = age_helpfulness_curve(dataset, args.bin_width);
  std::vector<double> age, prob;
  for (const AgeBin& bin : curve) {
    age.push_back(bin.age_lo);
    prob.push_back(bin.helpful_probability);
  }
  const CorrelationPair corr = correlations(age, prob);
  std::printf("age bins: %zu (width %d days)\n", curve.size(), args.bin_width);
  std::printf("pearson=%.4f spearman=%.4f\n", corr.pearson, corr.spearman);
  if (!args.output.empty()) {
    std::ofstream out(args.output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + args.output);
    out << "age_lo,helpful_probability,review_count\n";
    char buf[64];
    for (const AgeBin& bin : curve) {
      std::snprintf(buf, sizeof buf, "%d,%.6f,%ld\n", bin.age_lo,
                    bin.helpful_probability, bin.review_count);
      out << buf;
    }
    std::cout << "wrote curve to " << args.output << "\n";
  }
  return 0;
}

// Applies a CLI option to a config key only when the user passed it, so the
// precedence is defaults < --config file < explicit flags.
struct ConfigBinder {
  ExperimentConfig& config;
  std::vector<std::pair<CLI::Option*, std::pair<std::string, std::string*>>> bound;

  void bind(CLI::Option* opt, const std::string& key, std::string* storage) {
    bound.push_back({opt, {key, storage}});
  }
  void apply() {
    for (auto& [opt, kv] : bound)
      if (opt->count() > 0) config.set(kv.first, *kv.second);
  }
};

int cmd_train(const ExperimentConfig& config, const std::string& save_path) {
  const ModelBundle bundle = train_single(config);

  // Training-set fit, for a quick sanity read.
  const LoadResult loaded =
      load_reviews(config.get("data.input"), parse_format(config.get("data.format")));
  const Dataset dataset = apply_threshold(loaded.records, config.get_int("data.threshold"));
  const EvalReport report = evaluate_model(bundle, dataset, nullptr);
  std::cout << "trained " << assembly_name(bundle.assembly) << "/"
            << loss_name(bundle.base) << " on " << dataset.size() << " instances\n";
  print_prf1("train-fit:", report.vs_observed);

  if (!save_path.empty()) {
    save_model_bundle(bundle, save_path);
    std::ofstream cfg(save_path + ".config.txt", std::ios::binary);
    cfg << "# config_hash=" << config.hash() << "\n" << config.resolved();
    std::cout << "saved model to " << save_path << "\n";
  }
  return 0;
}

int cmd_compare(const ExperimentConfig& config) {
  const CompareResult result = run_compare(config);
  write_compare_reports(result, config.get("eval.outdir"));
  std::cout << result.data_summary << "\n";
  std::cout << "config_hash=" << result.config_hash << "\n";
  for (const ApproachResult& ar : result.approaches) {
    std::printf("%-6s f1=%.4f", assembly_name(ar.assembly), ar.pooled_observed.f1);
    if (ar.pooled_truth) std::printf(" f1_true=%.4f", ar.pooled_truth->f1);
    if (ar.assembly != Assembly::Naive) {
      std::printf(" mcnemar=%.3f%s flips=%s",
                  ar.mcnemar_vs_basic.statistic,
                  ar.mcnemar_vs_basic.significant_05 ? "*" : "",
                  format_flip(ar.flips_vs_basic).c_str());
    }
    std::printf("\n");
  }
  std::cout << "reports in " << config.get("eval.outdir") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"positive-unlabelled classification correction toolkit"};
  app.require_subcommand(1);

  IngestArgs ingest_args;
  CLI::App* ingest = app.add_subcommand("ingest", "load a corpus and report label counts");
  ingest->add_option("--input", ingest_args.input, "review corpus path")->required();
  ingest->add_option("--format", ingest_args.format, "jsonl|csv");
  ingest->add_option("--threshold", ingest_args.threshold, "helpful-vote threshold");
  ingest->add_option("--output", ingest_args.output, "re-emit clean JSONL here");
  ingest->add_option("--name", ingest_args.name, "dataset name for the summary line");

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic PU corpus");
  synth->add_option("--n", synth_args.config.n_instances, "instance count");
  synth->add_option("--pos-frac", synth_args.config.positive_fraction,
                    "true positive fraction");
  synth->add_option("--max-age", synth_args.config.max_age_days, "maximum age in days");
  synth->add_option("--exposure", synth_args.exposure, "linear|logistic|step:<a0>");
  synth->add_option("--noise", synth_args.config.feature_noise, "latent feature noise");
  synth->add_option("--seed", synth_args.config.seed, "generator seed");
  synth->add_option("--output", synth_args.output, "output JSONL path")->required();
  synth->add_option("--truth", synth_args.truth,
                    "truth sidecar path (default <output>.truth.csv)");

  FeaturizeArgs feat_args;
  CLI::App* featurize = app.add_subcommand("featurize", "extract a feature matrix");
  featurize->add_option("--input", feat_args.input, "review corpus path")->required();
  featurize->add_option("--format", feat_args.format, "jsonl|csv");
  featurize->add_option("--features", feat_args.features, "feature set name");
  featurize->add_option("--max-vocab", feat_args.max_vocab, "TF-IDF vocabulary cap");
  featurize->add_option("--epsilon", feat_args.epsilon, "score clamp epsilon");
  featurize->add_option("--output", feat_args.output, "output path")->required();

  EvaluateArgs eval_args;
  CLI::App* evaluate = app.add_subcommand("evaluate", "score a corpus with a saved model");
  evaluate->add_option("--input", eval_args.input, "review corpus path")->required();
  evaluate->add_option("--format", eval_args.format, "jsonl|csv");
  evaluate->add_option("--threshold", eval_args.threshold, "helpful-vote threshold");
  evaluate->add_option("--load-model", eval_args.model_path, "model bundle path")
      ->required();
  evaluate->add_option("--truth", eval_args.truth, "truth sidecar for synthetic data");

  CorrelateArgs corr_args;
  CLI::App* correlate =
      app.add_subcommand("correlate", "age vs helpfulness correlation");
  correlate->add_option("--input", corr_args.input, "review corpus path")->required();
  correlate->add_option("--format", corr_args.format, "jsonl|csv");
  correlate->add_option("--threshold", corr_args.threshold, "helpful-vote threshold");
  correlate->add_option("--bin-width", corr_args.bin_width, "age bin width in days");
  correlate->add_option("--output", corr_args.output, "write the curve CSV here");

  // train and compare share the experiment-config surface.
  ExperimentConfig train_config;
  ConfigBinder train_binder{train_config, {}};
  std::string train_config_file, train_save;
  std::vector<std::string> train_values(16);
  CLI::App* train_cmd = app.add_subcommand("train", "train one risk assembly");
  {
    auto bind = [&](CLI::App* cmd, const char* flag, const std::string& key,
                    std::string& storage, const char* help) {
      train_binder.bind(cmd->add_option(flag, storage, help), key, &storage);
    };
    train_cmd->add_option("--config", train_config_file, "key=value config file");
    bind(train_cmd, "--input", "data.input", train_values[0], "review corpus path");
    bind(train_cmd, "--format", "data.format", train_values[1], "jsonl|csv");
    bind(train_cmd, "--threshold", "data.threshold", train_values[2], "vote threshold");
    bind(train_cmd, "--seed", "data.seed", train_values[3], "seed");
    bind(train_cmd, "--features", "features.set", train_values[4], "feature set");
    bind(train_cmd, "--max-vocab", "features.max_vocab", train_values[5], "vocab cap");
    bind(train_cmd, "--risk", "risk.assembly", train_values[6],
         "naive|ncws|cpu|pconf|svmp");
    bind(train_cmd, "--loss", "risk.loss", train_values[7], "hinge|double-hinge|logistic");
    bind(train_cmd, "--negativity", "risk.negativity", train_values[8],
         "age|constant:<v>|file:<path>");
    bind(train_cmd, "--epsilon", "risk.epsilon", train_values[9], "clamp epsilon");
    bind(train_cmd, "--prior", "risk.prior", train_values[10], "class prior or auto");
    bind(train_cmd, "--penalty-ratio", "risk.penalty_ratio", train_values[11],
         "penalty ratio or auto");
    bind(train_cmd, "--lr", "train.lr", train_values[12], "learning rate");
    bind(train_cmd, "--epochs", "train.epochs", train_values[13], "epochs");
    bind(train_cmd, "--batch-size", "train.batch_size", train_values[14], "batch size");
    bind(train_cmd, "--l2", "train.l2", train_values[15], "l2 penalty");
    train_cmd->add_option("--save-model", train_save, "write the model bundle here");
  }

  ExperimentConfig compare_config;
  ConfigBinder compare_binder{compare_config, {}};
  std::string compare_config_file;
  std::vector<std::string> compare_values(19);
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "train and compare all correction approaches");
  {
    auto bind = [&](const char* flag, const std::string& key, std::string& storage,
                    const char* help) {
      compare_binder.bind(compare_cmd->add_option(flag, storage, help), key, &storage);
    };
    compare_cmd->add_option("--config", compare_config_file, "key=value config file");
    bind("--input", "data.input", compare_values[0], "review corpus path");
    bind("--format", "data.format", compare_values[1], "jsonl|csv");
    bind("--threshold", "data.threshold", compare_values[2], "vote threshold");
    bind("--folds", "data.folds", compare_values[3], "cross-validation folds");
    bind("--seed", "data.seed", compare_values[4], "seed");
    bind("--truth", "data.truth", compare_values[5], "truth sidecar (synthetic runs)");
    bind("--features", "features.set", compare_values[6], "feature set");
    bind("--max-vocab", "features.max_vocab", compare_values[7], "vocab cap");
    bind("--loss", "risk.loss", compare_values[8], "hinge|double-hinge|logistic");
    bind("--negativity", "risk.negativity", compare_values[9],
         "age|constant:<v>|file:<path>");
    bind("--epsilon", "risk.epsilon", compare_values[10], "clamp epsilon");
    bind("--prior", "risk.prior", compare_values[11], "class prior or auto");
    bind("--penalty-ratio", "risk.penalty_ratio", compare_values[12],
         "penalty ratio or auto");
    bind("--lr", "train.lr", compare_values[13], "learning rate");
    bind("--epochs", "train.epochs", compare_values[14], "epochs");
    bind("--batch-size", "train.batch_size", compare_values[15], "batch size");
    bind("--l2", "train.l2", compare_values[16], "l2 penalty");
    bind("--outdir", "eval.outdir", compare_values[17], "report directory");
    bind("--bins", "eval.bins", compare_values[18], "histogram bins");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*ingest) return cmd_ingest(ingest_args);
    if (*synth) return cmd_synth(synth_args);
    if (*featurize) return cmd_featurize(feat_args);
    if (*evaluate) return cmd_evaluate(eval_args);
    if (*correlate) return cmd_correlate(corr_args);
    if (*train_cmd) {
      if (!train_config_file.empty()) train_config.load_file(train_config_file);
      train_binder.apply();
      return cmd_train(train_config, train_save);
    }
    if (*compare_cmd) {
      if (!compare_config_file.empty()) compare_config.load_file(compare_config_file);
      compare_binder.apply();
      return cmd_compare(compare_config);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
