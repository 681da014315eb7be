#include "gradepred/commands.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "gradepred/eval.hpp"
#include "gradepred/features.hpp"
#include "gradepred/ingest.hpp"
#include "gradepred/models.hpp"
#include "gradepred/sweep.hpp"
#include "gradepred/synth.hpp"

namespace gradepred::cli {
namespace {

const std::vector<std::string> kAllModels{"svm", "linreg", "tree", "nb", "knn", "random", "majority"};

std::string header_line(const std::string& command, const RunConfig& config) {
  return "gradepred " + command + " " + config.to_json().dump();
}

ModelSpec spec_for(const std::string& name, const RunConfig& config) {
  ModelSpec spec = model_spec_from_name(name);
  spec.C = config.C;
  spec.k = config.k;
  spec.epsilon = config.epsilon;
  spec.seed = config.seed;
  spec.validate();
  return spec;
}

LooConfig loo_config(const ModelSpec& spec, const RunConfig& config) {
  return {spec, config.thresholds, config.normalize, config.global_prep, config.threads};
}

// Loads and validates the two input files; nullopt after reporting on err.
std::optional<Dataset> load_inputs(const RunConfig& config, std::ostream& err) {
  for (const auto& path : {config.submissions_path(), config.gradebook_path()}) {
    if (!std::filesystem::exists(path)) {
      err << "error: input file not found: " << path.string() << '\n';
      return std::nullopt;
    }
  }
  try {
    std::size_t warnings = 0;
    auto dataset = load_dataset(config.submissions_path(), config.gradebook_path(), &warnings);
    if (warnings > 0) err << "warning: repaired " << warnings << " submission rows\n";
    return dataset;
  } catch (const IngestError& e) {
    err << "error: " << e.what() << '\n';
    return std::nullopt;
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::vector<std::string> requested_models(const RunConfig& config, std::vector<std::string> fallback) {
  return config.models.empty() ? fallback : config.models;
}

}  // namespace

std::filesystem::path RunConfig::submissions_path() const {
  return submissions.empty() ? out_dir / "submissions.csv" : submissions;
}
std::filesystem::path RunConfig::gradebook_path() const {
  return gradebook.empty() ? out_dir / "gradebook.csv" : gradebook;
}
std::filesystem::path RunConfig::report_path() const { return out.empty() ? out_dir / "report.md" : out; }

nlohmann::json RunConfig::to_json() const {
  return {{"out-dir", out_dir.generic_string()},
          {"submissions", submissions_path().generic_string()},
          {"gradebook", gradebook_path().generic_string()},
          {"out", report_path().generic_string()},
          {"model", models},
          {"thresholds", {thresholds.perf, thresholds.subs}},
          {"sweep", sweep},
          {"normalize", normalize},
          {"global-prep", global_prep},
          {"seed", seed},
          {"C", C},
          {"k", k},
          {"epsilon", epsilon},
          {"students", students},
          {"questions", questions}};
}

Thresholds parse_thresholds(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("thresholds must look like 0.02,0.05");
  try {
    std::size_t used = 0;
    const std::string a = text.substr(0, comma);
    const std::string b = text.substr(comma + 1);
    Thresholds t{std::stod(a, &used), 0.0};
    if (used != a.size()) throw std::invalid_argument(a);
    t.subs = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
    if (t.perf < 0.0 || t.subs < 0.0) throw std::invalid_argument("negative");
    return t;
  } catch (const std::exception&) {
    throw std::invalid_argument("thresholds must be two non-negative numbers, got '" + text + "'");
  }
}

void apply_config_json(RunConfig& config, const nlohmann::json& file,
                       const std::function<bool(const std::string&)>& was_set) {
  if (!file.is_object()) throw std::invalid_argument("config file must hold a JSON object");
  for (const auto& [key, value] : file.items()) {
    if (was_set(key)) continue;
    if (key == "out-dir") {
      config.out_dir = value.get<std::string>();
    } else if (key == "submissions") {
      config.submissions = value.get<std::string>();
    } else if (key == "gradebook") {
      config.gradebook = value.get<std::string>();
    } else if (key == "out") {
      config.out = value.get<std::string>();
    } else if (key == "model") {
      config.models = value.is_string() ? std::vector<std::string>{value.get<std::string>()}
                                        : value.get<std::vector<std::string>>();
    } else if (key == "thresholds") {
      if (value.is_string()) {
        config.thresholds = parse_thresholds(value.get<std::string>());
      } else {
        const auto pair = value.get<std::vector<double>>();
        if (pair.size() != 2) throw std::invalid_argument("thresholds needs two values");
        config.thresholds = {pair[0], pair[1]};
      }
    } else if (key == "sweep") {
      config.sweep = value.get<bool>();
    } else if (key == "normalize") {
      config.normalize = value.get<bool>();
    } else if (key == "global-prep") {
      config.global_prep = value.get<bool>();
    } else if (key == "seed") {
      config.seed = value.get<std::uint64_t>();
    } else if (key == "C") {
      config.C = value.get<double>();
    } else if (key == "k") {
      config.k = value.get<int>();
    } else if (key == "epsilon") {
      config.epsilon = value.get<double>();
    } else if (key == "students") {
      config.students = value.get<std::size_t>();
    } else if (key == "questions") {
      config.questions = value.get<std::size_t>();
    } else if (key == "threads") {
      config.threads = value.get<unsigned>();
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
}

int cmd_synth(const RunConfig& config, std::ostream& out, std::ostream& err) {
  CohortConfig cohort_config;
  cohort_config.n_students = config.students;
  cohort_config.n_questions = config.questions;
  cohort_config.seed = config.seed;
  if (config.students != 249) cohort_config.target_grade_counts = scaled_grade_counts(config.students);
  try {
    const auto cohort = generate_cohort(cohort_config);
    write_cohort(cohort, config.out_dir, header_line("synth", config));
    out << "synth: " << cohort.students.size() << " students, " << cohort.events.size() << " submissions -> "
        << config.out_dir.string() << '\n';
  } catch (const InfeasibleConfig& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}

int cmd_extract(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto dataset = load_inputs(config, err);
  if (!dataset) return kInputError;
  const auto features = assemble_feature_matrix(*dataset);
  {
    auto file = open_output(config.out_dir / "features.csv");
    file << "# " << header_line("extract", config) << '\n';
    write_features_csv(file, features);
  }
  {
    const auto mask = apply_variance_threshold(features, config.thresholds);
    auto file = open_output(config.out_dir / "mask.json");
    file << mask_to_json(features, mask).dump(2) << '\n';
  }
  out << "features: " << features.rows() << " rows x " << features.cols() << " feature columns\n";
  return kOk;
}

int cmd_evaluate(const RunConfig& config_in, std::ostream& out, std::ostream& err) {
  RunConfig config = config_in;
  const auto dataset = load_inputs(config, err);
  if (!dataset) return kInputError;
  const auto features = assemble_feature_matrix(*dataset);
  const auto labels = final_grades(*dataset);
  const auto models = requested_models(config, kAllModels);

  int status = kOk;
  if (config.sweep) {
    try {
      const auto spec = spec_for(models.front(), config);
      const auto result = threshold_sweep(features, labels, loo_config(spec, config));
      out << render_sweep(result, spec) << '\n';
      config.thresholds = result.winner;
    } catch (const std::exception& e) {
      err << "error: sweep failed: " << e.what() << '\n';
      return kModelError;
    }
  }

  std::vector<std::pair<ModelSpec, EvalReport>> reports;
  std::vector<std::pair<std::string, LooPredictions>> predictions;
  for (const auto& name : models) {
    try {
      const auto spec = spec_for(name, config);
      auto preds = loocv(features, labels, loo_config(spec, config));
      if (preds.nonconverged_folds > 0) {
        err << "warning: " << name << ": solver hit its iteration cap in " << preds.nonconverged_folds << " folds\n";
      }
      reports.emplace_back(spec, evaluate(preds));
      predictions.emplace_back(name, std::move(preds));
    } catch (const std::exception& e) {
      err << "error: model " << name << " failed: " << e.what() << '\n';
      status = kModelError;
    }
  }

  const std::string title =
      config.normalize ? "Performance for normalized input" : "Performance for non-normalized input";
  const std::string body = reports.empty() ? "No model completed.\n" : render_report(reports, title);
  {
    auto file = open_output(config.report_path());
    file << "<!-- " << header_line("evaluate", config) << " -->\n" << body;
  }
  const auto dir = config.report_path().parent_path();
  for (const auto& [name, preds] : predictions) {
    const auto file_name = models.size() == 1 ? std::string("predictions.csv") : "predictions_" + name + ".csv";
    auto file = open_output(dir / file_name);
    file << "# " << header_line("evaluate", config) << '\n';
    write_predictions_csv(file, preds);
  }
  out << body;
  return status;
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto dataset = load_inputs(config, err);
  if (!dataset) return kInputError;
  const auto features = assemble_feature_matrix(*dataset);
  const auto labels = final_grades(*dataset);
  const auto name = requested_models(config, {"svm"}).front();
  try {
    const auto spec = spec_for(name, config);
    const auto result = threshold_sweep(features, labels, loo_config(spec, config));
    const auto table = render_sweep(result, spec);
    auto file = open_output(config.out_dir / "sweep.md");
    file << "<!-- " << header_line("sweep", config) << " -->\n" << table;
    out << table;
  } catch (const std::exception& e) {
    err << "error: sweep failed: " << e.what() << '\n';
    return kModelError;
  }
  return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  std::string thresholds_text;
  std::string config_file;

  CLI::App app{"Early course-grade prediction from homework submission logs", "gradepred"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", config.seed, "Master seed for generation and random baselines");
  app.add_option("--config", config_file, "JSON file with defaults for any flag");
  app.add_option("--out-dir", config.out_dir, "Directory for generated and derived files");
  app.add_option("--threads", config.threads, "Worker threads for leave-one-out (0 = all cores)");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic cohort");
  synth->add_option("--students", config.students, "Number of students");
  synth->add_option("--questions", config.questions, "Number of questions");

  std::vector<CLI::App*> data_commands;
  auto* extract = app.add_subcommand("extract", "Write features.csv and mask.json");
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Leave-one-out evaluation report");
  auto* sweep = app.add_subcommand("sweep", "Variance-threshold sweep for one model");
  for (auto* sub : {extract, evaluate_cmd, sweep}) {
    sub->add_option("--submissions", config.submissions, "Submission log CSV");
    sub->add_option("--gradebook", config.gradebook, "Gradebook CSV");
    sub->add_option("--thresholds", thresholds_text, "Variance thresholds t_perf,t_subs (default 0.02,0.05)");
  }
  for (auto* sub : {evaluate_cmd, sweep}) {
    sub->add_option("--model", config.models, "svm|linreg|svr|tree|nb|knn|random|majority")->delimiter(',');
    sub->add_flag("--normalize", config.normalize, "Min-max normalize kept columns");
    sub->add_flag("--global-prep", config.global_prep, "Fit selection/normalization once on all rows");
    sub->add_option("--C", config.C, "SVM/SVR regularization");
    sub->add_option("--k", config.k, "KNN neighbours");
    sub->add_option("--epsilon", config.epsilon, "SVR insensitivity");
  }
  evaluate_cmd->add_option("--out", config.out, "Report path (default <out-dir>/report.md)");
  evaluate_cmd->add_flag("--sweep", config.sweep, "Pick thresholds by sweep before evaluating");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (!thresholds_text.empty()) config.thresholds = parse_thresholds(thresholds_text);
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) {
        err << "error: config file not found: " << config_file << '\n';
        return kInputError;
      }
      const auto json = nlohmann::json::parse(in);
      CLI::App* active = app.get_subcommands().front();
      apply_config_json(config, json, [&](const std::string& key) {
        const std::string flag = "--" + key;
        for (CLI::App* scope : {active, &app}) {
          try {
            if (scope->get_option(flag)->count() > 0) return true;
          } catch (const CLI::OptionNotFound&) {
          }
        }
        return false;
      });
    }
    for (const auto& name : config.models) model_spec_from_name(name);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (synth->parsed()) return cmd_synth(config, out, err);
    if (extract->parsed()) return cmd_extract(config, out, err);
    if (evaluate_cmd->parsed()) return cmd_evaluate(config, out, err);
    if (sweep->parsed()) return cmd_sweep(config, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace gradepred::cli
