#include "cli.h"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cctm/adherence.h"
#include "cctm/error.h"
#include "cctm/evaluation.h"
#include "cctm/extraction.h"
#include "cctm/multilabel.h"
#include "cctm/synthetic.h"

namespace cctm::cli {
namespace {

namespace fs = std::filesystem;

struct RunConfig {
  std::vector<std::string> inputs;
  std::string lang;
  std::string taxonomy;
  std::string patterns;
  std::string algo = "forest";
  std::string features = "nlp+tfidf";
  int k = 10;
  std::uint64_t seed = 42;
  double threshold = 0.5;
  std::string out;
  std::string guideline;
  std::string model;
  std::string table;
  int n_trees = 100;
  int min_df = 2;
  unsigned threads = 0;
  int n_per_category = 200;
  double noise = 0.1;
};

std::string ReadFile(const std::string& path, bool config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw config ? ConfigError("IoError", "cannot read " + path)
                 : DataError("IoError", "cannot read " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Writes through a temporary sibling and renames it into place, so readers
// never observe a partial file.
void WriteAtomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  fs::path temp = target;
  temp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream file(temp, std::ios::binary | std::ios::trunc);
    if (!file) throw DataError("IoError", "cannot write " + temp.string());
    file << content;
    file.flush();
    if (!file) throw DataError("IoError", "failed writing " + temp.string());
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) {
    fs::remove(temp, ec);
    throw DataError("IoError", "cannot move output into " + path);
  }
}

void Emit(const RunConfig& config, const std::string& content, std::ostream& out) {
  if (config.out.empty()) {
    out << content;
  } else {
    WriteAtomic(config.out, content);
  }
}

std::optional<Language> LanguageOverride(const RunConfig& config) {
  if (config.lang.empty()) return std::nullopt;
  const auto language = ParseLanguage(config.lang);
  if (!language) {
    throw ConfigError("InvalidArgument", "unknown language \"" + config.lang +
                                             "\" (expected java, python or smalltalk)");
  }
  return language;
}

Taxonomy LoadTaxonomyOrDefault(const RunConfig& config) {
  return config.taxonomy.empty() ? DefaultTaxonomy() : LoadTaxonomy(config.taxonomy);
}

PatternLibrary LoadPatternsOrDefault(const RunConfig& config) {
  return config.patterns.empty() ? DefaultPatternLibrary() : LoadPatternLibrary(config.patterns);
}

TrainOptions MakeTrainOptions(const RunConfig& config) {
  TrainOptions options;
  options.algorithm = ParseAlgorithm(config.algo);
  options.feature_mode = ParseFeatureMode(config.features);
  options.seed = config.seed;
  options.threshold = config.threshold;
  options.min_df = config.min_df;
  options.num_threads = config.threads;
  options.forest.n_trees = config.n_trees;
  options.forest.num_threads = config.threads;
  if (config.n_trees < 1) throw ConfigError("InvalidArgument", "--trees must be at least 1");
  if (!(config.threshold > 0.0 && config.threshold < 1.0)) {
    throw ConfigError("InvalidArgument", "--threshold must lie in (0, 1)");
  }
  return options;
}

// Reads every source file reachable from the inputs; unreadable files and
// extraction failures become diagnostics.
std::vector<SourceFile> ReadSources(const RunConfig& config, std::ostream& err) {
  if (config.inputs.empty()) throw ConfigError("InvalidArgument", "no input paths given");
  const auto language = LanguageOverride(config);
  std::vector<std::string> diagnostics;
  std::vector<fs::path> inputs(config.inputs.begin(), config.inputs.end());
  std::vector<SourceFile> files;
  for (const SourceEntry& entry : CollectSourceFiles(inputs, language, &diagnostics)) {
    try {
      SourceFile file = ReadSourceFile(entry.path, language, entry.display_path);
      if (file.replaced_bytes > 0) {
        err << "note: " << file.path << ": replaced " << file.replaced_bytes
            << " invalid UTF-8 byte(s)\n";
      }
      if (file.language == Language::kUnknown) {
        err << "note: " << file.path << ": unknown language, skipped\n";
        continue;
      }
      files.push_back(std::move(file));
    } catch (const Error& e) {
      err << "note: " << entry.display_path << ": " << e.what() << "\n";
    }
  }
  for (const std::string& d : diagnostics) err << "note: " << d << "\n";
  return files;
}

int CmdExtract(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::string jsonl;
  for (const SourceFile& file : ReadSources(config, err)) {
    try {
      for (const ClassComment& c : ExtractClassComments(file)) {
        jsonl += ToJsonLine(c);
        jsonl.push_back('\n');
      }
    } catch (const Error& e) {
      err << "note: " << file.path << ": " << e.what() << "\n";
    }
  }
  Emit(config, jsonl, out);
  return kExitOk;
}

int CmdTrain(const RunConfig& config, std::ostream& out) {
  const Taxonomy taxonomy = LoadTaxonomyOrDefault(config);
  const PatternLibrary patterns = LoadPatternsOrDefault(config);
  const TrainOptions options = MakeTrainOptions(config);
  const auto labeled = LoadLabeledDataset(config.inputs.at(0), taxonomy);
  Emit(config, SerializeModel(TrainMultiLabel(labeled, taxonomy, patterns, options)), out);
  return kExitOk;
}

int CmdEvaluate(const RunConfig& config, std::ostream& out) {
  const Taxonomy taxonomy = LoadTaxonomyOrDefault(config);
  const PatternLibrary patterns = LoadPatternsOrDefault(config);
  const TrainOptions options = MakeTrainOptions(config);
  const auto labeled = LoadLabeledDataset(config.inputs.at(0), taxonomy);
  const EvalReport report = CrossValidate(labeled, taxonomy, patterns, options, config.k);
  if (config.out.empty()) {
    out << ReportToTable(report);
  } else {
    WriteAtomic(config.out, ReportToJson(report));
  }
  if (!config.table.empty()) WriteAtomic(config.table, ReportToTable(report));
  return kExitOk;
}

MultiLabelModel LoadModel(const RunConfig& config) {
  if (config.model.empty()) throw ConfigError("InvalidArgument", "--model is required");
  return ParseModel(ReadFile(config.model, false));
}

int CmdClassify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const MultiLabelModel model = LoadModel(config);
  const PatternLibrary patterns = LoadPatternsOrDefault(config);
  std::string jsonl;
  for (const SourceFile& file : ReadSources(config, err)) {
    std::vector<ClassComment> comments;
    try {
      comments = ExtractClassComments(file);
    } catch (const Error& e) {
      err << "note: " << file.path << ": " << e.what() << "\n";
      continue;
    }
    for (const ClassComment& c : comments) {
      jsonl += ClassificationToJsonLine(Classify(model, patterns, c));
      jsonl.push_back('\n');
    }
  }
  Emit(config, jsonl, out);
  return kExitOk;
}

int CmdCheck(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const MultiLabelModel model = LoadModel(config);
  const Taxonomy taxonomy = LoadTaxonomyOrDefault(config);
  const PatternLibrary patterns = LoadPatternsOrDefault(config);
  GuidelineSpec spec;
  if (!config.guideline.empty()) {
    spec = LoadGuidelineSpec(config.guideline, taxonomy);
  } else if (const auto language = LanguageOverride(config)) {
    spec = DefaultGuidelineSpec(*language, taxonomy);
  } else if (model.languages.size() == 1) {
    spec = DefaultGuidelineSpec(model.languages[0], taxonomy);
  } else {
    throw ConfigError("InvalidArgument",
                      "pass --guideline or --lang to choose which guideline to check");
  }
  RunConfig sources = config;
  if (sources.lang.empty()) sources.lang = std::string(LanguageName(spec.language));
  const std::vector<SourceFile> files = ReadSources(sources, err);
  const AdherenceReport report = CheckAdherence(files, model, patterns, taxonomy, spec);
  out << AdherenceToText(report);
  if (!config.out.empty()) WriteAtomic(config.out, AdherenceToJson(report));
  return report.has_violations() ? kExitViolation : kExitOk;
}

int CmdGenSynthetic(const RunConfig& config, std::ostream& out) {
  SyntheticOptions options;
  options.n_per_category = config.n_per_category;
  options.noise_rate = config.noise;
  options.seed = config.seed;
  const Taxonomy taxonomy = LoadTaxonomyOrDefault(config);
  Emit(config, SerializeLabeledDataset(GenerateSynthetic(options, taxonomy)), out);
  return kExitOk;
}

int CmdCompare(const RunConfig& config, std::ostream& out) {
  if (config.inputs.size() != 2) {
    throw ConfigError("InvalidArgument", "compare takes exactly two report files");
  }
  const EvalReport a = ParseReport(ReadFile(config.inputs[0], false));
  const EvalReport b = ParseReport(ReadFile(config.inputs[1], false));
  Emit(config, ComparisonToTable(CompareModes(a, b)), out);
  return kExitOk;
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Class comment extraction, classification and guideline checks", "cctm"};
  app.require_subcommand(1);
  RunConfig config;

  auto add_model_options = [&](CLI::App* cmd) {
    cmd->add_option("--taxonomy", config.taxonomy, "Taxonomy JSON (default: built-in)");
    cmd->add_option("--patterns", config.patterns, "Pattern library JSON (default: built-in)");
    cmd->add_option("--algo", config.algo, "nb, tree or forest")
        ->check(CLI::IsMember({"nb", "tree", "forest"}));
    cmd->add_option("--features", config.features, "tfidf or nlp+tfidf")
        ->check(CLI::IsMember({"tfidf", "nlp+tfidf"}));
    cmd->add_option("--seed", config.seed, "Random seed");
    cmd->add_option("--threshold", config.threshold, "Decision threshold in (0, 1)");
    cmd->add_option("--trees", config.n_trees, "Trees per forest");
    cmd->add_option("--min-df", config.min_df, "Minimum document frequency");
    cmd->add_option("--threads", config.threads, "Worker threads (0 = all cores)");
  };

  CLI::App* extract = app.add_subcommand("extract", "Extract class comments as JSON-Lines");
  extract->add_option("paths", config.inputs, "Files or directories")->required();
  extract->add_option("--lang", config.lang, "Force java, python or smalltalk");
  extract->add_option("--out", config.out, "Output file (default: stdout)");

  CLI::App* train = app.add_subcommand("train", "Train a multi-label model");
  train->add_option("dataset", config.inputs, "Labeled JSON-Lines dataset")
      ->required()
      ->expected(1);
  add_model_options(train);
  train->add_option("--out", config.out, "Model file (default: stdout)");

  CLI::App* evaluate = app.add_subcommand("evaluate", "Stratified k-fold cross-validation");
  evaluate->add_option("dataset", config.inputs, "Labeled JSON-Lines dataset")
      ->required()
      ->expected(1);
  add_model_options(evaluate);
  evaluate->add_option("--k", config.k, "Number of folds");
  evaluate->add_option("--out", config.out, "JSON report file (default: table on stdout)");
  evaluate->add_option("--table", config.table, "Also write the text table here");

  CLI::App* classify = app.add_subcommand("classify", "Classify the comments of source files");
  classify->add_option("paths", config.inputs, "Files or directories")->required();
  classify->add_option("--model", config.model, "Model file")->required();
  classify->add_option("--patterns", config.patterns, "Pattern library JSON");
  classify->add_option("--lang", config.lang, "Force java, python or smalltalk");
  classify->add_option("--out", config.out, "Output file (default: stdout)");

  CLI::App* check = app.add_subcommand("check", "Check comments against a guideline");
  check->add_option("paths", config.inputs, "Files or directories")->required();
  check->add_option("--model", config.model, "Model file")->required();
  check->add_option("--guideline", config.guideline, "Guideline JSON");
  check->add_option("--taxonomy", config.taxonomy, "Taxonomy JSON");
  check->add_option("--patterns", config.patterns, "Pattern library JSON");
  check->add_option("--lang", config.lang, "Language whose default guideline applies");
  check->add_option("--out", config.out, "JSON report file");

  CLI::App* gen = app.add_subcommand("gen-synthetic", "Generate the synthetic labeled corpus");
  gen->add_option("--n", config.n_per_category, "Comments per category");
  gen->add_option("--noise", config.noise, "Fraction of comments without signature words");
  gen->add_option("--seed", config.seed, "Random seed");
  gen->add_option("--taxonomy", config.taxonomy, "Taxonomy JSON");
  gen->add_option("--out", config.out, "Output file (default: stdout)");

  CLI::App* compare = app.add_subcommand("compare", "Compare two evaluation reports (b - a)");
  compare->add_option("reports", config.inputs, "Report A and report B")
      ->required()
      ->expected(2);
  compare->add_option("--out", config.out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*extract) return CmdExtract(config, out, err);
    if (*train) return CmdTrain(config, out);
    if (*evaluate) return CmdEvaluate(config, out);
    if (*classify) return CmdClassify(config, out, err);
    if (*check) return CmdCheck(config, out, err);
    if (*gen) return CmdGenSynthetic(config, out);
    if (*compare) return CmdCompare(config, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.error_class() == ErrorClass::kConfig ? kExitConfig : kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitConfig;
}

}  // namespace cctm::cli
