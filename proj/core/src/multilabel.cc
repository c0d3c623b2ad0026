#include "cctm/multilabel.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "cctm/error.h"
#include "cctm/parallel.h"
#include "json_util.h"

namespace cctm {
namespace {

using detail::Json;

// ------------------------------------------------------------ serialize

Json TreeToJson(const DecisionTreeModel& tree) {
  Json nodes = Json::array();
  for (const TreeNode& node : tree.nodes) {
    Json entry = Json::object();
    if (node.is_leaf()) {
      entry["p"] = node.pos_fraction;
      entry["c"] = node.positive;
    } else {
      entry["f"] = node.feature;
      entry["t"] = node.threshold;
      entry["l"] = node.left;
      entry["r"] = node.right;
    }
    nodes.push_back(std::move(entry));
  }
  Json out = Json::object();
  out["type"] = "tree";
  out["max_depth"] = tree.max_depth;
  out["min_leaf"] = tree.min_leaf;
  out["nodes"] = std::move(nodes);
  return out;
}

Json ClassifierToJson(const BinaryClassifier& classifier) {
  if (const auto* nb = std::get_if<NaiveBayesModel>(&classifier)) {
    Json out = Json::object();
    out["type"] = "nb";
    out["alpha"] = nb->smoothing_alpha;
    out["vocab_size"] = nb->vocab_size_at_train;
    out["class_log_prior"] = {nb->class_log_prior[0], nb->class_log_prior[1]};
    Json ll = Json::object();
    for (const auto& [id, pair] : nb->feature_log_likelihood) ll[id] = {pair[0], pair[1]};
    out["feature_log_likelihood"] = std::move(ll);
    return out;
  }
  if (const auto* tree = std::get_if<DecisionTreeModel>(&classifier)) return TreeToJson(*tree);
  const auto& forest = std::get<RandomForestModel>(classifier);
  Json out = Json::object();
  out["type"] = "forest";
  out["n_trees"] = forest.n_trees;
  out["feature_subsample"] =
      forest.feature_subsample == FeatureSubsample::kSqrt ? "sqrt" : "all";
  out["bootstrap"] = forest.bootstrap;
  out["bootstrap_seed"] = forest.bootstrap_seed;
  Json trees = Json::array();
  for (const DecisionTreeModel& tree : forest.trees) trees.push_back(TreeToJson(tree));
  out["trees"] = std::move(trees);
  return out;
}

// ---------------------------------------------------------------- parse

[[noreturn]] void Malformed(const std::string& what) {
  throw DataError("MalformedModel", what);
}

const Json& At(const Json& object, const char* key, const std::string& path) {
  if (!object.is_object() || !object.contains(key)) {
    Malformed(path + "." + key + " is missing");
  }
  return object[key];
}

std::string String(const Json& object, const char* key, const std::string& path) {
  const Json& v = At(object, key, path);
  if (!v.is_string()) Malformed(path + "." + key + " must be a string");
  return v.get<std::string>();
}

double Number(const Json& v, const std::string& path) {
  if (!v.is_number()) Malformed(path + " must be a number");
  return v.get<double>();
}

double Number(const Json& object, const char* key, const std::string& path) {
  return Number(At(object, key, path), path + "." + key);
}

long long Integer(const Json& object, const char* key, const std::string& path) {
  const Json& v = At(object, key, path);
  if (!v.is_number_integer()) Malformed(path + "." + key + " must be an integer");
  return v.get<long long>();
}

std::uint64_t Unsigned(const Json& object, const char* key, const std::string& path) {
  const Json& v = At(object, key, path);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    Malformed(path + "." + key + " must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

bool Bool(const Json& object, const char* key, const std::string& path) {
  const Json& v = At(object, key, path);
  if (!v.is_boolean()) Malformed(path + "." + key + " must be a boolean");
  return v.get<bool>();
}

const Json& Array(const Json& object, const char* key, const std::string& path) {
  const Json& v = At(object, key, path);
  if (!v.is_array()) Malformed(path + "." + key + " must be an array");
  return v;
}

DecisionTreeModel TreeFromJson(const Json& doc, const std::string& path) {
  DecisionTreeModel tree;
  tree.max_depth = static_cast<int>(Integer(doc, "max_depth", path));
  tree.min_leaf = static_cast<int>(Integer(doc, "min_leaf", path));
  const Json& nodes = Array(doc, "nodes", path);
  if (nodes.empty()) Malformed(path + ".nodes is empty");
  const long long n = static_cast<long long>(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string at = path + ".nodes[" + std::to_string(i) + "]";
    const Json& entry = nodes[i];
    TreeNode node;
    if (entry.is_object() && entry.contains("f")) {
      node.feature = String(entry, "f", at);
      node.threshold = Number(entry, "t", at);
      const long long l = Integer(entry, "l", at);
      const long long r = Integer(entry, "r", at);
      // Children follow their parent, which rules out cycles.
      if (l <= static_cast<long long>(i) || r <= static_cast<long long>(i) || l >= n || r >= n) {
        Malformed(at + " has an invalid child index");
      }
      node.left = static_cast<int>(l);
      node.right = static_cast<int>(r);
    } else {
      node.pos_fraction = Number(entry, "p", at);
      if (node.pos_fraction < 0.0 || node.pos_fraction > 1.0) {
        Malformed(at + ".p must lie in [0, 1]");
      }
      node.positive = Bool(entry, "c", at);
    }
    tree.nodes.push_back(std::move(node));
  }
  return tree;
}

BinaryClassifier ClassifierFromJson(const Json& doc, const std::string& path) {
  const std::string type = String(doc, "type", path);
  if (type == "nb") {
    NaiveBayesModel nb;
    nb.smoothing_alpha = Number(doc, "alpha", path);
    nb.vocab_size_at_train = static_cast<int>(Integer(doc, "vocab_size", path));
    const Json& prior = Array(doc, "class_log_prior", path);
    if (prior.size() != 2) Malformed(path + ".class_log_prior must have two entries");
    nb.class_log_prior = {Number(prior[0], path + ".class_log_prior[0]"),
                          Number(prior[1], path + ".class_log_prior[1]")};
    const Json& ll = At(doc, "feature_log_likelihood", path);
    if (!ll.is_object()) Malformed(path + ".feature_log_likelihood must be an object");
    for (const auto& [id, pair] : ll.items()) {
      const std::string at = path + ".feature_log_likelihood." + id;
      if (!pair.is_array() || pair.size() != 2) Malformed(at + " must have two entries");
      nb.feature_log_likelihood.emplace(id, std::array<double, 2>{Number(pair[0], at),
                                                                  Number(pair[1], at)});
    }
    return nb;
  }
  if (type == "tree") return TreeFromJson(doc, path);
  if (type == "forest") {
    RandomForestModel forest;
    forest.n_trees = static_cast<int>(Integer(doc, "n_trees", path));
    const std::string subsample = String(doc, "feature_subsample", path);
    if (subsample == "sqrt") {
      forest.feature_subsample = FeatureSubsample::kSqrt;
    } else if (subsample == "all") {
      forest.feature_subsample = FeatureSubsample::kAll;
    } else {
      Malformed(path + ".feature_subsample must be sqrt or all");
    }
    forest.bootstrap = Bool(doc, "bootstrap", path);
    forest.bootstrap_seed = Unsigned(doc, "bootstrap_seed", path);
    const Json& trees = Array(doc, "trees", path);
    for (std::size_t i = 0; i < trees.size(); ++i) {
      forest.trees.push_back(TreeFromJson(trees[i], path + ".trees[" + std::to_string(i) + "]"));
    }
    if (forest.trees.empty() || static_cast<int>(forest.trees.size()) != forest.n_trees) {
      Malformed(path + ".trees does not hold n_trees trees");
    }
    return forest;
  }
  Malformed(path + ".type \"" + type + "\" is not nb, tree or forest");
}

}  // namespace

std::string_view AlgorithmName(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kNaiveBayes:
      return "nb";
    case Algorithm::kTree:
      return "tree";
    case Algorithm::kForest:
      return "forest";
  }
  return "forest";
}

Algorithm ParseAlgorithm(std::string_view name) {
  if (name == "nb") return Algorithm::kNaiveBayes;
  if (name == "tree") return Algorithm::kTree;
  if (name == "forest") return Algorithm::kForest;
  throw ConfigError("InvalidArgument", "unknown algorithm \"" + std::string(name) +
                                           "\" (expected nb, tree or forest)");
}

double Score(const BinaryClassifier& classifier, const FeatureVector& features) {
  return std::visit(
      [&](const auto& model) -> double {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, NaiveBayesModel>) {
          return PredictProbaNb(model, features);
        } else {
          return model.PredictProba(features);
        }
      },
      classifier);
}

bool PriorsOnly(const BinaryClassifier& classifier, const FeatureVector& features) {
  if (const auto* nb = std::get_if<NaiveBayesModel>(&classifier)) {
    for (const auto& [id, weight] : features.entries()) {
      if (nb->feature_log_likelihood.contains(id)) return false;
    }
    return true;
  }
  return features.empty();
}

bool DecidePositive(double score, double threshold, bool priors_only) {
  if (priors_only && score == 0.5) return false;
  return score >= threshold;
}

BinaryClassifier TrainBinary(std::span<const Example> data, const TrainOptions& options,
                             std::uint64_t seed) {
  switch (options.algorithm) {
    case Algorithm::kNaiveBayes:
      return TrainNaiveBayes(data, options.nb_alpha);
    case Algorithm::kTree:
      return TrainTree(data, options.tree);
    case Algorithm::kForest:
      return TrainForest(data, options.forest, seed);
  }
  throw ConfigError("InvalidArgument", "unknown algorithm");
}

bool MultiLabelModel::Covers(Language language) const {
  return std::find(languages.begin(), languages.end(), language) != languages.end();
}

MultiLabelModel TrainMultiLabel(std::span<const LabeledComment> labeled,
                                const Taxonomy& taxonomy, const PatternLibrary& patterns,
                                const TrainOptions& options) {
  if (labeled.size() < 2) {
    throw DataError("EmptyDataset", "training needs at least two comments, got " +
                                        std::to_string(labeled.size()));
  }
  if (!(options.threshold > 0.0 && options.threshold < 1.0)) {
    throw ConfigError("InvalidArgument", "threshold must lie in (0, 1)");
  }

  MultiLabelModel model;
  model.algorithm = options.algorithm;
  model.feature_mode = options.feature_mode;
  model.taxonomy_version = taxonomy.version();
  model.pattern_library_version = patterns.version();
  model.preprocessing_chain = std::string(kPreprocessingChain);
  model.threshold = options.threshold;
  model.train_seed = options.seed;
  model.n_training_comments = static_cast<int>(labeled.size());
  for (const LabeledComment& lc : labeled) model.languages.push_back(lc.comment.language);
  std::sort(model.languages.begin(), model.languages.end());
  model.languages.erase(std::unique(model.languages.begin(), model.languages.end()),
                        model.languages.end());

  std::vector<PreparedText> prepared(labeled.size());
  ParallelFor(labeled.size(), options.num_threads, [&](std::size_t i) {
    prepared[i] = PrepareText(labeled[i].comment.raw_text, patterns);
  });
  std::vector<TokenStream> corpus;
  corpus.reserve(prepared.size());
  for (const PreparedText& p : prepared) corpus.push_back(p.terms);
  model.vocabulary = BuildVocabulary(corpus, options.min_df);
  std::vector<FeatureVector> features(labeled.size());
  ParallelFor(labeled.size(), options.num_threads, [&](std::size_t i) {
    features[i] = Featurize(prepared[i], model.vocabulary, options.feature_mode);
  });

  std::vector<std::size_t> in_scope;
  for (std::size_t c = 0; c < taxonomy.categories().size(); ++c) {
    const Category& category = taxonomy.categories()[c];
    if (std::any_of(model.languages.begin(), model.languages.end(),
                    [&](Language l) { return category.AppliesTo(l); })) {
      in_scope.push_back(c);
    }
  }

  std::vector<std::optional<BinaryClassifier>> trained(in_scope.size());
  std::vector<std::string> skip_reason(in_scope.size());
  // Forests parallelise internally; other learners parallelise per category.
  const bool outer = options.algorithm != Algorithm::kForest;
  ParallelFor(in_scope.size(), outer ? options.num_threads : 1, [&](std::size_t slot) {
    const std::size_t c = in_scope[slot];
    const std::string& name = taxonomy.categories()[c].name;
    std::vector<bool> labels(labeled.size());
    std::size_t positives = 0;
    for (std::size_t i = 0; i < labeled.size(); ++i) {
      labels[i] = labeled[i].HasLabel(name);
      positives += labels[i] ? 1 : 0;
    }
    if (positives == 0 || positives == labeled.size()) {
      skip_reason[slot] = positives == 0 ? "no positive examples" : "no negative examples";
      return;
    }
    const std::uint64_t seed = options.seed + c;
    std::vector<Example> data;
    for (std::size_t i : BalanceIndices(labels, seed)) data.push_back({features[i], labels[i]});
    TrainOptions local = options;
    local.forest.num_threads = outer ? 1 : options.num_threads;
    trained[slot] = TrainBinary(data, local, seed);
  });

  for (std::size_t slot = 0; slot < in_scope.size(); ++slot) {
    const std::string& name = taxonomy.categories()[in_scope[slot]].name;
    if (trained[slot]) {
      model.per_category.emplace_back(name, std::move(*trained[slot]));
    } else {
      model.skipped_categories.push_back({name, skip_reason[slot]});
    }
  }
  return model;
}

Classification Classify(const MultiLabelModel& model, const PatternLibrary& patterns,
                        const ClassComment& comment) {
  if (!model.Covers(comment.language)) {
    throw DataError("LanguageMismatch", "comment " + comment.id + " is " +
                                            std::string(LanguageName(comment.language)) +
                                            " but the model covers no such language");
  }
  if (model.feature_mode == FeatureMode::kNlpPlusTfidf &&
      patterns.version() != model.pattern_library_version) {
    throw ConfigError("PatternLibraryMismatch",
                      "model was trained with pattern library " +
                          model.pattern_library_version + ", got " + patterns.version());
  }
  const FeatureVector features =
      Featurize(PrepareText(comment.raw_text, patterns), model.vocabulary, model.feature_mode);
  Classification out;
  out.comment_id = comment.id;
  for (const auto& [name, classifier] : model.per_category) {
    CategoryScore score;
    score.category = name;
    score.score = Score(classifier, features);
    score.included =
        DecidePositive(score.score, model.threshold, PriorsOnly(classifier, features));
    if (score.included) out.categories.push_back(name);
    out.scores.push_back(std::move(score));
  }
  return out;
}

std::string ClassificationToJsonLine(const Classification& result) {
  Json doc = Json::object();
  doc["id"] = result.comment_id;
  doc["categories"] = result.categories;
  Json scores = Json::object();
  for (const CategoryScore& s : result.scores) scores[s.category] = s.score;
  doc["scores"] = std::move(scores);
  return detail::Dump(doc);
}

std::string SerializeModel(const MultiLabelModel& model) {
  Json doc = Json::object();
  doc["format_version"] = model.format_version;
  doc["algorithm"] = AlgorithmName(model.algorithm);
  doc["feature_mode"] = FeatureModeName(model.feature_mode);
  doc["taxonomy_version"] = model.taxonomy_version;
  doc["pattern_library_version"] = model.pattern_library_version;
  doc["preprocessing_chain_descriptor"] = model.preprocessing_chain;
  Json languages = Json::array();
  for (Language l : model.languages) languages.push_back(LanguageName(l));
  doc["languages"] = std::move(languages);
  Json vocab = Json::object();
  vocab["n_docs"] = model.vocabulary.n_docs;
  vocab["min_df"] = model.vocabulary.min_df;
  vocab["terms"] = model.vocabulary.terms;
  vocab["doc_freq"] = model.vocabulary.doc_freq;
  doc["vocabulary"] = std::move(vocab);
  doc["threshold"] = model.threshold;
  doc["train_seed"] = model.train_seed;
  doc["n_training_comments"] = model.n_training_comments;
  Json skipped = Json::array();
  for (const SkippedCategory& s : model.skipped_categories) {
    skipped.push_back(Json{{"category", s.name}, {"reason", s.reason}});
  }
  doc["skipped_categories"] = std::move(skipped);
  Json per_category = Json::array();
  for (const auto& [name, classifier] : model.per_category) {
    per_category.push_back(Json{{"category", name}, {"classifier", ClassifierToJson(classifier)}});
  }
  doc["per_category"] = std::move(per_category);
  return detail::Dump(doc) + "\n";
}

MultiLabelModel ParseModel(std::string_view json_text) {
  const Json doc = detail::ParseJson(json_text, false, "MalformedModel", "model");
  if (!doc.is_object()) Malformed("model must be a JSON object");
  const std::string root = "$";
  MultiLabelModel model;
  model.format_version = static_cast<int>(Integer(doc, "format_version", root));
  if (model.format_version != 1) {
    Malformed("unsupported format_version " + std::to_string(model.format_version));
  }
  try {
    model.algorithm = ParseAlgorithm(String(doc, "algorithm", root));
    model.feature_mode = ParseFeatureMode(String(doc, "feature_mode", root));
  } catch (const Error& e) {
    if (e.kind() == "MalformedModel") throw;
    Malformed(e.what());
  }
  model.taxonomy_version = String(doc, "taxonomy_version", root);
  model.pattern_library_version = String(doc, "pattern_library_version", root);
  model.preprocessing_chain = String(doc, "preprocessing_chain_descriptor", root);
  if (model.preprocessing_chain != kPreprocessingChain) {
    Malformed("preprocessing chain \"" + model.preprocessing_chain +
              "\" differs from this build's \"" + std::string(kPreprocessingChain) + "\"");
  }
  for (const Json& l : Array(doc, "languages", root)) {
    const auto parsed = l.is_string() ? ParseLanguage(l.get<std::string>()) : std::nullopt;
    if (!parsed) Malformed("$.languages holds an unknown language");
    model.languages.push_back(*parsed);
  }

  const Json& vocab = At(doc, "vocabulary", root);
  const std::string vpath = "$.vocabulary";
  model.vocabulary.n_docs = static_cast<int>(Integer(vocab, "n_docs", vpath));
  model.vocabulary.min_df = static_cast<int>(Integer(vocab, "min_df", vpath));
  for (const Json& t : Array(vocab, "terms", vpath)) {
    if (!t.is_string()) Malformed(vpath + ".terms must hold strings");
    model.vocabulary.terms.push_back(t.get<std::string>());
  }
  for (const Json& d : Array(vocab, "doc_freq", vpath)) {
    if (!d.is_number_integer()) Malformed(vpath + ".doc_freq must hold integers");
    model.vocabulary.doc_freq.push_back(d.get<int>());
  }
  if (model.vocabulary.terms.size() != model.vocabulary.doc_freq.size() ||
      !std::is_sorted(model.vocabulary.terms.begin(), model.vocabulary.terms.end())) {
    Malformed(vpath + " terms must be sorted and parallel to doc_freq");
  }

  model.threshold = Number(doc, "threshold", root);
  model.train_seed = Unsigned(doc, "train_seed", root);
  model.n_training_comments = static_cast<int>(Integer(doc, "n_training_comments", root));
  const Json& skipped = Array(doc, "skipped_categories", root);
  for (std::size_t i = 0; i < skipped.size(); ++i) {
    const std::string at = "$.skipped_categories[" + std::to_string(i) + "]";
    model.skipped_categories.push_back(
        {String(skipped[i], "category", at), String(skipped[i], "reason", at)});
  }
  const Json& per_category = Array(doc, "per_category", root);
  for (std::size_t i = 0; i < per_category.size(); ++i) {
    const std::string at = "$.per_category[" + std::to_string(i) + "]";
    model.per_category.emplace_back(
        String(per_category[i], "category", at),
        ClassifierFromJson(At(per_category[i], "classifier", at), at + ".classifier"));
  }
  return model;
}

}  // namespace cctm
