#include "cctm/evaluation.h"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include "cctm/error.h"
#include "cctm/parallel.h"
#include "cctm/random.h"
#include "json_util.h"

namespace cctm {
namespace {

using detail::Json;

double Ratio(long num, long den) { return den == 0 ? 0.0 : static_cast<double>(num) / den; }

std::string Fixed(double value, int digits = 4) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << value;
  return out.str();
}

std::string Signed(double value) {
  return (value >= 0.0 ? "+" : "") + Fixed(value);
}

double PopulationVariance(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += (v - mean) * (v - mean);
  return sum / static_cast<double>(values.size());
}

[[noreturn]] void Malformed(const std::string& what) {
  throw DataError("MalformedReport", what);
}

}  // namespace

FoldAssignment StratifiedKFold(const std::vector<bool>& labels, int k, std::uint64_t seed) {
  if (k < 2) throw DataError("TooFewInstances", "k must be at least 2, got " + std::to_string(k));
  if (labels.size() < static_cast<std::size_t>(k)) {
    throw DataError("TooFewInstances", "cannot split " + std::to_string(labels.size()) +
                                           " instances into " + std::to_string(k) + " folds");
  }
  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives;
  for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] ? positives : negatives).push_back(i);
  Rng rng(seed);
  rng.Shuffle(positives);
  rng.Shuffle(negatives);

  FoldAssignment out;
  out.k = k;
  out.fold.assign(labels.size(), 0);
  std::size_t next = 0;
  for (std::size_t i : positives) out.fold[i] = static_cast<int>(next++ % k);
  for (std::size_t i : negatives) out.fold[i] = static_cast<int>(next++ % k);
  return out;
}

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  tn += other.tn;
  return *this;
}

double Precision(const ConfusionCounts& c) { return Ratio(c.tp, c.tp + c.fp); }
double Recall(const ConfusionCounts& c) { return Ratio(c.tp, c.tp + c.fn); }

double F1(const ConfusionCounts& c) {
  // 2PR/(P+R) simplifies to 2tp/(2tp+fp+fn), which avoids rounding twice.
  return Ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
}

bool PrecisionUndefined(const ConfusionCounts& c) { return c.tp + c.fp == 0; }
bool RecallUndefined(const ConfusionCounts& c) { return c.tp + c.fn == 0; }

std::string DatasetHash(std::span<const LabeledComment> labeled) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto feed = [&](std::string_view bytes) {
    for (unsigned char b : bytes) {
      hash ^= b;
      hash *= 0x100000001b3ULL;
    }
  };
  for (const LabeledComment& lc : labeled) {
    feed(ToJsonLine(lc));
    feed("\n");
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

FoldTraining PrepareFoldTraining(std::span<const PreparedText> prepared,
                                 const std::vector<bool>& labels,
                                 std::span<const std::size_t> train, int min_df,
                                 std::uint64_t seed) {
  std::vector<TokenStream> corpus;
  std::vector<bool> train_labels;
  corpus.reserve(train.size());
  train_labels.reserve(train.size());
  for (std::size_t i : train) {
    corpus.push_back(prepared[i].terms);
    train_labels.push_back(labels[i]);
  }
  FoldTraining fold;
  fold.vocabulary = BuildVocabulary(corpus, min_df);
  for (std::size_t b : BalanceIndices(train_labels, seed)) fold.rows.push_back(train[b]);
  return fold;
}

EvalReport CrossValidate(std::span<const LabeledComment> labeled, const Taxonomy& taxonomy,
                         const PatternLibrary& patterns, const TrainOptions& options, int k) {
  if (k < 2) throw DataError("TooFewInstances", "k must be at least 2, got " + std::to_string(k));
  if (labeled.size() < static_cast<std::size_t>(k)) {
    throw DataError("TooFewInstances", "dataset has " + std::to_string(labeled.size()) +
                                           " comments, fewer than k = " + std::to_string(k));
  }

  EvalReport report;
  ConfigFingerprint& fp = report.fingerprint;
  fp.algorithm = AlgorithmName(options.algorithm);
  fp.feature_mode = FeatureModeName(options.feature_mode);
  fp.k = k;
  fp.seed = options.seed;
  fp.threshold = options.threshold;
  fp.taxonomy_version = taxonomy.version();
  fp.pattern_library_version = patterns.version();
  fp.preprocessing_chain = std::string(kPreprocessingChain);
  fp.dataset_hash = DatasetHash(labeled);
  fp.n_comments = static_cast<int>(labeled.size());

  const std::size_t n = labeled.size();
  std::vector<Language> languages;
  for (const LabeledComment& lc : labeled) languages.push_back(lc.comment.language);

  // Per-comment preprocessing depends on nothing but the comment itself.
  std::vector<PreparedText> prepared(n);
  ParallelFor(n, options.num_threads, [&](std::size_t i) {
    prepared[i] = PrepareText(labeled[i].comment.raw_text, patterns);
  });

  struct Job {
    std::size_t category;  // index into report.per_category
    int fold;
  };
  std::vector<std::vector<bool>> labels;
  std::vector<FoldAssignment> folds;
  std::vector<std::uint64_t> seeds;
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < taxonomy.categories().size(); ++c) {
    const Category& category = taxonomy.categories()[c];
    if (std::none_of(languages.begin(), languages.end(),
                     [&](Language l) { return category.AppliesTo(l); })) {
      continue;
    }
    CategoryReport entry;
    entry.name = category.name;
    std::vector<bool> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = labeled[i].HasLabel(category.name);
      entry.support += y[i] ? 1 : 0;
    }
    const int negatives = static_cast<int>(n) - entry.support;
    if (entry.support < k || negatives < k) {
      entry.reason = "too few instances: " + std::to_string(entry.support) + " positive, " +
                     std::to_string(negatives) + " negative, k = " + std::to_string(k);
    } else {
      entry.evaluated = true;
      const std::size_t slot = report.per_category.size();
      for (int f = 0; f < k; ++f) jobs.push_back({slot, f});
    }
    const std::uint64_t seed = options.seed + c;
    folds.push_back(entry.evaluated ? StratifiedKFold(y, k, seed) : FoldAssignment{});
    labels.push_back(std::move(y));
    seeds.push_back(seed);
    report.per_category.push_back(std::move(entry));
  }

  std::vector<ConfusionCounts> results(jobs.size());
  TrainOptions local = options;
  local.forest.num_threads = 1;
  ParallelFor(jobs.size(), options.num_threads, [&](std::size_t j) {
    const Job& job = jobs[j];
    const FoldAssignment& assignment = folds[job.category];
    const std::vector<bool>& y = labels[job.category];
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    for (std::size_t i = 0; i < n; ++i) {
      (assignment.fold[i] == job.fold ? test : train).push_back(i);
    }
    const FoldTraining fold = PrepareFoldTraining(prepared, y, train, options.min_df,
                                                  seeds[job.category]);
    const Vocabulary& vocab = fold.vocabulary;
    std::vector<Example> data;
    data.reserve(fold.rows.size());
    for (std::size_t i : fold.rows) {
      data.push_back({Featurize(prepared[i], vocab, options.feature_mode), y[i]});
    }
    const BinaryClassifier classifier = TrainBinary(data, local, seeds[job.category]);

    ConfusionCounts counts;
    for (std::size_t i : test) {
      const FeatureVector x = Featurize(prepared[i], vocab, options.feature_mode);
      const double score = Score(classifier, x);
      const bool predicted = DecidePositive(score, options.threshold, PriorsOnly(classifier, x));
      if (predicted) {
        ++(y[i] ? counts.tp : counts.fp);
      } else {
        ++(y[i] ? counts.fn : counts.tn);
      }
    }
    results[j] = counts;
  });

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    CategoryReport& entry = report.per_category[jobs[j].category];
    entry.confusion += results[j];
    entry.fold_f1.push_back(F1(results[j]));
    ++entry.folds_evaluated;
  }

  double support_total = 0.0;
  int evaluated = 0;
  for (CategoryReport& entry : report.per_category) {
    if (!entry.evaluated) continue;
    entry.precision = Precision(entry.confusion);
    entry.recall = Recall(entry.confusion);
    entry.f1 = F1(entry.confusion);
    entry.precision_undefined = PrecisionUndefined(entry.confusion);
    entry.recall_undefined = RecallUndefined(entry.confusion);
    entry.fold_f1_variance = PopulationVariance(entry.fold_f1);
    ++evaluated;
    report.macro.precision += entry.precision;
    report.macro.recall += entry.recall;
    report.macro.f1 += entry.f1;
    report.weighted.precision += entry.support * entry.precision;
    report.weighted.recall += entry.support * entry.recall;
    report.weighted.f1 += entry.support * entry.f1;
    support_total += entry.support;
  }
  if (evaluated > 0) {
    report.macro.precision /= evaluated;
    report.macro.recall /= evaluated;
    report.macro.f1 /= evaluated;
  }
  if (support_total > 0.0) {
    report.weighted.precision /= support_total;
    report.weighted.recall /= support_total;
    report.weighted.f1 /= support_total;
  }
  return report;
}

namespace {

Json TripleToJson(const MetricTriple& m) {
  return Json{{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

MetricTriple TripleFromJson(const Json& j) {
  return {j.at("precision").get<double>(), j.at("recall").get<double>(),
          j.at("f1").get<double>()};
}

}  // namespace

std::string ReportToJson(const EvalReport& report) {
  const ConfigFingerprint& fp = report.fingerprint;
  Json doc = Json::object();
  doc["fingerprint"] = Json{{"algorithm", fp.algorithm},
                            {"feature_mode", fp.feature_mode},
                            {"k", fp.k},
                            {"seed", fp.seed},
                            {"threshold", fp.threshold},
                            {"taxonomy_version", fp.taxonomy_version},
                            {"pattern_library_version", fp.pattern_library_version},
                            {"preprocessing_chain", fp.preprocessing_chain},
                            {"dataset_hash", fp.dataset_hash},
                            {"n_comments", fp.n_comments}};
  Json categories = Json::array();
  for (const CategoryReport& c : report.per_category) {
    Json entry = Json::object();
    entry["category"] = c.name;
    entry["evaluated"] = c.evaluated;
    if (!c.evaluated) entry["reason"] = c.reason;
    entry["support"] = c.support;
    entry["confusion"] = Json{{"tp", c.confusion.tp},
                              {"fp", c.confusion.fp},
                              {"fn", c.confusion.fn},
                              {"tn", c.confusion.tn}};
    entry["precision"] = c.precision;
    entry["recall"] = c.recall;
    entry["f1"] = c.f1;
    Json flags = Json::array();
    if (c.precision_undefined) flags.push_back("precision_undefined");
    if (c.recall_undefined) flags.push_back("recall_undefined");
    entry["flags"] = std::move(flags);
    entry["folds_evaluated"] = c.folds_evaluated;
    entry["fold_f1"] = c.fold_f1;
    entry["fold_f1_variance"] = c.fold_f1_variance;
    categories.push_back(std::move(entry));
  }
  doc["per_category"] = std::move(categories);
  doc["macro"] = TripleToJson(report.macro);
  doc["weighted"] = TripleToJson(report.weighted);
  return detail::DumpPretty(doc);
}

EvalReport ParseReport(std::string_view json_text) {
  const Json doc = detail::ParseJson(json_text, false, "MalformedReport", "report");
  EvalReport report;
  try {
    const Json& fp = doc.at("fingerprint");
    ConfigFingerprint& out = report.fingerprint;
    out.algorithm = fp.at("algorithm").get<std::string>();
    out.feature_mode = fp.at("feature_mode").get<std::string>();
    out.k = fp.at("k").get<int>();
    out.seed = fp.at("seed").get<std::uint64_t>();
    out.threshold = fp.at("threshold").get<double>();
    out.taxonomy_version = fp.at("taxonomy_version").get<std::string>();
    out.pattern_library_version = fp.at("pattern_library_version").get<std::string>();
    out.preprocessing_chain = fp.at("preprocessing_chain").get<std::string>();
    out.dataset_hash = fp.at("dataset_hash").get<std::string>();
    out.n_comments = fp.at("n_comments").get<int>();
    for (const Json& entry : doc.at("per_category")) {
      CategoryReport c;
      c.name = entry.at("category").get<std::string>();
      c.evaluated = entry.at("evaluated").get<bool>();
      if (entry.contains("reason")) c.reason = entry.at("reason").get<std::string>();
      c.support = entry.at("support").get<int>();
      const Json& confusion = entry.at("confusion");
      c.confusion = {confusion.at("tp").get<long>(), confusion.at("fp").get<long>(),
                     confusion.at("fn").get<long>(), confusion.at("tn").get<long>()};
      c.precision = entry.at("precision").get<double>();
      c.recall = entry.at("recall").get<double>();
      c.f1 = entry.at("f1").get<double>();
      for (const Json& flag : entry.at("flags")) {
        const std::string name = flag.get<std::string>();
        if (name == "precision_undefined") {
          c.precision_undefined = true;
        } else if (name == "recall_undefined") {
          c.recall_undefined = true;
        } else {
          Malformed("unknown flag \"" + name + "\"");
        }
      }
      c.folds_evaluated = entry.at("folds_evaluated").get<int>();
      c.fold_f1 = entry.at("fold_f1").get<std::vector<double>>();
      c.fold_f1_variance = entry.at("fold_f1_variance").get<double>();
      report.per_category.push_back(std::move(c));
    }
    report.macro = TripleFromJson(doc.at("macro"));
    report.weighted = TripleFromJson(doc.at("weighted"));
  } catch (const Json::exception& e) {
    Malformed(e.what());
  }
  return report;
}

std::string ReportToTable(const EvalReport& report) {
  const ConfigFingerprint& fp = report.fingerprint;
  std::ostringstream out;
  out << "algorithm=" << fp.algorithm << " features=" << fp.feature_mode << " k=" << fp.k
      << " seed=" << fp.seed << " threshold=" << fp.threshold << "\n"
      << "taxonomy=" << fp.taxonomy_version << " patterns=" << fp.pattern_library_version
      << " chain=" << fp.preprocessing_chain << "\n"
      << "dataset=" << fp.dataset_hash << " comments=" << fp.n_comments << "\n\n";

  std::size_t width = 8;
  for (const CategoryReport& c : report.per_category) width = std::max(width, c.name.size());
  out << std::left << std::setw(static_cast<int>(width)) << "category" << std::right
      << std::setw(8) << "support" << std::setw(6) << "tp" << std::setw(6) << "fp"
      << std::setw(6) << "fn" << std::setw(7) << "tn" << std::setw(11) << "precision"
      << std::setw(9) << "recall" << std::setw(9) << "f1" << std::setw(7) << "folds"
      << "  notes\n";
  for (const CategoryReport& c : report.per_category) {
    out << std::left << std::setw(static_cast<int>(width)) << c.name << std::right
        << std::setw(8) << c.support;
    if (!c.evaluated) {
      out << "  not evaluated: " << c.reason << "\n";
      continue;
    }
    std::string notes;
    if (c.precision_undefined) notes += " precision 0/0";
    if (c.recall_undefined) notes += " recall 0/0";
    out << std::setw(6) << c.confusion.tp << std::setw(6) << c.confusion.fp << std::setw(6)
        << c.confusion.fn << std::setw(7) << c.confusion.tn << std::setw(11)
        << Fixed(c.precision) << std::setw(9) << Fixed(c.recall) << std::setw(9)
        << Fixed(c.f1) << std::setw(7) << c.folds_evaluated << " " << notes << "\n";
  }
  auto triple = [&](const char* name, const MetricTriple& m) {
    out << std::left << std::setw(static_cast<int>(width)) << name << std::right
        << std::setw(8 + 6 + 6 + 6 + 7) << "" << std::setw(11) << Fixed(m.precision)
        << std::setw(9) << Fixed(m.recall) << std::setw(9) << Fixed(m.f1) << "\n";
  };
  triple("macro", report.macro);
  triple("weighted", report.weighted);
  return out.str();
}

ModeComparison CompareModes(const EvalReport& a, const EvalReport& b) {
  const ConfigFingerprint& fa = a.fingerprint;
  const ConfigFingerprint& fb = b.fingerprint;
  auto check = [](bool same, const std::string& what, const std::string& x,
                  const std::string& y) {
    if (!same) throw DataError("FingerprintMismatch", what + " differs: " + x + " vs " + y);
  };
  check(fa.dataset_hash == fb.dataset_hash, "dataset", fa.dataset_hash, fb.dataset_hash);
  check(fa.n_comments == fb.n_comments, "dataset size", std::to_string(fa.n_comments),
        std::to_string(fb.n_comments));
  check(fa.seed == fb.seed, "seed", std::to_string(fa.seed), std::to_string(fb.seed));
  check(fa.k == fb.k, "k", std::to_string(fa.k), std::to_string(fb.k));
  check(fa.taxonomy_version == fb.taxonomy_version, "taxonomy version", fa.taxonomy_version,
        fb.taxonomy_version);
  check(fa.pattern_library_version == fb.pattern_library_version, "pattern library version",
        fa.pattern_library_version, fb.pattern_library_version);
  check(fa.preprocessing_chain == fb.preprocessing_chain, "preprocessing chain",
        fa.preprocessing_chain, fb.preprocessing_chain);

  ModeComparison out;
  out.label_a = fa.algorithm + "/" + fa.feature_mode;
  out.label_b = fb.algorithm + "/" + fb.feature_mode;
  for (const CategoryReport& ca : a.per_category) {
    if (!ca.evaluated) continue;
    auto it = std::find_if(b.per_category.begin(), b.per_category.end(),
                           [&](const CategoryReport& cb) { return cb.name == ca.name; });
    if (it == b.per_category.end() || !it->evaluated) continue;
    out.per_category.push_back({ca.name, it->precision - ca.precision,
                                it->recall - ca.recall, it->f1 - ca.f1});
  }
  out.macro = {"macro", b.macro.precision - a.macro.precision, b.macro.recall - a.macro.recall,
               b.macro.f1 - a.macro.f1};
  return out;
}

std::string ComparisonToTable(const ModeComparison& comparison) {
  std::ostringstream out;
  out << "delta = " << comparison.label_b << " - " << comparison.label_a << "\n\n";
  std::size_t width = 8;
  for (const MetricDelta& d : comparison.per_category) width = std::max(width, d.name.size());
  auto row = [&](const MetricDelta& d) {
    out << std::left << std::setw(static_cast<int>(width)) << d.name << std::right
        << std::setw(11) << Signed(d.precision) << std::setw(9) << Signed(d.recall)
        << std::setw(9) << Signed(d.f1) << "\n";
  };
  out << std::left << std::setw(static_cast<int>(width)) << "category" << std::right
      << std::setw(11) << "precision" << std::setw(9) << "recall" << std::setw(9) << "f1"
      << "\n";
  for (const MetricDelta& d : comparison.per_category) row(d);
  row(comparison.macro);
  return out.str();
}

}  // namespace cctm
