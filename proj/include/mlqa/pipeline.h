#ifndef MLQA_PIPELINE_H_
#define MLQA_PIPELINE_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mlqa/corpus.h"
#include "mlqa/data_selection.h"
#include "mlqa/evaluation.h"
#include "mlqa/experiment.h"
#include "mlqa/features.h"
#include "mlqa/question.h"

namespace mlqa {

struct LanguageResourcePaths {
  std::filesystem::path word_table;  // used when set, else aligned is built
  std::filesystem::path aligned;
  std::filesystem::path context_table;
  std::filesystem::path grammar;
  std::filesystem::path nbest;
};

struct ResourcePaths {
  std::filesystem::path questions;
  std::filesystem::path corpus;
  std::filesystem::path judgments;
  std::filesystem::path stopwords;  // optional
  std::filesystem::path templates;  // optional
  std::map<Language, LanguageResourcePaths> languages;

  // The layout written by write_fixture; files that do not exist are left
  // unset.
  static ResourcePaths from_directory(const std::filesystem::path& dir);
};

struct RunConfig {
  FeatureSelection features;
  ExperimentConfig experiment;
  // Choose the subset by cross-validation over every criterion instead of
  // using experiment.criterion.
  bool select_subset = false;

  // Throws Error unless k >= 1 and folds >= 2.
  void validate() const;
};

// Fills q.translations for every foreign language in `languages` and every
// enabled method. Only the files the selection needs are opened. Throws
// Error("missing resource: <method> for <lang>") when a path is unset.
void attach_translations(std::vector<Question>& questions,
                         const std::vector<Language>& languages,
                         const FeatureSelection& selection,
                         const ResourcePaths& paths);

// Features for every judgment, in judgment order.
std::vector<JudgedPair> featurize_judgments(
    const std::vector<Question>& questions, const Corpus& corpus,
    const std::vector<Judgment>& judgments, const FeatureSelection& selection);

struct PipelineResult {
  EvalReport report;
  std::vector<RankedList> lists;
  std::vector<SubsetScore> subset_scores;  // when select_subset was set
  SubsetCriterion criterion = SubsetCriterion::all;
};

// Loads, translates, featurizes, cross-validates and evaluates. When
// out_dir is non-empty, writes features.tsv, ranked.tsv and report.tsv
// there. Output depends only on the input files and the config.
PipelineResult run_pipeline(const RunConfig& config, const ResourcePaths& paths,
                            const std::filesystem::path& out_dir);

}  // namespace mlqa

#endif  // MLQA_PIPELINE_H_
