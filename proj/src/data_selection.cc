#include "mlqa/data_selection.h"

#include "mlqa/error.h"
#include "mlqa/experiment.h"

namespace mlqa {

std::string_view to_string(SubsetCriterion criterion) {
  switch (criterion) {
    case SubsetCriterion::en: return "en";
    case SubsetCriterion::ar: return "ar";
    case SubsetCriterion::ch: return "ch";
    case SubsetCriterion::consist: return "consist";
    case SubsetCriterion::src_plus: return "src+";
    case SubsetCriterion::en_plus: return "en+";
    case SubsetCriterion::all: return "all";
  }
  return "?";
}

SubsetCriterion parse_subset_criterion(std::string_view text) {
  for (SubsetCriterion c : kSubsetCriteria) {
    if (to_string(c) == text) return c;
  }
  if (text == "src_plus") return SubsetCriterion::src_plus;
  if (text == "en_plus" || text == "en+consist") return SubsetCriterion::en_plus;
  throw Error("unknown data subset '" + std::string(text) + "'");
}

bool judged_inconsistently(const Judgment& j) {
  return j.source_score && j.en_score &&
         is_relevant(*j.source_score) != is_relevant(*j.en_score);
}

bool default_label(const Judgment& j) {
  return is_relevant(j.source_score ? *j.source_score : *j.en_score);
}

bool evaluation_label(const Judgment& j) {
  return is_relevant(j.en_score ? *j.en_score : *j.source_score);
}

std::optional<bool> subset_label(const Judgment& j, Language language,
                                 SubsetCriterion criterion) {
  switch (criterion) {
    case SubsetCriterion::en:
    case SubsetCriterion::ar:
    case SubsetCriterion::ch: {
      const Language wanted = criterion == SubsetCriterion::en ? Language::en
                              : criterion == SubsetCriterion::ar ? Language::ar
                                                                 : Language::ch;
      if (language != wanted) return std::nullopt;
      return default_label(j);
    }
    case SubsetCriterion::consist:
      if (judged_inconsistently(j)) return std::nullopt;
      return default_label(j);
    case SubsetCriterion::src_plus:
      if (!j.source_score || judged_inconsistently(j)) return std::nullopt;
      return is_relevant(*j.source_score);
    case SubsetCriterion::en_plus:
      if (!j.en_score || judged_inconsistently(j)) return std::nullopt;
      return is_relevant(*j.en_score);
    case SubsetCriterion::all:
      return default_label(j);
  }
  return std::nullopt;
}

std::vector<LabeledPair> filter_subset(std::span<const Judgment> judgments,
                                       const Corpus& corpus,
                                       SubsetCriterion criterion) {
  std::vector<LabeledPair> out;
  for (const Judgment& j : judgments) {
    const Candidate* c = corpus.find(j.candidate_id);
    if (c == nullptr) {
      throw Error("judgment names unknown candidate '" + j.candidate_id + "'");
    }
    if (auto label = subset_label(j, c->language, criterion)) {
      out.push_back({j.question_id, j.candidate_id, *label});
    }
  }
  return out;
}

SubsetSelection select_best_subset(std::span<const SubsetCriterion> criteria,
                                   std::span<const JudgedPair> pairs,
                                   std::size_t folds, std::uint64_t seed,
                                   std::size_t k,
                                   const TrainerConfig& trainer) {
  if (criteria.empty()) throw Error("no data subsets to choose from");
  if (folds < 2) throw Error("subset selection needs at least two folds");
  SubsetSelection selection;
  std::optional<double> best_map;
  for (SubsetCriterion criterion : criteria) {
    SubsetScore s;
    s.criterion = criterion;
    for (const JudgedPair& p : pairs) {
      if (subset_label(p.judgment, p.language, criterion)) ++s.retained;
    }
    ExperimentConfig config;
    config.criterion = criterion;
    config.folds = folds;
    config.seed = seed;
    config.k = k;
    config.trainer = trainer;
    try {
      ExperimentResult result = cross_validate(pairs, config);
      double sum = 0.0;
      for (double m : result.fold_map) sum += m;
      s.cv_map = sum / static_cast<double>(result.fold_map.size());
    } catch (const DegenerateFoldError&) {
      s.cv_map = std::nullopt;
    }
    if (s.cv_map && (!best_map || *s.cv_map > *best_map)) {
      best_map = s.cv_map;
      selection.best = criterion;
    }
    selection.scores.push_back(s);
  }
  if (!best_map) throw Error("no data subset could be evaluated");
  return selection;
}

}  // namespace mlqa
