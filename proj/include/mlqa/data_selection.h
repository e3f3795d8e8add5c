#ifndef MLQA_DATA_SELECTION_H_
#define MLQA_DATA_SELECTION_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlqa/classifier.h"
#include "mlqa/corpus.h"

namespace mlqa {

// Training-data subsets keyed on the answer's language or on which
// annotations exist and agree.
enum class SubsetCriterion { en, ar, ch, consist, src_plus, en_plus, all };

inline constexpr std::array<SubsetCriterion, 7> kSubsetCriteria = {
    SubsetCriterion::en,       SubsetCriterion::ar,      SubsetCriterion::ch,
    SubsetCriterion::consist,  SubsetCriterion::src_plus,
    SubsetCriterion::en_plus,  SubsetCriterion::all};

// "en", "ar", "ch", "consist", "src+", "en+", "all".
std::string_view to_string(SubsetCriterion criterion);
// Also accepts "src_plus", "en_plus" and "en+consist".
SubsetCriterion parse_subset_criterion(std::string_view text);

// Both scores present and their binary labels disagree.
bool judged_inconsistently(const Judgment& j);

// The label used when no criterion privileges one annotation: source when
// present, else English.
bool default_label(const Judgment& j);

// Relevance used to grade ranked lists: English when present, else source.
// Answers are read by an English-speaking user.
bool evaluation_label(const Judgment& j);

// Training label of the pair under the criterion, or nullopt when the pair
// is not in the subset.
std::optional<bool> subset_label(const Judgment& j, Language language,
                                 SubsetCriterion criterion);

struct LabeledPair {
  std::string question_id;
  std::string candidate_id;
  bool label = false;

  friend bool operator==(const LabeledPair&, const LabeledPair&) = default;
};

// Pairs retained by the criterion, in judgment order. Throws Error when a
// judgment names a candidate missing from the corpus.
std::vector<LabeledPair> filter_subset(std::span<const Judgment> judgments,
                                       const Corpus& corpus,
                                       SubsetCriterion criterion);

// A judged (question, candidate) pair with its computed features.
struct JudgedPair {
  Judgment judgment;
  Language language = Language::en;
  FeatureVector features;
};

struct SubsetScore {
  SubsetCriterion criterion = SubsetCriterion::all;
  std::size_t retained = 0;
  std::optional<double> cv_map;  // nullopt when some training fold lacks a
                                 // positive or a negative
};

struct SubsetSelection {
  SubsetCriterion best = SubsetCriterion::all;
  std::vector<SubsetScore> scores;
};

// Cross-validates one L2T model per criterion (folds split by question,
// filtering applied to training folds only) and returns the criterion with
// the highest mean fold MAP, earliest in the list on ties. Throws Error when
// no criterion can be evaluated.
SubsetSelection select_best_subset(std::span<const SubsetCriterion> criteria,
                                   std::span<const JudgedPair> pairs,
                                   std::size_t folds, std::uint64_t seed,
                                   std::size_t k = 20,
                                   const TrainerConfig& trainer = {});

}  // namespace mlqa

#endif  // MLQA_DATA_SELECTION_H_
