#ifndef MLQA_EXPERIMENT_H_
#define MLQA_EXPERIMENT_H_

// Cross-validated ranking runs shared by subset selection and the pipeline.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mlqa/classifier.h"
#include "mlqa/data_selection.h"
#include "mlqa/error.h"
#include "mlqa/ranking.h"

namespace mlqa {

// A training fold without both labels.
class DegenerateFoldError : public Error {
 public:
  using Error::Error;
};

enum class RankingMode {
  l2t,   // one model over every language
  l2ct,  // one model per language, lists merged afterwards
};

std::string_view to_string(RankingMode mode);
RankingMode parse_ranking_mode(std::string_view text);

struct ExperimentConfig {
  SubsetCriterion criterion = SubsetCriterion::all;
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  std::size_t k = 20;
  std::size_t top_n = 0;  // 0 keeps the whole candidate pool
  TrainerConfig trainer;
  RankingMode mode = RankingMode::l2t;
  MergeStrategy merge = MergeStrategy::uniform;
  double threshold = 0.5;
  // Weighted merge: fixed English weight, or learned per question from the
  // grid when unset.
  std::optional<double> english_weight;
  std::vector<double> weight_grid = {2.0, 5.0, 10.0};
};

struct ExperimentResult {
  std::vector<std::pair<std::string, double>> ap;  // first-appearance order
  std::vector<double> fold_map;
  std::vector<RankedList> lists;  // one final list per question, same order
  std::map<std::string, double> merge_weights;

  double map() const;
};

// Questions are split into folds; each fold trains on the filtered pairs of
// the other folds and ranks the untouched candidate pool of its own
// questions. Lists are graded with evaluation_label. Throws
// DegenerateFoldError when a training fold lacks a label.
ExperimentResult cross_validate(std::span<const JudgedPair> pairs,
                                const ExperimentConfig& config);

}  // namespace mlqa

#endif  // MLQA_EXPERIMENT_H_
