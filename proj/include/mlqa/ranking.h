#ifndef MLQA_RANKING_H_
#define MLQA_RANKING_H_

// Ranked answer lists: single-model ranking, min-max normalization and the
// post-hoc merges used when every language has its own model.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlqa/classifier.h"
#include "mlqa/evaluation.h"
#include "mlqa/text.h"

namespace mlqa {

struct RankedEntry {
  std::string candidate_id;
  Language language = Language::en;
  double raw_score = 0.0;
  double normalized_score = 0.0;

  friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

struct RankedList {
  std::string question_id;
  std::optional<Language> language;  // nullopt for a mixed list
  std::vector<RankedEntry> entries;
};

struct ScoredCandidate {
  std::string candidate_id;
  Language language = Language::en;
  double score = 0.0;
};

// Top n by descending score, ties by candidate id. normalized_score starts
// equal to the raw score.
RankedList rank_scored(std::string question_id,
                       std::optional<Language> language,
                       std::vector<ScoredCandidate> candidates, std::size_t n);

struct RankInput {
  std::string candidate_id;
  Language language = Language::en;
  FeatureVector features;
};

RankedList rank(const EnsembleModel& model, std::string question_id,
                std::optional<Language> language,
                std::span<const RankInput> candidates, std::size_t n);

// Min-max onto [0, 1]; a constant list maps to 1. Throws Error when empty.
RankedList normalize_scores(RankedList list);

// Merges below take one list per language; all produce a mixed list of
// min(n, total entries) and keep each language's internal order.

// Global sort on normalized score; ties by language (en, ar, ch), then by
// position in the source list.
RankedList merge_uniform(std::span<const RankedList> lists, std::size_t n);
// Round-robin in en, ar, ch order, skipping exhausted lists.
RankedList merge_alternate(std::span<const RankedList> lists, std::size_t n);
// English entries with normalized score > threshold first, then a uniform
// merge of everything else.
RankedList merge_english_first(std::span<const RankedList> lists,
                               std::size_t n, double threshold);
// Uniform merge after multiplying English normalized scores by the weight.
RankedList merge_weighted(std::span<const RankedList> lists, std::size_t n,
                          double english_weight);

enum class MergeStrategy { uniform, alternate, english_first, weighted };
std::string_view to_string(MergeStrategy strategy);
MergeStrategy parse_merge_strategy(std::string_view text);

// Per-question inputs for choosing the English weight.
struct MergeQuestion {
  std::string question_id;
  std::vector<RankedList> lists;  // normalized, one per language
  std::set<std::string, std::less<>> relevant;
  std::size_t total_relevant = 0;
};

// Leave-one-question-out grid search: each question gets the candidate
// weight with the best mean AP-k over all other questions, smaller weight
// on ties. Throws Error with fewer than two questions or no weights.
std::map<std::string, double> learn_merge_weight(
    std::span<const MergeQuestion> questions,
    std::span<const double> candidate_weights, std::size_t n, std::size_t k);

// Percentage of entries per language. Throws Error when empty.
LanguageRatio language_ratio(const RankedList& list);
LanguageRatio language_ratio(std::span<const RankedList> lists);

// question_id \t rank \t candidate_id \t language \t raw \t normalized
void write_ranked_lists(std::ostream& out, std::span<const RankedList> lists);
std::vector<RankedList> read_ranked_lists(std::istream& in,
                                          const std::string& source_name);
std::vector<RankedList> load_ranked_lists(const std::filesystem::path& path);

}  // namespace mlqa

#endif  // MLQA_RANKING_H_
