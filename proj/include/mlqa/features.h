#ifndef MLQA_FEATURES_H_
#define MLQA_FEATURES_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlqa/corpus.h"
#include "mlqa/question.h"
#include "mlqa/translation.h"

namespace mlqa {

enum class FeatureSet { lexcl, lexql, both };

std::string_view to_string(FeatureSet set);
// "LexCL", "LexQL" or "both" (case-insensitive).
FeatureSet parse_feature_set(std::string_view text);

inline constexpr std::size_t kFeatureCount = 10;

// Canonical order: lexcl_word, lexcl_10best, lexcl_context, lexcl_grammar,
// lexql, then prev_ copies of the same five.
const std::array<std::string, kFeatureCount>& feature_names();

inline constexpr std::size_t kLexQlSlot = 4;
inline constexpr std::size_t kPrevOffset = 5;
std::size_t lexcl_slot(Method method);

struct FeatureVector {
  std::array<double, kFeatureCount> values{};
  std::array<bool, kFeatureCount> active{};
  std::optional<bool> label;
};

// Which features a run computes. Disabling a method masks its LexCL slot
// (and the prev_ copy) for ablations.
struct FeatureSelection {
  FeatureSet set = FeatureSet::both;
  std::array<bool, 4> methods = {true, true, true, true};

  std::array<bool, kFeatureCount> active_mask() const;
};

// LexCL: cosine(question_vector(translation), sentence_vector(tokens)) per
// method, using the identity translation for English candidates.
// LexQL: cosine(sentence_vector(terms), sentence_vector(onebest_en_tokens)).
// prev_ features repeat both against the preceding sentence, 0 when there is
// none. Inactive slots are exactly 0. Throws Error naming method and
// language when a required translation is missing from q.translations.
FeatureVector featurize_pair(const Question& q, const Candidate& c,
                             const Corpus& corpus,
                             const FeatureSelection& selection);

struct FeatureRow {
  std::string question_id;
  std::string candidate_id;
  FeatureVector features;
};

// "# active" header with the mask, then
// question_id \t candidate_id \t label|- \t 10 values.
void write_feature_rows(std::ostream& out, const std::vector<FeatureRow>& rows);
std::vector<FeatureRow> read_feature_rows(std::istream& in,
                                          const std::string& source_name);
std::vector<FeatureRow> load_feature_rows(const std::filesystem::path& path);

}  // namespace mlqa

#endif  // MLQA_FEATURES_H_
