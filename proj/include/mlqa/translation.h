#ifndef MLQA_TRANSLATION_H_
#define MLQA_TRANSLATION_H_

// Probabilistic question translation: per-term distributions over
// collection-language words, built from word alignments, a synchronous
// grammar, or an n-best derivation list, plus the masked-context sample
// generator used to prepare training data for a context-sensitive model.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mlqa/text.h"

namespace mlqa {

enum class Method { word, nbest, context, grammar };

inline constexpr std::array<Method, 4> kMethods = {
    Method::word, Method::nbest, Method::context, Method::grammar};

// "word", "10best", "context", "grammar".
std::string_view to_string(Method method);
Method parse_method(std::string_view text);

// Pr(target | source term). Entries are strictly positive and sum to at
// most one; an empty distribution stands for an untranslatable term.
class Distribution {
 public:
  static constexpr double kSumTolerance = 1e-9;

  Distribution() = default;
  // Throws Error if an entry is not in (0, 1] or the total exceeds one.
  explicit Distribution(std::map<std::string, double, std::less<>> entries);

  // Drops non-positive weights and rescales the rest to sum to one.
  static Distribution normalized(
      const std::map<std::string, double, std::less<>>& weights);

  double probability(std::string_view target) const;
  double total() const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, double, std::less<>>& entries() const {
    return entries_;
  }

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  std::map<std::string, double, std::less<>> entries_;
};

// One distribution per simplified question term, in term order.
struct ProbabilisticQuery {
  Tokens terms;
  std::vector<Distribution> distributions;

  friend bool operator==(const ProbabilisticQuery&,
                         const ProbabilisticQuery&) = default;
};

using AlignmentLink = std::pair<std::size_t, std::size_t>;

// alpha ||| beta ||| A ||| l(r)
struct GrammarRule {
  Tokens source;
  Tokens target;
  std::vector<AlignmentLink> alignments;
  double likelihood = 0.0;
};

struct NBestDerivation {
  int rank = 0;
  std::vector<GrammarRule> rules;
};

struct AlignedPair {
  Tokens source;
  Tokens target;
  std::vector<AlignmentLink> links;
};

using AlignedPairCorpus = std::vector<AlignedPair>;

// Source word -> Distribution.
class TranslationTable {
 public:
  TranslationTable() = default;
  explicit TranslationTable(std::map<std::string, Distribution, std::less<>> rows)
      : rows_(std::move(rows)) {}

  const Distribution* find(std::string_view source) const;
  bool empty() const { return rows_.empty(); }
  std::size_t size() const { return rows_.size(); }
  const std::map<std::string, Distribution, std::less<>>& rows() const {
    return rows_;
  }

 private:
  std::map<std::string, Distribution, std::less<>> rows_;
};

// Table entry if present, otherwise the empty distribution.
Distribution term_distribution(const TranslationTable& table,
                               std::string_view term);

// Looks every term up in a context-independent table.
ProbabilisticQuery lookup_query(const TranslationTable& table,
                                const Tokens& terms);

// Each term translates to itself with probability one.
ProbabilisticQuery identity_query(const Tokens& terms);

// Pr(t|w) = k/m, where w occurs m times on the source side and k is its
// link mass to t. An occurrence aligned to several targets spreads its unit
// of mass evenly over its links, so Pr(.|w) sums to (linked occurrences)/m.
TranslationTable build_word_table(const AlignedPairCorpus& corpus);

// Accumulates l(r) over every (rule, link) whose source token is the term,
// then normalizes per term.
ProbabilisticQuery build_grammar_table(std::span<const GrammarRule> rules,
                                       const Tokens& terms);

// Counts (derivation, rule, link) hits per term with every derivation
// weighted equally, then normalizes per term.
ProbabilisticQuery build_nbest_table(
    std::span<const NBestDerivation> derivations, const Tokens& terms);

inline constexpr std::string_view kFillerToken = "<F>";

// Masked copies of `tokens` in which a nonempty subset of the positions
// within +-window of focus_index (excluding the focus itself) is replaced by
// the filler token. Returns every subset when sample_count covers them all,
// otherwise sample_count distinct subsets drawn with the seed.
std::vector<Tokens> mask_contexts(const Tokens& tokens, std::size_t focus_index,
                                  std::size_t window, std::size_t sample_count,
                                  std::uint64_t seed);

// File formats.
//   table:    source \t target \t prob
//   grammar:  alpha ||| beta ||| i-j ... ||| l(r)
//   n-best:   question_id \t rank \t <grammar rule>
//   aligned:  source tokens \t target tokens \t i-j ...
TranslationTable read_table(std::istream& in, const std::string& source_name);
TranslationTable load_table(const std::filesystem::path& path);
void write_table(std::ostream& out, const TranslationTable& table);

GrammarRule parse_grammar_rule(std::string_view line);
std::string format_grammar_rule(const GrammarRule& rule);
std::vector<GrammarRule> read_grammar(std::istream& in,
                                      const std::string& source_name);
std::vector<GrammarRule> load_grammar(const std::filesystem::path& path);

using NBestLists = std::map<std::string, std::vector<NBestDerivation>>;
NBestLists read_nbest(std::istream& in, const std::string& source_name);
NBestLists load_nbest(const std::filesystem::path& path);
void write_nbest(std::ostream& out, const NBestLists& lists);

AlignedPairCorpus read_aligned_corpus(std::istream& in,
                                      const std::string& source_name);
AlignedPairCorpus load_aligned_corpus(const std::filesystem::path& path);
void write_aligned_corpus(std::ostream& out, const AlignedPairCorpus& corpus);

// question_id \t term_index \t term \t target \t prob, one row per entry.
void write_query(std::ostream& out, std::string_view question_id,
                 const ProbabilisticQuery& query);

}  // namespace mlqa

#endif  // MLQA_TRANSLATION_H_
