#ifndef MLQA_CORPUS_H_
#define MLQA_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mlqa/text.h"

namespace mlqa {

// A candidate answer sentence. onebest_en_tokens is the sentence's one-best
// English translation and equals tokens for English sentences.
struct Candidate {
  std::string id;
  std::string doc_id;
  Language language = Language::en;
  int position = 0;
  Tokens tokens;
  Tokens onebest_en_tokens;
  std::optional<std::string> prev_id;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

// Immutable, validated candidate collection in file order.
class Corpus {
 public:
  Corpus() = default;
  // Throws Error on duplicate ids, empty token lists, or a prev link that
  // does not name the same-document sentence one position earlier.
  explicit Corpus(std::vector<Candidate> candidates);

  const Candidate* find(std::string_view id) const;
  const Candidate& at(std::string_view id) const;
  // The sentence preceding c in its document, if any.
  const Candidate* previous(const Candidate& c) const;

  bool has_language(Language language) const;

  const std::vector<Candidate>& candidates() const { return candidates_; }
  std::size_t size() const { return candidates_.size(); }
  bool empty() const { return candidates_.empty(); }
  auto begin() const { return candidates_.begin(); }
  auto end() const { return candidates_.end(); }

 private:
  std::vector<Candidate> candidates_;
  std::unordered_map<std::string, std::size_t> index_;
};

// id \t doc_id \t language \t position \t tokens \t onebest_en_tokens \t prev
// with prev "-" when absent.
Corpus read_corpus(std::istream& in, const std::string& source_name);
Corpus load_corpus(const std::filesystem::path& path);
void write_corpus(std::ostream& out, const Corpus& corpus);

// Graded relevance on a 1-5 scale, judged on the original sentence and/or
// on its English translation.
struct Judgment {
  std::string question_id;
  std::string candidate_id;
  std::optional<int> source_score;
  std::optional<int> en_score;

  friend bool operator==(const Judgment&, const Judgment&) = default;
};

inline constexpr int kRelevantScore = 3;
inline bool is_relevant(int score) { return score >= kRelevantScore; }

// question_id candidate_id source_score|- en_score|- (tab or space separated).
// Throws ParseError on bad scores, a line with no score, or a repeated
// (question, candidate) pair.
std::vector<Judgment> read_judgments(std::istream& in,
                                     const std::string& source_name);
std::vector<Judgment> load_judgments(const std::filesystem::path& path);
void write_judgments(std::ostream& out, const std::vector<Judgment>& judgments);

// Throws Error naming the first judgment whose candidate is not in corpus.
void check_judgments(const std::vector<Judgment>& judgments,
                     const Corpus& corpus);

}  // namespace mlqa

#endif  // MLQA_CORPUS_H_
