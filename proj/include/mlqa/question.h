#ifndef MLQA_QUESTION_H_
#define MLQA_QUESTION_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mlqa/text.h"
#include "mlqa/translation.h"

namespace mlqa {

// Stopwords and leading question templates ("tell me about") stripped by
// simplify_question.
struct SimplifierRules {
  std::set<std::string, std::less<>> stopwords;
  std::vector<Tokens> templates;

  // Small built-in English list.
  static SimplifierRules english_default();
  // Either path may be empty, in which case the default for that part is
  // kept. Both files hold one entry per line; '#' starts a comment line.
  static SimplifierRules load(const std::filesystem::path& stopwords_path,
                              const std::filesystem::path& templates_path);
};

// Lowercases, splits on whitespace and ASCII punctuation, strips leading
// template phrases and stopwords. Repeats until nothing changes, so the
// result is a fixed point. Throws Error("empty question") if nothing is left.
Tokens simplify_question(std::string_view raw_text,
                         const std::set<std::string, std::less<>>& stopwords,
                         const std::vector<Tokens>& templates);
Tokens simplify_question(std::string_view raw_text,
                         const SimplifierRules& rules);

struct Question {
  std::string id;
  std::string raw_text;
  Tokens terms;
  // Keyed by collection language and method; English needs no entry.
  std::map<std::pair<Language, Method>, ProbabilisticQuery> translations;
};

// id \t raw_text per line.
std::vector<Question> read_questions(std::istream& in,
                                     const std::string& source_name,
                                     const SimplifierRules& rules);
std::vector<Question> load_questions(const std::filesystem::path& path,
                                     const SimplifierRules& rules);

}  // namespace mlqa

#endif  // MLQA_QUESTION_H_
