#include "mlqa/question.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>

#include "mlqa/error.h"

namespace mlqa {

namespace {

const char* const kDefaultStopwords[] = {
    "a",     "about", "above", "after", "again", "against", "all",   "am",
    "an",    "and",   "any",   "are",   "as",    "at",      "be",    "because",
    "been",  "before", "being", "below", "between", "both", "but",   "by",
    "can",   "could", "did",   "do",    "does",  "doing",   "down",  "during",
    "each",  "few",   "for",   "from",  "further", "had",   "has",   "have",
    "having", "he",   "her",   "here",  "hers",  "him",     "his",   "how",
    "i",     "if",    "in",    "into",  "is",    "it",      "its",   "me",
    "more",  "most",  "my",    "no",    "nor",   "not",     "of",    "off",
    "on",    "once",  "only",  "or",    "other", "our",     "out",   "over",
    "own",   "same",  "she",   "should", "so",   "some",    "such",  "than",
    "that",  "the",   "their", "them",  "then",  "there",   "these", "they",
    "this",  "those", "through", "to",  "too",   "under",   "until", "up",
    "very",  "was",   "we",    "were",  "what",  "when",    "where", "which",
    "while", "who",   "whom",  "why",   "will",  "with",    "would", "you",
    "your"};

const char* const kDefaultTemplates[] = {
    "tell me about",     "tell me",           "what do you think about",
    "what do people think about", "what is known about", "what are",
    "what is",           "give me information about", "find information about",
    "describe",          "explain"};

bool is_separator(unsigned char ch) {
  if (ch >= 0x80) return false;  // UTF-8 continuation and lead bytes
  return std::isspace(ch) || std::ispunct(ch);
}

Tokens tokenize_lower(std::string_view raw) {
  Tokens out;
  std::string current;
  for (unsigned char ch : raw) {
    if (is_separator(ch)) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(ch < 0x80 ? static_cast<char>(std::tolower(ch))
                                  : static_cast<char>(ch));
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

bool strip_template(Tokens& tokens, const std::vector<Tokens>& templates) {
  // Longest matching prefix wins.
  std::size_t best = 0;
  for (const Tokens& pattern : templates) {
    if (pattern.empty() || pattern.size() > tokens.size()) continue;
    if (std::equal(pattern.begin(), pattern.end(), tokens.begin()) &&
        pattern.size() > best) {
      best = pattern.size();
    }
  }
  if (best == 0) return false;
  tokens.erase(tokens.begin(), tokens.begin() + static_cast<long>(best));
  return true;
}

void read_lines(const std::filesystem::path& path,
                const std::function<void(const std::string&)>& visit) {
  std::ifstream in = open_input(path);
  for_each_record(in, [&](std::size_t, const std::string& line) {
    Tokens t = tokenize_lower(line);
    if (!t.empty()) visit(join(t));
  });
}

}  // namespace

SimplifierRules SimplifierRules::english_default() {
  SimplifierRules rules;
  for (const char* w : kDefaultStopwords) rules.stopwords.insert(w);
  for (const char* t : kDefaultTemplates) {
    rules.templates.push_back(tokenize_lower(t));
  }
  return rules;
}

SimplifierRules SimplifierRules::load(
    const std::filesystem::path& stopwords_path,
    const std::filesystem::path& templates_path) {
  SimplifierRules rules = english_default();
  if (!stopwords_path.empty()) {
    rules.stopwords.clear();
    read_lines(stopwords_path, [&](const std::string& line) {
      for (auto& w : split_whitespace(line)) rules.stopwords.insert(w);
    });
  }
  if (!templates_path.empty()) {
    rules.templates.clear();
    read_lines(templates_path, [&](const std::string& line) {
      rules.templates.push_back(split_whitespace(line));
    });
  }
  return rules;
}

Tokens simplify_question(std::string_view raw_text,
                         const std::set<std::string, std::less<>>& stopwords,
                         const std::vector<Tokens>& templates) {
  Tokens tokens = tokenize_lower(raw_text);
  bool changed = true;
  while (changed) {
    changed = false;
    while (strip_template(tokens, templates)) changed = true;
    // Leading stopwords can hide a template ("the tell me about ...").
    auto lead = std::find_if(tokens.begin(), tokens.end(), [&](const auto& t) {
      return stopwords.count(t) == 0;
    });
    Tokens exposed(lead, tokens.end());
    if (lead != tokens.begin() && strip_template(exposed, templates)) {
      tokens = std::move(exposed);
      changed = true;
    }
    auto kept = std::remove_if(tokens.begin(), tokens.end(), [&](const auto& t) {
      return stopwords.count(t) > 0;
    });
    if (kept != tokens.end()) {
      tokens.erase(kept, tokens.end());
      changed = true;
    }
  }
  if (tokens.empty()) throw Error("empty question");
  return tokens;
}

Tokens simplify_question(std::string_view raw_text,
                         const SimplifierRules& rules) {
  return simplify_question(raw_text, rules.stopwords, rules.templates);
}

std::vector<Question> read_questions(std::istream& in,
                                     const std::string& source_name,
                                     const SimplifierRules& rules) {
  std::vector<Question> questions;
  std::set<std::string, std::less<>> seen;
  for_each_record(in, [&](std::size_t line_no, const std::string& line) {
    auto fields = split_tabs(line);
    if (fields.size() != 2 || fields[0].empty()) {
      throw ParseError(source_name, line_no,
                       "expected 'id<TAB>question text'");
    }
    if (!seen.insert(fields[0]).second) {
      throw ParseError(source_name, line_no,
                       "duplicate question id '" + fields[0] + "'");
    }
    Question q;
    q.id = fields[0];
    q.raw_text = fields[1];
    try {
      q.terms = simplify_question(q.raw_text, rules);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(source_name, line_no, e.what());
    }
    questions.push_back(std::move(q));
  });
  return questions;
}

std::vector<Question> load_questions(const std::filesystem::path& path,
                                     const SimplifierRules& rules) {
  std::ifstream in = open_input(path);
  return read_questions(in, path.string(), rules);
}

}  // namespace mlqa
