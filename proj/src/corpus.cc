#include "mlqa/corpus.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <utility>

#include "mlqa/error.h"

namespace mlqa {

Corpus::Corpus(std::vector<Candidate> candidates)
    : candidates_(std::move(candidates)) {
  for (std::size_t i = 0; i < candidates_.size(); ++i) {
    const Candidate& c = candidates_[i];
    if (c.id.empty()) throw Error("candidate with empty id");
    if (c.tokens.empty()) {
      throw Error("candidate '" + c.id + "' has no tokens");
    }
    if (c.onebest_en_tokens.empty()) {
      throw Error("candidate '" + c.id + "' has no one-best translation");
    }
    if (c.language == Language::en && c.onebest_en_tokens != c.tokens) {
      throw Error("English candidate '" + c.id +
                  "' must carry its own tokens as the translation");
    }
    if (c.position < 0) {
      throw Error("candidate '" + c.id + "' has a negative position");
    }
    if (!index_.emplace(c.id, i).second) {
      throw Error("duplicate candidate id '" + c.id + "'");
    }
  }
  for (const Candidate& c : candidates_) {
    if (!c.prev_id) continue;
    const Candidate* prev = find(*c.prev_id);
    if (prev == nullptr) {
      throw Error("candidate '" + c.id + "' links to unknown previous '" +
                  *c.prev_id + "'");
    }
    if (prev->doc_id != c.doc_id || prev->position + 1 != c.position) {
      throw Error("candidate '" + c.id + "' links to '" + *c.prev_id +
                  "', which is not the preceding sentence of its document");
    }
  }
}

const Candidate* Corpus::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &candidates_[it->second];
}

const Candidate& Corpus::at(std::string_view id) const {
  const Candidate* c = find(id);
  if (c == nullptr) throw Error("unknown candidate '" + std::string(id) + "'");
  return *c;
}

const Candidate* Corpus::previous(const Candidate& c) const {
  return c.prev_id ? find(*c.prev_id) : nullptr;
}

bool Corpus::has_language(Language language) const {
  for (const Candidate& c : candidates_) {
    if (c.language == language) return true;
  }
  return false;
}

Corpus read_corpus(std::istream& in, const std::string& source_name) {
  std::vector<Candidate> candidates;
  for_each_record(in, [&](std::size_t line_no, const std::string& line) {
    auto fields = split_tabs(line);
    if (fields.size() != 7) {
      throw ParseError(source_name, line_no,
                       "expected 7 tab-separated fields, found " +
                           std::to_string(fields.size()));
    }
    Candidate c;
    c.id = fields[0];
    c.doc_id = fields[1];
    try {
      c.language = parse_language(fields[2]);
      long long position = parse_integer(fields[3]);
      if (position < 0) throw Error("negative position");
      c.position = static_cast<int>(position);
    } catch (const Error& e) {
      throw ParseError(source_name, line_no, e.what());
    }
    c.tokens = split_whitespace(fields[4]);
    c.onebest_en_tokens = split_whitespace(fields[5]);
    if (fields[6] != "-") c.prev_id = fields[6];
    if (c.id.empty() || c.doc_id.empty()) {
      throw ParseError(source_name, line_no, "empty id or doc_id");
    }
    if (c.tokens.empty()) throw ParseError(source_name, line_no, "no tokens");
    candidates.push_back(std::move(c));
  });
  try {
    return Corpus(std::move(candidates));
  } catch (const Error& e) {
    throw Error(source_name + ": " + e.what());
  }
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_corpus(in, path.string());
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const Candidate& c : corpus) {
    out << c.id << '\t' << c.doc_id << '\t' << to_string(c.language) << '\t'
        << c.position << '\t' << join(c.tokens) << '\t'
        << join(c.onebest_en_tokens) << '\t' << (c.prev_id ? *c.prev_id : "-")
        << '\n';
  }
}

namespace {

std::optional<int> parse_score(const std::string& field,
                               const std::string& source_name,
                               std::size_t line_no) {
  if (field == "-") return std::nullopt;
  long long score = 0;
  try {
    score = parse_integer(field);
  } catch (const Error& e) {
    throw ParseError(source_name, line_no, e.what());
  }
  if (score < 1 || score > 5) {
    throw ParseError(source_name, line_no,
                     "score " + field + " outside 1-5");
  }
  return static_cast<int>(score);
}

}  // namespace

std::vector<Judgment> read_judgments(std::istream& in,
                                     const std::string& source_name) {
  std::vector<Judgment> judgments;
  std::set<std::pair<std::string, std::string>> seen;
  for_each_record(in, [&](std::size_t line_no, const std::string& line) {
    Tokens fields = split_whitespace(line);
    if (fields.size() != 4) {
      throw ParseError(source_name, line_no,
                       "expected 'question candidate source_score en_score'");
    }
    Judgment j;
    j.question_id = fields[0];
    j.candidate_id = fields[1];
    j.source_score = parse_score(fields[2], source_name, line_no);
    j.en_score = parse_score(fields[3], source_name, line_no);
    if (!j.source_score && !j.en_score) {
      throw ParseError(source_name, line_no, "no score present");
    }
    if (!seen.emplace(j.question_id, j.candidate_id).second) {
      throw ParseError(source_name, line_no,
                       "duplicate judgment for (" + j.question_id + ", " +
                           j.candidate_id + ")");
    }
    judgments.push_back(std::move(j));
  });
  return judgments;
}

std::vector<Judgment> load_judgments(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_judgments(in, path.string());
}

void write_judgments(std::ostream& out,
                     const std::vector<Judgment>& judgments) {
  auto score = [](const std::optional<int>& s) {
    return s ? std::to_string(*s) : std::string("-");
  };
  for (const Judgment& j : judgments) {
    out << j.question_id << '\t' << j.candidate_id << '\t'
        << score(j.source_score) << '\t' << score(j.en_score) << '\n';
  }
}

void check_judgments(const std::vector<Judgment>& judgments,
                     const Corpus& corpus) {
  for (const Judgment& j : judgments) {
    if (corpus.find(j.candidate_id) == nullptr) {
      throw Error("judgment (" + j.question_id + ", " + j.candidate_id +
                  ") names a candidate missing from the corpus");
    }
  }
}

}  // namespace mlqa
