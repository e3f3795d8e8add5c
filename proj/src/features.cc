#include "mlqa/features.h"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "mlqa/error.h"
#include "mlqa/vector.h"

namespace mlqa {

std::string_view to_string(FeatureSet set) {
  switch (set) {
    case FeatureSet::lexcl: return "LexCL";
    case FeatureSet::lexql: return "LexQL";
    case FeatureSet::both: return "both";
  }
  return "?";
}

FeatureSet parse_feature_set(std::string_view text) {
  std::string lower;
  for (char ch : text) lower.push_back(static_cast<char>(std::tolower(ch)));
  if (lower == "lexcl") return FeatureSet::lexcl;
  if (lower == "lexql") return FeatureSet::lexql;
  if (lower == "both" || lower == "all") return FeatureSet::both;
  throw Error("unknown feature set '" + std::string(text) + "'");
}

const std::array<std::string, kFeatureCount>& feature_names() {
  static const std::array<std::string, kFeatureCount> names = {
      "lexcl_word",      "lexcl_10best",      "lexcl_context",
      "lexcl_grammar",   "lexql",             "prev_lexcl_word",
      "prev_lexcl_10best", "prev_lexcl_context", "prev_lexcl_grammar",
      "prev_lexql"};
  return names;
}

std::size_t lexcl_slot(Method method) {
  switch (method) {
    case Method::word: return 0;
    case Method::nbest: return 1;
    case Method::context: return 2;
    case Method::grammar: return 3;
  }
  return 0;
}

std::array<bool, kFeatureCount> FeatureSelection::active_mask() const {
  std::array<bool, kFeatureCount> mask{};
  const bool cl = set != FeatureSet::lexql;
  const bool ql = set != FeatureSet::lexcl;
  for (Method m : kMethods) {
    bool on = cl && methods[lexcl_slot(m)];
    mask[lexcl_slot(m)] = on;
    mask[kPrevOffset + lexcl_slot(m)] = on;
  }
  mask[kLexQlSlot] = ql;
  mask[kPrevOffset + kLexQlSlot] = ql;
  return mask;
}

namespace {

// Fills the five slots starting at offset for one sentence.
void fill_similarities(const Question& q, const Candidate& c,
                       const std::array<bool, kFeatureCount>& mask,
                       std::size_t offset, FeatureVector& fv) {
  bool any_cl = false;
  for (Method m : kMethods) any_cl = any_cl || mask[offset + lexcl_slot(m)];
  if (any_cl) {
    const WeightedVector sentence = sentence_vector(c.tokens);
    for (Method m : kMethods) {
      const std::size_t slot = offset + lexcl_slot(m);
      if (!mask[slot]) continue;
      if (c.language == Language::en) {
        fv.values[slot] = cosine(question_vector(identity_query(q.terms)),
                                 sentence);
        continue;
      }
      auto it = q.translations.find({c.language, m});
      if (it == q.translations.end()) {
        throw Error("missing translation table: " +
                    std::string(to_string(m)) + " for " +
                    std::string(to_string(c.language)) + " (question " +
                    q.id + ")");
      }
      fv.values[slot] = cosine(question_vector(it->second), sentence);
    }
  }
  if (mask[offset + kLexQlSlot]) {
    fv.values[offset + kLexQlSlot] =
        cosine(sentence_vector(q.terms), sentence_vector(c.onebest_en_tokens));
  }
}

}  // namespace

FeatureVector featurize_pair(const Question& q, const Candidate& c,
                             const Corpus& corpus,
                             const FeatureSelection& selection) {
  FeatureVector fv;
  fv.active = selection.active_mask();
  fill_similarities(q, c, fv.active, 0, fv);
  if (const Candidate* prev = corpus.previous(c)) {
    fill_similarities(q, *prev, fv.active, kPrevOffset, fv);
  }
  return fv;
}

void write_feature_rows(std::ostream& out,
                        const std::vector<FeatureRow>& rows) {
  std::array<bool, kFeatureCount> mask{};
  if (!rows.empty()) mask = rows.front().features.active;
  out << "# active";
  for (bool a : mask) out << ' ' << (a ? 1 : 0);
  out << '\n';
  for (const FeatureRow& row : rows) {
    const FeatureVector& fv = row.features;
    out << row.question_id << '\t' << row.candidate_id << '\t'
        << (fv.label ? (*fv.label ? "1" : "0") : "-");
    for (double v : fv.values) out << '\t' << format_double(v);
    out << '\n';
  }
}

std::vector<FeatureRow> read_feature_rows(std::istream& in,
                                          const std::string& source_name) {
  std::array<bool, kFeatureCount> mask;
  mask.fill(true);
  std::vector<FeatureRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# active", 0) == 0) {
      Tokens bits = split_whitespace(line.substr(8));
      if (bits.size() != kFeatureCount) {
        throw ParseError(source_name, line_no, "active mask needs 10 flags");
      }
      for (std::size_t i = 0; i < kFeatureCount; ++i) mask[i] = bits[i] == "1";
      continue;
    }
    if (line[0] == '#') continue;
    auto fields = split_tabs(line);
    if (fields.size() != 3 + kFeatureCount) {
      throw ParseError(source_name, line_no,
                       "expected question, candidate, label and 10 values");
    }
    FeatureRow row;
    row.question_id = fields[0];
    row.candidate_id = fields[1];
    if (fields[2] == "1") {
      row.features.label = true;
    } else if (fields[2] == "0") {
      row.features.label = false;
    } else if (fields[2] != "-") {
      throw ParseError(source_name, line_no, "label must be 0, 1 or -");
    }
    try {
      for (std::size_t i = 0; i < kFeatureCount; ++i) {
        double v = parse_double(fields[3 + i]);
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
          throw Error("feature value " + fields[3 + i] + " outside [0, 1]");
        }
        row.features.values[i] = v;
      }
    } catch (const Error& e) {
      throw ParseError(source_name, line_no, e.what());
    }
    row.features.active = mask;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<FeatureRow> load_feature_rows(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_feature_rows(in, path.string());
}

}  // namespace mlqa
