#ifndef MLQA_SYNTHETIC_H_
#define MLQA_SYNTHETIC_H_

// Deterministic synthetic bilingual collections. Every English topic word
// has fan_out synonyms per foreign language; the one-best sentence
// translation only recovers the primary synonym, while the probabilistic
// tables carry mass on all of them.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mlqa/corpus.h"
#include "mlqa/translation.h"

namespace mlqa {

struct GeneratorSpec {
  std::size_t questions = 24;
  std::size_t terms_per_question = 3;
  std::size_t topic_vocabulary = 60;
  std::size_t filler_vocabulary = 80;
  std::size_t fan_out = 3;
  // Chance that a relevant foreign answer realizes a question term with a
  // non-primary synonym.
  double synonym_fraction = 0.5;
  std::size_t docs_per_language = 3;
  std::size_t sentences_per_doc = 5;
  double relevant_rate = 0.25;
  // Foreign pairs judged both on the original and on the translation.
  double doubly_annotated = 0.6;
  // Chance that the source judgment of a doubly annotated pair copies the
  // verdict on the preceding sentence (flipped for a post's first sentence).
  double inconsistent_noise = 0.0;
  // Chance that a parallel-corpus occurrence of a topic word is unaligned.
  double unaligned_rate = 0.1;
  std::uint64_t seed = 1;

  // Throws Error on out-of-range fields.
  void validate() const;
};

struct LanguageTables {
  AlignedPairCorpus aligned;
  TranslationTable word;
  TranslationTable context;
  std::vector<GrammarRule> grammar;
  NBestLists nbest;
};

struct Fixture {
  GeneratorSpec spec;
  std::vector<std::pair<std::string, std::string>> questions;  // id, raw text
  Corpus corpus;
  std::vector<Judgment> judgments;
  std::map<Language, LanguageTables> tables;  // ar and ch
};

Fixture generate(const GeneratorSpec& spec);

// key \t value, one field per line.
void write_generator_spec(std::ostream& out, const GeneratorSpec& spec);
GeneratorSpec read_generator_spec(std::istream& in,
                                  const std::string& source_name);

// Writes generator.tsv, questions.tsv, corpus.tsv, judgments.tsv and, per
// foreign language, <lang>.aligned.tsv, <lang>.word.tsv, <lang>.context.tsv,
// <lang>.grammar.txt and <lang>.nbest.txt into dir (created if needed).
void write_fixture(const Fixture& fixture, const std::filesystem::path& dir);

}  // namespace mlqa

#endif  // MLQA_SYNTHETIC_H_
