#include "mlqa/synthetic.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "mlqa/error.h"
#include "mlqa/random.h"

namespace mlqa {

namespace {

constexpr std::size_t kAlignedPerWord = 8;
constexpr std::size_t kNBestDepth = 10;
const Language kForeign[] = {Language::ar, Language::ch};

std::string numbered(const char* format, std::size_t a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, a);
  return buf;
}

std::string topic_word(std::size_t i) { return numbered("t%03zu", i); }
std::string filler_word(std::size_t i) { return numbered("f%03zu", i); }

std::string foreign_topic(Language lang, std::size_t i, std::size_t synonym) {
  return std::string(to_string(lang)) + "_" + topic_word(i) + "_" +
         std::to_string(synonym + 1);
}

std::string foreign_filler(Language lang, std::size_t i) {
  return std::string(to_string(lang)) + "_" + filler_word(i);
}

// Synonym j has weight proportional to fan_out - j.
std::vector<double> synonym_probabilities(std::size_t fan_out) {
  std::vector<double> p(fan_out);
  const double total = static_cast<double>(fan_out * (fan_out + 1) / 2);
  for (std::size_t j = 0; j < fan_out; ++j) {
    p[j] = static_cast<double>(fan_out - j) / total;
  }
  return p;
}

std::size_t draw(Rng& rng, const std::vector<double>& p) {
  double u = rng.uniform();
  for (std::size_t j = 0; j + 1 < p.size(); ++j) {
    if (u < p[j]) return j;
    u -= p[j];
  }
  return p.size() - 1;
}

// What the one-best system makes of a foreign token: the primary synonym
// comes back as the topic word, the others as an unrelated filler word.
std::string back_translate(const GeneratorSpec& spec, std::size_t topic,
                           std::size_t synonym) {
  if (synonym == 0) return topic_word(topic);
  return filler_word((topic * 7 + synonym * 13) % spec.filler_vocabulary);
}

struct Slot {
  bool topic = false;
  std::size_t word = 0;
};

std::vector<Slot> sentence_slots(const GeneratorSpec& spec, Rng& rng,
                                 const std::vector<std::size_t>& terms,
                                 bool relevant) {
  std::vector<Slot> slots;
  if (relevant) {
    std::vector<std::size_t> chosen = terms;
    rng.shuffle(chosen);
    std::size_t keep = terms.size() >= 2 ? 2 : 1;
    if (terms.size() > 2 && rng.bernoulli(0.5)) keep = terms.size();
    for (std::size_t i = 0; i < keep; ++i) slots.push_back({true, chosen[i]});
  } else {
    if (rng.bernoulli(0.5)) {
      slots.push_back({true, terms[rng.below(terms.size())]});
    }
    const std::size_t distractors = 1 + rng.below(2);
    for (std::size_t i = 0; i < distractors; ++i) {
      std::size_t w = rng.below(spec.topic_vocabulary);
      if (std::find(terms.begin(), terms.end(), w) == terms.end()) {
        slots.push_back({true, w});
      }
    }
  }
  const std::size_t length = 7 + rng.below(4);
  while (slots.size() < length) {
    slots.push_back({false, rng.below(spec.filler_vocabulary)});
  }
  rng.shuffle(slots);
  return slots;
}

Candidate realize(const GeneratorSpec& spec, Rng& rng,
                  const std::vector<Slot>& slots, Language lang) {
  Candidate c;
  c.language = lang;
  for (const Slot& s : slots) {
    if (lang == Language::en) {
      c.tokens.push_back(s.topic ? topic_word(s.word) : filler_word(s.word));
      continue;
    }
    if (!s.topic) {
      c.tokens.push_back(foreign_filler(lang, s.word));
      c.onebest_en_tokens.push_back(filler_word(s.word));
      continue;
    }
    std::size_t synonym = 0;
    if (spec.fan_out > 1 && rng.bernoulli(spec.synonym_fraction)) {
      synonym = 1 + rng.below(spec.fan_out - 1);
    }
    c.tokens.push_back(foreign_topic(lang, s.word, synonym));
    c.onebest_en_tokens.push_back(back_translate(spec, s.word, synonym));
  }
  if (lang == Language::en) c.onebest_en_tokens = c.tokens;
  return c;
}

int draw_score(Rng& rng, bool relevant) {
  return relevant ? 3 + static_cast<int>(rng.below(3))
                  : 1 + static_cast<int>(rng.below(2));
}

LanguageTables build_tables(const GeneratorSpec& spec, Rng& rng, Language lang,
                            const std::vector<std::vector<std::size_t>>& questions,
                            const std::vector<std::string>& question_ids) {
  const auto p = synonym_probabilities(spec.fan_out);
  LanguageTables t;
  for (std::size_t w = 0; w < spec.topic_vocabulary; ++w) {
    for (std::size_t n = 0; n < kAlignedPerWord; ++n) {
      AlignedPair pair;
      const std::size_t length = 3 + rng.below(3);
      const std::size_t at = rng.below(length);
      for (std::size_t i = 0; i < length; ++i) {
        if (i == at) {
          pair.source.push_back(topic_word(w));
          pair.target.push_back(foreign_topic(lang, w, draw(rng, p)));
          if (!rng.bernoulli(spec.unaligned_rate)) pair.links.push_back({i, i});
        } else {
          const std::size_t f = rng.below(spec.filler_vocabulary);
          pair.source.push_back(filler_word(f));
          pair.target.push_back(foreign_filler(lang, f));
          pair.links.push_back({i, i});
        }
      }
      t.aligned.push_back(std::move(pair));
    }
  }
  t.word = build_word_table(t.aligned);

  // The context model is sharper than the alignment estimate.
  std::map<std::string, Distribution, std::less<>> context_rows;
  for (std::size_t w = 0; w < spec.topic_vocabulary; ++w) {
    std::map<std::string, double, std::less<>> weights;
    for (std::size_t j = 0; j < spec.fan_out; ++j) {
      weights[foreign_topic(lang, w, j)] = p[j] * p[j];
    }
    context_rows.emplace(topic_word(w), Distribution::normalized(weights));
  }
  t.context = TranslationTable(std::move(context_rows));

  for (std::size_t w = 0; w < spec.topic_vocabulary; ++w) {
    for (std::size_t j = 0; j < spec.fan_out; ++j) {
      t.grammar.push_back({{topic_word(w)}, {foreign_topic(lang, w, j)}, {{0, 0}},
                           p[j]});
    }
  }
  for (const auto& terms : questions) {
    for (std::size_t i = 0; i + 1 < terms.size(); ++i) {
      t.grammar.push_back({{topic_word(terms[i]), topic_word(terms[i + 1])},
                           {foreign_topic(lang, terms[i], 0),
                            foreign_topic(lang, terms[i + 1], 0)},
                           {{0, 0}, {1, 1}},
                           0.2});
    }
  }

  for (std::size_t q = 0; q < questions.size(); ++q) {
    auto& list = t.nbest[question_ids[q]];
    for (std::size_t r = 0; r < kNBestDepth; ++r) {
      NBestDerivation d;
      d.rank = static_cast<int>(r + 1);
      for (std::size_t term : questions[q]) {
        const std::size_t j = r == 0 ? 0 : draw(rng, p);
        d.rules.push_back({{topic_word(term)}, {foreign_topic(lang, term, j)},
                           {{0, 0}}, p[j]});
      }
      list.push_back(std::move(d));
    }
  }
  return t;
}

void check_fraction(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error(std::string("generator field ") + name + " must lie in [0, 1]");
  }
}

}  // namespace

void GeneratorSpec::validate() const {
  if (questions == 0) throw Error("generator needs at least one question");
  if (terms_per_question == 0) throw Error("questions need at least one term");
  if (topic_vocabulary < terms_per_question) {
    throw Error("topic vocabulary smaller than terms per question");
  }
  if (filler_vocabulary == 0) throw Error("filler vocabulary must be nonempty");
  if (fan_out == 0) throw Error("fan-out must be at least 1");
  if (docs_per_language == 0 || sentences_per_doc == 0) {
    throw Error("documents and sentences per document must be positive");
  }
  check_fraction(synonym_fraction, "synonym_fraction");
  check_fraction(relevant_rate, "relevant_rate");
  check_fraction(doubly_annotated, "doubly_annotated");
  check_fraction(inconsistent_noise, "inconsistent_noise");
  check_fraction(unaligned_rate, "unaligned_rate");
}

Fixture generate(const GeneratorSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  Fixture fx;
  fx.spec = spec;

  std::vector<std::vector<std::size_t>> question_terms;
  std::vector<std::string> ids;
  for (std::size_t q = 0; q < spec.questions; ++q) {
    std::vector<std::size_t> pool(spec.topic_vocabulary);
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    rng.shuffle(pool);
    pool.resize(spec.terms_per_question);
    std::string text = "Tell me about";
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (i > 0) text += i + 1 == pool.size() ? " and" : ",";
      text += " " + topic_word(pool[i]);
    }
    ids.push_back(numbered("q%02zu", q + 1));
    fx.questions.emplace_back(ids.back(), text + ".");
    question_terms.push_back(std::move(pool));
  }

  std::vector<Candidate> candidates;
  for (std::size_t q = 0; q < spec.questions; ++q) {
    for (Language lang : kLanguages) {
      for (std::size_t d = 0; d < spec.docs_per_language; ++d) {
        bool previous_relevant = false;
        const std::string doc = ids[q] + "-" + std::string(to_string(lang)) +
                                "-d" + std::to_string(d + 1);
        for (std::size_t s = 0; s < spec.sentences_per_doc; ++s) {
          const bool relevant = rng.bernoulli(spec.relevant_rate);
          Candidate c = realize(
              spec, rng, sentence_slots(spec, rng, question_terms[q], relevant),
              lang);
          c.id = doc + "-s" + std::to_string(s + 1);
          c.doc_id = doc;
          c.position = static_cast<int>(s);
          if (s > 0) c.prev_id = candidates.back().id;

          Judgment j;
          j.question_id = ids[q];
          j.candidate_id = c.id;
          if (lang == Language::en) {
            j.en_score = draw_score(rng, relevant);
          } else if (rng.bernoulli(spec.doubly_annotated)) {
            // A noisy source judgment carries over the verdict on the
            // preceding sentence of the post; opening sentences are flipped.
            bool seen = relevant;
            if (rng.bernoulli(spec.inconsistent_noise)) {
              seen = s > 0 ? previous_relevant : !relevant;
            }
            j.source_score = draw_score(rng, seen);
            j.en_score = draw_score(rng, relevant);
          } else if (rng.bernoulli(0.5)) {
            j.source_score = draw_score(rng, relevant);
          } else {
            j.en_score = draw_score(rng, relevant);
          }
          fx.judgments.push_back(std::move(j));
          previous_relevant = relevant;
          candidates.push_back(std::move(c));
        }
      }
    }
  }
  fx.corpus = Corpus(std::move(candidates));

  for (Language lang : kForeign) {
    fx.tables.emplace(lang, build_tables(spec, rng, lang, question_terms, ids));
  }
  return fx;
}

void write_generator_spec(std::ostream& out, const GeneratorSpec& spec) {
  out << "questions\t" << spec.questions << '\n'
      << "terms_per_question\t" << spec.terms_per_question << '\n'
      << "topic_vocabulary\t" << spec.topic_vocabulary << '\n'
      << "filler_vocabulary\t" << spec.filler_vocabulary << '\n'
      << "fan_out\t" << spec.fan_out << '\n'
      << "synonym_fraction\t" << format_double(spec.synonym_fraction) << '\n'
      << "docs_per_language\t" << spec.docs_per_language << '\n'
      << "sentences_per_doc\t" << spec.sentences_per_doc << '\n'
      << "relevant_rate\t" << format_double(spec.relevant_rate) << '\n'
      << "doubly_annotated\t" << format_double(spec.doubly_annotated) << '\n'
      << "inconsistent_noise\t" << format_double(spec.inconsistent_noise) << '\n'
      << "unaligned_rate\t" << format_double(spec.unaligned_rate) << '\n'
      << "seed\t" << spec.seed << '\n';
}

GeneratorSpec read_generator_spec(std::istream& in,
                                  const std::string& source_name) {
  GeneratorSpec spec;
  const std::map<std::string, std::size_t*> counts = {
      {"questions", &spec.questions},
      {"terms_per_question", &spec.terms_per_question},
      {"topic_vocabulary", &spec.topic_vocabulary},
      {"filler_vocabulary", &spec.filler_vocabulary},
      {"fan_out", &spec.fan_out},
      {"docs_per_language", &spec.docs_per_language},
      {"sentences_per_doc", &spec.sentences_per_doc}};
  const std::map<std::string, double*> fractions = {
      {"synonym_fraction", &spec.synonym_fraction},
      {"relevant_rate", &spec.relevant_rate},
      {"doubly_annotated", &spec.doubly_annotated},
      {"inconsistent_noise", &spec.inconsistent_noise},
      {"unaligned_rate", &spec.unaligned_rate}};
  for_each_record(in, [&](std::size_t line_no, const std::string& line) {
    auto fields = split_tabs(line);
    if (fields.size() != 2) {
      throw ParseError(source_name, line_no, "expected key and value");
    }
    try {
      if (auto c = counts.find(fields[0]); c != counts.end()) {
        const long long v = parse_integer(fields[1]);
        if (v < 0) throw Error("negative count");
        *c->second = static_cast<std::size_t>(v);
      } else if (auto f = fractions.find(fields[0]); f != fractions.end()) {
        *f->second = parse_double(fields[1]);
      } else if (fields[0] == "seed") {
        const long long v = parse_integer(fields[1]);
        if (v < 0) throw Error("negative seed");
        spec.seed = static_cast<std::uint64_t>(v);
      } else {
        throw Error("unknown generator field '" + fields[0] + "'");
      }
    } catch (const Error& e) {
      throw ParseError(source_name, line_no, e.what());
    }
  });
  spec.validate();
  return spec;
}

void write_fixture(const Fixture& fixture, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_output(dir / "generator.tsv");
    write_generator_spec(out, fixture.spec);
  }
  {
    auto out = open_output(dir / "questions.tsv");
    for (const auto& [id, text] : fixture.questions) {
      out << id << '\t' << text << '\n';
    }
  }
  {
    auto out = open_output(dir / "corpus.tsv");
    write_corpus(out, fixture.corpus);
  }
  {
    auto out = open_output(dir / "judgments.tsv");
    write_judgments(out, fixture.judgments);
  }
  for (const auto& [lang, t] : fixture.tables) {
    const std::string prefix(to_string(lang));
    {
      auto out = open_output(dir / (prefix + ".aligned.tsv"));
      write_aligned_corpus(out, t.aligned);
    }
    {
      auto out = open_output(dir / (prefix + ".word.tsv"));
      write_table(out, t.word);
    }
    {
      auto out = open_output(dir / (prefix + ".context.tsv"));
      write_table(out, t.context);
    }
    {
      auto out = open_output(dir / (prefix + ".grammar.txt"));
      for (const GrammarRule& r : t.grammar) out << format_grammar_rule(r) << '\n';
    }
    {
      auto out = open_output(dir / (prefix + ".nbest.txt"));
      write_nbest(out, t.nbest);
    }
  }
}

}  // namespace mlqa
