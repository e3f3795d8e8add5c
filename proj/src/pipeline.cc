#include "mlqa/pipeline.h"

#include <fstream>
#include <optional>

#include "mlqa/error.h"
#include "mlqa/translation.h"

namespace mlqa {

namespace {

std::filesystem::path if_exists(const std::filesystem::path& p) {
  return std::filesystem::exists(p) ? p : std::filesystem::path();
}

[[noreturn]] void missing(Method method, Language lang) {
  throw Error("missing resource: " + std::string(to_string(method)) + " for " +
              std::string(to_string(lang)));
}

}  // namespace

ResourcePaths ResourcePaths::from_directory(const std::filesystem::path& dir) {
  ResourcePaths paths;
  paths.questions = dir / "questions.tsv";
  paths.corpus = dir / "corpus.tsv";
  paths.judgments = dir / "judgments.tsv";
  paths.stopwords = if_exists(dir / "stopwords.txt");
  paths.templates = if_exists(dir / "templates.txt");
  for (Language lang : {Language::ar, Language::ch}) {
    const std::string prefix(to_string(lang));
    LanguageResourcePaths l;
    l.word_table = if_exists(dir / (prefix + ".word.tsv"));
    l.aligned = if_exists(dir / (prefix + ".aligned.tsv"));
    l.context_table = if_exists(dir / (prefix + ".context.tsv"));
    l.grammar = if_exists(dir / (prefix + ".grammar.txt"));
    l.nbest = if_exists(dir / (prefix + ".nbest.txt"));
    paths.languages.emplace(lang, std::move(l));
  }
  return paths;
}

void RunConfig::validate() const {
  if (experiment.k < 1) throw Error("AP cutoff k must be at least 1");
  if (experiment.folds < 2) throw Error("cross-validation needs at least two folds");
}

void attach_translations(std::vector<Question>& questions,
                         const std::vector<Language>& languages,
                         const FeatureSelection& selection,
                         const ResourcePaths& paths) {
  if (selection.set == FeatureSet::lexql) return;
  for (Language lang : languages) {
    if (lang == Language::en) continue;
    const auto found = paths.languages.find(lang);
    const LanguageResourcePaths none;
    const LanguageResourcePaths& p = found == paths.languages.end() ? none : found->second;
    for (std::size_t m = 0; m < kMethods.size(); ++m) {
      if (!selection.methods[m]) continue;
      const Method method = kMethods[m];
      switch (method) {
        case Method::word: {
          TranslationTable table;
          if (!p.word_table.empty()) {
            table = load_table(p.word_table);
          } else if (!p.aligned.empty()) {
            table = build_word_table(load_aligned_corpus(p.aligned));
          } else {
            missing(method, lang);
          }
          for (Question& q : questions) {
            q.translations[{lang, method}] = lookup_query(table, q.terms);
          }
          break;
        }
        case Method::context: {
          if (p.context_table.empty()) missing(method, lang);
          const TranslationTable table = load_table(p.context_table);
          for (Question& q : questions) {
            q.translations[{lang, method}] = lookup_query(table, q.terms);
          }
          break;
        }
        case Method::grammar: {
          if (p.grammar.empty()) missing(method, lang);
          const auto rules = load_grammar(p.grammar);
          for (Question& q : questions) {
            q.translations[{lang, method}] = build_grammar_table(rules, q.terms);
          }
          break;
        }
        case Method::nbest: {
          if (p.nbest.empty()) missing(method, lang);
          const NBestLists lists = load_nbest(p.nbest);
          for (Question& q : questions) {
            auto it = lists.find(q.id);
            const std::vector<NBestDerivation> empty;
            q.translations[{lang, method}] =
                build_nbest_table(it == lists.end() ? empty : it->second, q.terms);
          }
          break;
        }
      }
    }
  }
}

std::vector<JudgedPair> featurize_judgments(
    const std::vector<Question>& questions, const Corpus& corpus,
    const std::vector<Judgment>& judgments, const FeatureSelection& selection) {
  std::map<std::string, const Question*, std::less<>> by_id;
  for (const Question& q : questions) by_id.emplace(q.id, &q);
  std::vector<JudgedPair> pairs;
  pairs.reserve(judgments.size());
  for (const Judgment& j : judgments) {
    auto q = by_id.find(j.question_id);
    if (q == by_id.end()) {
      throw Error("judgment names unknown question '" + j.question_id + "'");
    }
    const Candidate& c = corpus.at(j.candidate_id);
    JudgedPair pair{j, c.language, featurize_pair(*q->second, c, corpus, selection)};
    pair.features.label = default_label(j);
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

PipelineResult run_pipeline(const RunConfig& config, const ResourcePaths& paths,
                            const std::filesystem::path& out_dir) {
  config.validate();
  const SimplifierRules rules = SimplifierRules::load(paths.stopwords, paths.templates);
  std::vector<Question> questions = load_questions(paths.questions, rules);
  const Corpus corpus = load_corpus(paths.corpus);
  const std::vector<Judgment> judgments = load_judgments(paths.judgments);
  check_judgments(judgments, corpus);

  std::vector<Language> languages;
  for (Language lang : {Language::ar, Language::ch}) {
    if (corpus.has_language(lang)) languages.push_back(lang);
  }
  attach_translations(questions, languages, config.features, paths);
  const std::vector<JudgedPair> pairs =
      featurize_judgments(questions, corpus, judgments, config.features);

  PipelineResult result;
  ExperimentConfig experiment = config.experiment;
  if (config.select_subset) {
    SubsetSelection selection =
        select_best_subset(kSubsetCriteria, pairs, experiment.folds,
                           experiment.seed, experiment.k, experiment.trainer);
    experiment.criterion = selection.best;
    result.subset_scores = std::move(selection.scores);
  }
  result.criterion = experiment.criterion;

  ExperimentResult run = cross_validate(pairs, experiment);
  result.report.ap = run.ap;
  result.report.map = run.map();
  std::vector<RankedList> top;
  for (const RankedList& list : run.lists) {
    RankedList cut = list;
    if (cut.entries.size() > experiment.k) cut.entries.resize(experiment.k);
    top.push_back(std::move(cut));
  }
  result.report.ratio = language_ratio(top);
  result.lists = std::move(run.lists);

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    {
      std::vector<FeatureRow> rows;
      for (const JudgedPair& p : pairs) {
        rows.push_back({p.judgment.question_id, p.judgment.candidate_id, p.features});
      }
      auto out = open_output(out_dir / "features.tsv");
      write_feature_rows(out, rows);
    }
    {
      auto out = open_output(out_dir / "ranked.tsv");
      write_ranked_lists(out, result.lists);
    }
    {
      auto out = open_output(out_dir / "report.tsv");
      out << "# criterion\t" << to_string(result.criterion) << '\n';
      for (const SubsetScore& s : result.subset_scores) {
        out << "# subset\t" << to_string(s.criterion) << '\t' << s.retained << '\t'
            << (s.cv_map ? format_fixed(*s.cv_map, 6) : "-") << '\n';
      }
      write_report(out, result.report);
    }
  }
  return result;
}

}  // namespace mlqa
