// Command-line front end for the multilingual answer-ranking pipeline.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "mlqa/classifier.h"
#include "mlqa/corpus.h"
#include "mlqa/data_selection.h"
#include "mlqa/error.h"
#include "mlqa/evaluation.h"
#include "mlqa/experiment.h"
#include "mlqa/features.h"
#include "mlqa/pipeline.h"
#include "mlqa/question.h"
#include "mlqa/ranking.h"
#include "mlqa/synthetic.h"
#include "mlqa/translation.h"

namespace fs = std::filesystem;
using namespace mlqa;

namespace {

FeatureSelection make_selection(const std::string& set,
                                const std::vector<std::string>& disabled) {
  FeatureSelection s;
  s.set = parse_feature_set(set);
  for (const std::string& name : disabled) {
    const Method m = parse_method(name);
    for (std::size_t k = 0; k < kMethods.size(); ++k) {
      if (kMethods[k] == m) s.methods[k] = false;
    }
  }
  return s;
}

// Relevant candidate ids and their count per question.
std::map<std::string, std::set<std::string, std::less<>>> relevant_sets(
    const std::vector<Judgment>& judgments) {
  std::map<std::string, std::set<std::string, std::less<>>> out;
  for (const Judgment& j : judgments) {
    auto& set = out[j.question_id];
    if (evaluation_label(j)) set.insert(j.candidate_id);
  }
  return out;
}

std::vector<double> list_ap(const std::vector<RankedList>& lists,
                            const std::vector<Judgment>& judgments, std::size_t k,
                            std::vector<std::pair<std::string, double>>* rows) {
  const auto relevant = relevant_sets(judgments);
  std::vector<double> values;
  for (const RankedList& list : lists) {
    auto it = relevant.find(list.question_id);
    std::vector<bool> hits;
    std::size_t total = 0;
    if (it != relevant.end()) {
      total = it->second.size();
      for (const RankedEntry& e : list.entries) {
        hits.push_back(it->second.count(e.candidate_id) > 0);
      }
    } else {
      hits.assign(list.entries.size(), false);
    }
    values.push_back(ap_k(hits, k, total));
    if (rows) rows->emplace_back(list.question_id, values.back());
  }
  return values;
}

// Lists from several files grouped by question, in first-seen order.
std::vector<std::pair<std::string, std::vector<RankedList>>> group_lists(
    const std::vector<std::string>& files) {
  std::vector<std::pair<std::string, std::vector<RankedList>>> grouped;
  std::map<std::string, std::size_t> index;
  for (const std::string& f : files) {
    for (RankedList& list : load_ranked_lists(f)) {
      auto [it, inserted] = index.emplace(list.question_id, grouped.size());
      if (inserted) grouped.push_back({list.question_id, {}});
      grouped[it->second].second.push_back(std::move(list));
    }
  }
  return grouped;
}

void print_subset_table(const std::vector<SubsetScore>& scores) {
  std::cout << "criterion\tretained\tcv_map\n";
  for (const SubsetScore& s : scores) {
    std::cout << to_string(s.criterion) << '\t' << s.retained << '\t'
              << (s.cv_map ? format_fixed(*s.cv_map, 6) : "-") << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multilingual question answering: translation tables, "
               "features, ranking, merging and evaluation"};
  app.require_subcommand(1);

  // build-tables
  auto* build = app.add_subcommand(
      "build-tables", "Translate questions into one collection language");
  std::string bt_questions, bt_aligned, bt_word, bt_context, bt_grammar,
      bt_nbest, bt_language = "ar", bt_out;
  build->add_option("--questions", bt_questions, "Question file")->required();
  build->add_option("--language", bt_language, "Collection language (ar, ch)");
  build->add_option("--aligned", bt_aligned, "Word-aligned parallel corpus");
  build->add_option("--word-table", bt_word, "Precomputed word table");
  build->add_option("--context", bt_context, "Context model table");
  build->add_option("--grammar", bt_grammar, "Synchronous grammar rules");
  build->add_option("--nbest", bt_nbest, "N-best derivations per question");
  build->add_option("--out-dir", bt_out, "Output directory")->required();

  // featurize
  auto* featurize = app.add_subcommand(
      "featurize", "Compute features for every judged pair");
  std::string ft_data, ft_out, ft_set = "both";
  std::vector<std::string> ft_disable;
  featurize->add_option("--data", ft_data, "Resource directory")->required();
  featurize->add_option("--features", ft_set, "LexCL, LexQL or both");
  featurize->add_option("--disable-method", ft_disable,
                        "Mask a translation method (word, 10best, context, grammar)");
  featurize->add_option("--out", ft_out, "Feature file")->required();

  // train
  auto* train = app.add_subcommand("train", "Train the max-ent ensemble");
  std::string tr_features, tr_out, tr_criterion = "all", tr_data;
  TrainerConfig tr_config;
  train->add_option("--features", tr_features, "Labeled feature file")->required();
  train->add_option("--criterion", tr_criterion, "Training subset");
  train->add_option("--data", tr_data,
                    "Resource directory, needed for subsets other than all");
  train->add_option("--l2", tr_config.l2, "L2 penalty");
  train->add_option("--max-iterations", tr_config.max_iterations);
  train->add_option("--seed", tr_config.seed, "Seed for the negative split");
  train->add_option("--out", tr_out, "Model file")->required();

  // rank
  auto* rank_cmd = app.add_subcommand("rank", "Score and rank candidates");
  std::string rk_model, rk_features, rk_corpus, rk_out;
  std::size_t rk_n = 0;
  std::optional<std::string> rk_language;
  rank_cmd->add_option("--model", rk_model, "Model file")->required();
  rank_cmd->add_option("--features", rk_features, "Feature file")->required();
  rank_cmd->add_option("--corpus", rk_corpus, "Corpus file")->required();
  rank_cmd->add_option("--language", rk_language,
                       "Keep only this language and normalize scores");
  rank_cmd->add_option("--n", rk_n, "List depth (0 keeps every candidate)");
  rank_cmd->add_option("--out", rk_out, "Ranked-list file")->required();

  // merge
  auto* merge = app.add_subcommand("merge", "Merge per-language ranked lists");
  std::vector<std::string> mg_inputs;
  std::string mg_strategy = "uniform", mg_out, mg_judgments;
  std::size_t mg_n = 0, mg_k = 20;
  double mg_threshold = 0.5;
  std::optional<double> mg_weight;
  std::vector<double> mg_grid = {2.0, 5.0, 10.0};
  merge->add_option("--input", mg_inputs, "Ranked-list files")->required();
  merge->add_option("--strategy", mg_strategy,
                    "uniform, alternate, english-first or weighted");
  merge->add_option("--n", mg_n, "Merged depth (0 keeps everything)");
  merge->add_option("--threshold", mg_threshold, "english-first threshold");
  merge->add_option("--weight", mg_weight, "Fixed English weight");
  merge->add_option("--judgments", mg_judgments,
                    "Judgments for learning the English weight");
  merge->add_option("--grid", mg_grid, "Candidate English weights")->delimiter(',');
  merge->add_option("--k", mg_k, "AP cutoff when learning the weight");
  merge->add_option("--out", mg_out, "Merged ranked-list file")->required();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "AP-k, MAP and significance");
  std::string ev_ranked, ev_judgments, ev_baseline, ev_out;
  std::size_t ev_k = 20, ev_iterations = 10000;
  std::uint64_t ev_seed = 0;
  evaluate->add_option("--ranked", ev_ranked, "Ranked-list file")->required();
  evaluate->add_option("--judgments", ev_judgments, "Judgments")->required();
  evaluate->add_option("--k", ev_k, "AP cutoff");
  evaluate->add_option("--baseline", ev_baseline,
                       "Second ranked-list file for a paired permutation test");
  evaluate->add_option("--iterations", ev_iterations, "Permutation samples");
  evaluate->add_option("--seed", ev_seed, "Permutation seed");
  evaluate->add_option("--out", ev_out, "Report file (default stdout)");

  // select-data
  auto* select = app.add_subcommand(
      "select-data", "Cross-validate every training subset");
  std::string sd_data, sd_set = "both";
  std::size_t sd_folds = 10, sd_k = 20;
  std::uint64_t sd_seed = 0;
  select->add_option("--data", sd_data, "Resource directory")->required();
  select->add_option("--features", sd_set, "LexCL, LexQL or both");
  select->add_option("--folds", sd_folds, "Folds");
  select->add_option("--k", sd_k, "AP cutoff");
  select->add_option("--seed", sd_seed, "Fold and ensemble seed");

  // mask-contexts
  auto* mask = app.add_subcommand(
      "mask-contexts", "Masked context samples around one token");
  std::string mk_sentence;
  std::size_t mk_focus = 0, mk_window = 2, mk_samples = 4;
  std::uint64_t mk_seed = 0;
  mask->add_option("--sentence", mk_sentence, "Space-separated tokens")->required();
  mask->add_option("--focus", mk_focus, "Index of the focus token")->required();
  mask->add_option("--window", mk_window, "Context window");
  mask->add_option("--samples", mk_samples, "Samples to draw");
  mask->add_option("--seed", mk_seed, "Sampling seed");

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic fixture");
  GeneratorSpec gen_spec;
  std::string gen_out, gen_spec_file;
  gen->add_option("--spec", gen_spec_file, "generator.tsv to start from");
  gen->add_option("--questions", gen_spec.questions);
  gen->add_option("--fan-out", gen_spec.fan_out);
  gen->add_option("--synonym-fraction", gen_spec.synonym_fraction);
  gen->add_option("--noise", gen_spec.inconsistent_noise,
                  "Flip rate on doubly annotated pairs");
  gen->add_option("--seed", gen_spec.seed);
  gen->add_option("--out-dir", gen_out, "Output directory")->required();

  // run
  auto* run = app.add_subcommand("run", "Full cross-validated pipeline");
  std::string rn_data, rn_out, rn_set = "both", rn_mode = "l2t",
                           rn_merge = "uniform", rn_criterion = "all";
  std::vector<std::string> rn_disable;
  RunConfig rn_config;
  run->add_option("--data", rn_data, "Resource directory")->required();
  run->add_option("--out-dir", rn_out, "Output directory");
  run->add_option("--features", rn_set, "LexCL, LexQL or both");
  run->add_option("--disable-method", rn_disable, "Mask a translation method");
  run->add_option("--mode", rn_mode, "l2t or l2ct");
  run->add_option("--merge", rn_merge, "Merge strategy for l2ct");
  run->add_option("--weight", rn_config.experiment.english_weight,
                  "Fixed English weight (learned when omitted)");
  run->add_option("--threshold", rn_config.experiment.threshold);
  run->add_option("--criterion", rn_criterion, "Training subset");
  run->add_flag("--select-subset", rn_config.select_subset,
                "Choose the subset by cross-validation");
  run->add_option("--folds", rn_config.experiment.folds);
  run->add_option("--k", rn_config.experiment.k);
  run->add_option("--top-n", rn_config.experiment.top_n);
  run->add_option("--l2", rn_config.experiment.trainer.l2);
  run->add_option("--seed", rn_config.experiment.seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) {
      const Language lang = parse_language(bt_language);
      auto questions = load_questions(bt_questions, SimplifierRules::english_default());
      ResourcePaths paths;
      LanguageResourcePaths& lp = paths.languages[lang];
      lp.word_table = bt_word;
      lp.aligned = bt_aligned;
      lp.context_table = bt_context;
      lp.grammar = bt_grammar;
      lp.nbest = bt_nbest;
      FeatureSelection selection;
      selection.methods = {!bt_word.empty() || !bt_aligned.empty(),
                           !bt_nbest.empty(), !bt_context.empty(),
                           !bt_grammar.empty()};
      attach_translations(questions, {lang}, selection, paths);
      fs::create_directories(bt_out);
      if (bt_word.empty() && !bt_aligned.empty()) {
        auto out = open_output(fs::path(bt_out) / (std::string(to_string(lang)) + ".word.tsv"));
        write_table(out, build_word_table(load_aligned_corpus(bt_aligned)));
      }
      for (std::size_t m = 0; m < kMethods.size(); ++m) {
        if (!selection.methods[m]) continue;
        auto out = open_output(fs::path(bt_out) /
                               (std::string(to_string(lang)) + "." +
                                std::string(to_string(kMethods[m])) + ".queries.tsv"));
        for (const Question& q : questions) {
          write_query(out, q.id, q.translations.at({lang, kMethods[m]}));
        }
      }
    } else if (*featurize) {
      const auto selection = make_selection(ft_set, ft_disable);
      const auto paths = ResourcePaths::from_directory(ft_data);
      auto questions = load_questions(
          paths.questions, SimplifierRules::load(paths.stopwords, paths.templates));
      const Corpus corpus = load_corpus(paths.corpus);
      const auto judgments = load_judgments(paths.judgments);
      check_judgments(judgments, corpus);
      std::vector<Language> languages;
      for (Language l : {Language::ar, Language::ch}) {
        if (corpus.has_language(l)) languages.push_back(l);
      }
      attach_translations(questions, languages, selection, paths);
      std::vector<FeatureRow> rows;
      for (const JudgedPair& p :
           featurize_judgments(questions, corpus, judgments, selection)) {
        rows.push_back({p.judgment.question_id, p.judgment.candidate_id, p.features});
      }
      auto out = open_output(ft_out);
      write_feature_rows(out, rows);
    } else if (*train) {
      const auto rows = load_feature_rows(tr_features);
      const SubsetCriterion criterion = parse_subset_criterion(tr_criterion);
      std::vector<TrainingExample> examples;
      if (criterion == SubsetCriterion::all) {
        for (const FeatureRow& r : rows) {
          if (!r.features.label) {
            throw Error("unlabeled row " + r.question_id + " " + r.candidate_id);
          }
          examples.push_back({r.features, *r.features.label});
        }
      } else {
        if (tr_data.empty()) throw Error("--data is required for subset " + tr_criterion);
        const auto paths = ResourcePaths::from_directory(tr_data);
        const Corpus corpus = load_corpus(paths.corpus);
        std::map<std::pair<std::string, std::string>, Judgment> by_pair;
        for (Judgment& j : load_judgments(paths.judgments)) {
          by_pair.emplace(std::pair(j.question_id, j.candidate_id), j);
        }
        for (const FeatureRow& r : rows) {
          auto j = by_pair.find({r.question_id, r.candidate_id});
          if (j == by_pair.end()) {
            throw Error("no judgment for " + r.question_id + " " + r.candidate_id);
          }
          const Candidate& c = corpus.at(r.candidate_id);
          if (auto label = subset_label(j->second, c.language, criterion)) {
            examples.push_back({r.features, *label});
          }
        }
      }
      const EnsembleModel model = train_ensemble(examples, tr_config);
      auto out = open_output(tr_out);
      write_model(out, model);
      std::cerr << "trained " << model.members.size() << " members on "
                << examples.size() << " examples\n";
    } else if (*rank_cmd) {
      const EnsembleModel model = load_model(rk_model);
      const Corpus corpus = load_corpus(rk_corpus);
      std::optional<Language> only;
      if (rk_language) only = parse_language(*rk_language);
      std::vector<std::pair<std::string, std::vector<RankInput>>> grouped;
      std::map<std::string, std::size_t> index;
      for (FeatureRow& r : load_feature_rows(rk_features)) {
        const Candidate& c = corpus.at(r.candidate_id);
        if (only && c.language != *only) continue;
        auto [it, inserted] = index.emplace(r.question_id, grouped.size());
        if (inserted) grouped.push_back({r.question_id, {}});
        grouped[it->second].second.push_back(
            {r.candidate_id, c.language, std::move(r.features)});
      }
      std::vector<RankedList> lists;
      for (auto& [qid, inputs] : grouped) {
        RankedList list =
            rank(model, qid, only, inputs, rk_n ? rk_n : inputs.size());
        lists.push_back(only ? normalize_scores(std::move(list)) : std::move(list));
      }
      auto out = open_output(rk_out);
      write_ranked_lists(out, lists);
    } else if (*merge) {
      const MergeStrategy strategy = parse_merge_strategy(mg_strategy);
      auto grouped = group_lists(mg_inputs);
      std::map<std::string, double> weights;
      if (strategy == MergeStrategy::weighted && !mg_weight) {
        if (mg_judgments.empty()) {
          throw Error("weighted merge needs --weight or --judgments");
        }
        const auto relevant = relevant_sets(load_judgments(mg_judgments));
        std::vector<MergeQuestion> questions;
        for (const auto& [qid, lists] : grouped) {
          auto it = relevant.find(qid);
          MergeQuestion mq{qid, lists, {}, 0};
          if (it != relevant.end()) {
            mq.relevant = it->second;
            mq.total_relevant = it->second.size();
          }
          questions.push_back(std::move(mq));
        }
        std::size_t n = mg_n;
        if (n == 0) {
          for (const auto& [qid, lists] : grouped) {
            std::size_t total = 0;
            for (const auto& l : lists) total += l.entries.size();
            n = std::max(n, total);
          }
        }
        weights = learn_merge_weight(questions, mg_grid, n, mg_k);
        for (const auto& [qid, w] : weights) {
          std::cerr << qid << "\tweight\t" << format_double(w) << '\n';
        }
      }
      std::vector<RankedList> merged;
      for (const auto& [qid, lists] : grouped) {
        std::size_t total = 0;
        for (const auto& l : lists) total += l.entries.size();
        const std::size_t n = mg_n ? mg_n : total;
        switch (strategy) {
          case MergeStrategy::uniform:
            merged.push_back(merge_uniform(lists, n));
            break;
          case MergeStrategy::alternate:
            merged.push_back(merge_alternate(lists, n));
            break;
          case MergeStrategy::english_first:
            merged.push_back(merge_english_first(lists, n, mg_threshold));
            break;
          case MergeStrategy::weighted:
            merged.push_back(
                merge_weighted(lists, n, mg_weight ? *mg_weight : weights.at(qid)));
            break;
        }
      }
      auto out = open_output(mg_out);
      write_ranked_lists(out, merged);
    } else if (*evaluate) {
      const auto judgments = load_judgments(ev_judgments);
      const auto lists = load_ranked_lists(ev_ranked);
      EvalReport report;
      const auto ap = list_ap(lists, judgments, ev_k, &report.ap);
      report.map = mean_average_precision(ap);
      std::vector<RankedList> top = lists;
      for (RankedList& l : top) {
        if (l.entries.size() > ev_k) l.entries.resize(ev_k);
      }
      report.ratio = language_ratio(top);
      if (!ev_baseline.empty()) {
        const auto base_lists = load_ranked_lists(ev_baseline);
        std::map<std::string, double> base_ap;
        std::vector<std::pair<std::string, double>> rows;
        list_ap(base_lists, judgments, ev_k, &rows);
        for (auto& [qid, v] : rows) base_ap[qid] = v;
        std::vector<double> a, b;
        for (const auto& [qid, v] : report.ap) {
          auto it = base_ap.find(qid);
          if (it == base_ap.end()) throw Error("baseline lacks question " + qid);
          a.push_back(v);
          b.push_back(it->second);
        }
        report.p_value = paired_permutation_test(a, b, ev_iterations, ev_seed);
      }
      if (ev_out.empty()) {
        write_report(std::cout, report);
      } else {
        auto out = open_output(ev_out);
        write_report(out, report);
      }
    } else if (*select) {
      const auto selection = make_selection(sd_set, {});
      const auto paths = ResourcePaths::from_directory(sd_data);
      auto questions = load_questions(
          paths.questions, SimplifierRules::load(paths.stopwords, paths.templates));
      const Corpus corpus = load_corpus(paths.corpus);
      const auto judgments = load_judgments(paths.judgments);
      check_judgments(judgments, corpus);
      std::vector<Language> languages;
      for (Language l : {Language::ar, Language::ch}) {
        if (corpus.has_language(l)) languages.push_back(l);
      }
      attach_translations(questions, languages, selection, paths);
      const auto pairs = featurize_judgments(questions, corpus, judgments, selection);
      const SubsetSelection result =
          select_best_subset(kSubsetCriteria, pairs, sd_folds, sd_seed, sd_k);
      print_subset_table(result.scores);
      std::cout << "best\t" << to_string(result.best) << '\n';
    } else if (*mask) {
      for (const Tokens& t : mask_contexts(split_whitespace(mk_sentence), mk_focus,
                                           mk_window, mk_samples, mk_seed)) {
        std::cout << join(t) << '\n';
      }
    } else if (*gen) {
      GeneratorSpec spec = gen_spec;
      if (!gen_spec_file.empty()) {
        std::ifstream in = open_input(gen_spec_file);
        spec = read_generator_spec(in, gen_spec_file);
        // Explicit flags still win over the file.
        for (const auto* opt : gen->get_options()) {
          if (opt->count() == 0) continue;
          const std::string& name = opt->get_name();
          if (name == "--questions") spec.questions = gen_spec.questions;
          if (name == "--fan-out") spec.fan_out = gen_spec.fan_out;
          if (name == "--synonym-fraction") spec.synonym_fraction = gen_spec.synonym_fraction;
          if (name == "--noise") spec.inconsistent_noise = gen_spec.inconsistent_noise;
          if (name == "--seed") spec.seed = gen_spec.seed;
        }
      }
      write_fixture(generate(spec), gen_out);
    } else if (*run) {
      rn_config.features = make_selection(rn_set, rn_disable);
      rn_config.experiment.mode = parse_ranking_mode(rn_mode);
      rn_config.experiment.merge = parse_merge_strategy(rn_merge);
      rn_config.experiment.criterion = parse_subset_criterion(rn_criterion);
      rn_config.experiment.trainer.seed = rn_config.experiment.seed;
      const PipelineResult result = run_pipeline(
          rn_config, ResourcePaths::from_directory(rn_data), rn_out);
      if (!result.subset_scores.empty()) print_subset_table(result.subset_scores);
      std::cout << "criterion\t" << to_string(result.criterion) << '\n';
      write_report(std::cout, result.report);
    }
  } catch (const std::exception& e) {
    std::cerr << "mlqa: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
