#include "mlqa/experiment.h"

#include <algorithm>
#include <map>
#include <set>

namespace mlqa {

std::string_view to_string(RankingMode mode) {
  return mode == RankingMode::l2t ? "l2t" : "l2ct";
}

RankingMode parse_ranking_mode(std::string_view text) {
  if (text == "l2t" || text == "L2T") return RankingMode::l2t;
  if (text == "l2ct" || text == "L2CT") return RankingMode::l2ct;
  throw Error("unknown ranking mode '" + std::string(text) + "'");
}

double ExperimentResult::map() const {
  std::vector<double> values;
  for (const auto& [qid, ap] : ap) values.push_back(ap);
  return mean_average_precision(values);
}

namespace {

struct QuestionPool {
  std::string id;
  std::vector<std::size_t> pairs;
  std::set<std::string, std::less<>> relevant;
};

std::vector<RankInput> inputs_for(std::span<const JudgedPair> pairs,
                                  const std::vector<std::size_t>& indices,
                                  std::optional<Language> language) {
  std::vector<RankInput> inputs;
  for (std::size_t i : indices) {
    const JudgedPair& p = pairs[i];
    if (language && p.language != *language) continue;
    inputs.push_back({p.judgment.candidate_id, p.language, p.features});
  }
  return inputs;
}

void require_both_labels(const std::vector<TrainingExample>& examples,
                         const std::string& what) {
  bool pos = false, neg = false;
  for (const TrainingExample& ex : examples) (ex.label ? pos : neg) = true;
  if (!pos || !neg) {
    throw DegenerateFoldError(what + " has no " +
                              std::string(pos ? "negative" : "positive") +
                              " training example");
  }
}

double list_ap(const RankedList& list, const QuestionPool& pool,
               std::size_t k) {
  std::vector<bool> relevance;
  for (const RankedEntry& e : list.entries) {
    relevance.push_back(pool.relevant.count(e.candidate_id) > 0);
  }
  return ap_k(relevance, k, pool.relevant.size());
}

}  // namespace

ExperimentResult cross_validate(std::span<const JudgedPair> pairs,
                                const ExperimentConfig& config) {
  if (config.k == 0) throw Error("AP cutoff k must be at least 1");
  std::vector<QuestionPool> pools;
  std::map<std::string, std::size_t> pool_index;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Judgment& j = pairs[i].judgment;
    auto [it, inserted] = pool_index.emplace(j.question_id, pools.size());
    if (inserted) pools.push_back({j.question_id, {}, {}});
    QuestionPool& pool = pools[it->second];
    pool.pairs.push_back(i);
    if (evaluation_label(j)) pool.relevant.insert(j.candidate_id);
  }
  std::vector<std::string> ids;
  for (const QuestionPool& pool : pools) ids.push_back(pool.id);
  const std::vector<Fold> folds = kfold_split(ids, config.folds, config.seed);

  std::map<std::string, RankedList> final_lists;
  std::map<std::string, std::vector<RankedList>> per_language;

  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::map<Language, std::vector<TrainingExample>> by_language;
    std::vector<TrainingExample> training;
    for (const std::string& qid : folds[f].train) {
      for (std::size_t i : pools[pool_index.at(qid)].pairs) {
        const JudgedPair& p = pairs[i];
        if (auto label = subset_label(p.judgment, p.language, config.criterion)) {
          training.push_back({p.features, *label});
          by_language[p.language].push_back({p.features, *label});
        }
      }
    }
    const std::string fold_name = "fold " + std::to_string(f + 1) + " (" +
                                  std::string(to_string(config.criterion)) + ")";

    if (config.mode == RankingMode::l2t) {
      require_both_labels(training, fold_name);
      const EnsembleModel model = train_ensemble(training, config.trainer);
      for (const std::string& qid : folds[f].test) {
        const QuestionPool& pool = pools[pool_index.at(qid)];
        auto inputs = inputs_for(pairs, pool.pairs, std::nullopt);
        const std::size_t n = config.top_n ? config.top_n : inputs.size();
        final_lists[qid] = rank(model, qid, std::nullopt, inputs, n);
      }
      continue;
    }

    std::map<Language, EnsembleModel> models;
    for (const auto& [language, examples] : by_language) {
      require_both_labels(examples, fold_name + " " +
                                        std::string(to_string(language)));
      models.emplace(language, train_ensemble(examples, config.trainer));
    }
    for (const std::string& qid : folds[f].test) {
      const QuestionPool& pool = pools[pool_index.at(qid)];
      std::vector<RankedList> lists;
      for (Language language : kLanguages) {
        auto inputs = inputs_for(pairs, pool.pairs, language);
        if (inputs.empty()) continue;
        auto model = models.find(language);
        if (model == models.end()) {
          throw DegenerateFoldError(fold_name + " has no " +
                                    std::string(to_string(language)) +
                                    " training data");
        }
        lists.push_back(normalize_scores(
            rank(model->second, qid, language, inputs, inputs.size())));
      }
      per_language[qid] = std::move(lists);
    }
  }

  ExperimentResult result;
  if (config.mode == RankingMode::l2ct) {
    std::map<std::string, double> weights;
    if (config.merge == MergeStrategy::weighted && !config.english_weight) {
      std::vector<MergeQuestion> questions;
      for (const QuestionPool& pool : pools) {
        questions.push_back({pool.id, per_language[pool.id], pool.relevant,
                             pool.relevant.size()});
      }
      const std::size_t n = config.top_n ? config.top_n : pairs.size();
      weights = learn_merge_weight(questions, config.weight_grid, n, config.k);
      result.merge_weights = weights;
    }
    for (const QuestionPool& pool : pools) {
      const auto& lists = per_language[pool.id];
      std::size_t total = 0;
      for (const auto& list : lists) total += list.entries.size();
      const std::size_t n = config.top_n ? config.top_n : total;
      RankedList merged;
      switch (config.merge) {
        case MergeStrategy::uniform:
          merged = merge_uniform(lists, n);
          break;
        case MergeStrategy::alternate:
          merged = merge_alternate(lists, n);
          break;
        case MergeStrategy::english_first:
          merged = merge_english_first(lists, n, config.threshold);
          break;
        case MergeStrategy::weighted:
          merged = merge_weighted(
              lists, n,
              config.english_weight ? *config.english_weight : weights.at(pool.id));
          break;
      }
      merged.question_id = pool.id;
      final_lists[pool.id] = std::move(merged);
    }
  }

  std::map<std::string, double> ap_of;
  for (const QuestionPool& pool : pools) {
    const RankedList& list = final_lists.at(pool.id);
    const double ap = list_ap(list, pool, config.k);
    ap_of[pool.id] = ap;
    result.ap.emplace_back(pool.id, ap);
    result.lists.push_back(list);
  }
  for (const Fold& fold : folds) {
    std::vector<double> values;
    for (const std::string& qid : fold.test) values.push_back(ap_of.at(qid));
    result.fold_map.push_back(mean_average_precision(values));
  }
  return result;
}

}  // namespace mlqa
