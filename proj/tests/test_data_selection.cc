#include <gtest/gtest.h>

#include "mlqa/data_selection.h"
#include "mlqa/error.h"
#include "mlqa/experiment.h"
#include "mlqa/random.h"

namespace mlqa {
namespace {

Candidate candidate(const std::string& id, Language lang) {
  Tokens t = {"x"};
  return {id, "d-" + id, lang, 0, t, t, std::nullopt};
}

std::vector<SubsetCriterion> members_of(const Judgment& j, Language lang) {
  std::vector<SubsetCriterion> out;
  for (SubsetCriterion c : kSubsetCriteria) {
    if (subset_label(j, lang, c)) out.push_back(c);
  }
  return out;
}

using C = SubsetCriterion;

TEST(SubsetLabel, InconsistentArabicPair) {
  Judgment j{"q", "a", 4, 2};
  EXPECT_EQ(members_of(j, Language::ar), (std::vector<C>{C::ar, C::all}));
  EXPECT_EQ(subset_label(j, Language::ar, C::all), true);  // source wins
  EXPECT_TRUE(judged_inconsistently(j));
}

TEST(SubsetLabel, EnglishOnlyPair) {
  Judgment j{"q", "e", std::nullopt, 5};
  EXPECT_EQ(members_of(j, Language::en),
            (std::vector<C>{C::en, C::consist, C::en_plus, C::all}));
}

TEST(SubsetLabel, PrivilegedAnnotationGivesTheLabel) {
  Judgment consistent{"q", "a", 5, 3};
  EXPECT_EQ(subset_label(consistent, Language::ch, C::src_plus), true);
  EXPECT_EQ(subset_label(consistent, Language::ch, C::en_plus), true);
  Judgment low{"q", "a", 1, 2};
  EXPECT_EQ(subset_label(low, Language::ch, C::consist), false);
  EXPECT_EQ(evaluation_label(Judgment{"q", "a", 4, 2}), false);
  EXPECT_EQ(evaluation_label(Judgment{"q", "a", 4, std::nullopt}), true);
}

// Membership straight from the prose definitions.
bool oracle_member(const Judgment& j, Language lang, C c) {
  const bool has_src = j.source_score.has_value();
  const bool has_en = j.en_score.has_value();
  const bool both = has_src && has_en;
  const bool agree =
      both && ((*j.source_score >= 3) == (*j.en_score >= 3));
  switch (c) {
    case C::en: return lang == Language::en;
    case C::ar: return lang == Language::ar;
    case C::ch: return lang == Language::ch;
    case C::consist: return !both || agree;
    case C::src_plus: return (has_src && !has_en) || agree;
    case C::en_plus: return (has_en && !has_src) || agree;
    case C::all: return true;
  }
  return false;
}

TEST(FilterSubset, MembershipMatchesEnumeration) {
  std::vector<Candidate> cs = {candidate("e1", Language::en), candidate("a1", Language::ar),
                               candidate("a2", Language::ar), candidate("c1", Language::ch),
                               candidate("c2", Language::ch), candidate("a3", Language::ar)};
  std::vector<Judgment> js = {{"q", "e1", std::nullopt, 4}, {"q", "a1", 4, 2},
                              {"q", "a2", 2, std::nullopt}, {"q", "c1", 1, 2},
                              {"q", "c2", std::nullopt, 3}, {"q", "a3", 5, 5}};
  Corpus corpus(cs);
  for (C c : kSubsetCriteria) {
    std::vector<std::string> want;
    for (std::size_t i = 0; i < js.size(); ++i) {
      if (oracle_member(js[i], cs[i].language, c)) want.push_back(js[i].candidate_id);
    }
    std::vector<std::string> got;
    for (const auto& p : filter_subset(js, corpus, c)) got.push_back(p.candidate_id);
    EXPECT_EQ(got, want) << to_string(c);
  }
}

TEST(FilterSubset, RandomizedInvariants) {
  Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    Judgment j{"q", "x", std::nullopt, std::nullopt};
    const auto kind = rng.below(3);
    if (kind != 1) j.source_score = 1 + static_cast<int>(rng.below(5));
    if (kind != 0) j.en_score = 1 + static_cast<int>(rng.below(5));
    const Language lang = kLanguages[rng.below(3)];
    int language_hits = 0;
    for (C c : kSubsetCriteria) {
      const bool in = subset_label(j, lang, c).has_value();
      EXPECT_EQ(in, oracle_member(j, lang, c));
      // all is a superset
      if (in) {
        EXPECT_TRUE(subset_label(j, lang, C::all));
      }
      if (c == C::en || c == C::ar || c == C::ch) language_hits += in;
    }
    EXPECT_EQ(language_hits, 1);
    if (j.source_score && j.en_score && subset_label(j, lang, C::src_plus) &&
        subset_label(j, lang, C::en_plus)) {
      EXPECT_TRUE(subset_label(j, lang, C::consist));
    }
  }
}

TEST(FilterSubset, UnknownCandidateIsAnError) {
  Corpus corpus({candidate("e1", Language::en)});
  std::vector<Judgment> js = {{"q", "zz", 3, std::nullopt}};
  EXPECT_THROW(filter_subset(js, corpus, C::all), Error);
}

TEST(CriterionNames, ParseAliases) {
  for (C c : kSubsetCriteria) EXPECT_EQ(parse_subset_criterion(to_string(c)), c);
  EXPECT_EQ(parse_subset_criterion("en+consist"), C::en_plus);
  EXPECT_EQ(parse_subset_criterion("src_plus"), C::src_plus);
  EXPECT_THROW(parse_subset_criterion("bogus"), Error);
}

// Pairs whose single feature separates relevant from not, with a few
// English pairs per question.
std::vector<JudgedPair> toy_pairs(std::size_t questions, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<JudgedPair> pairs;
  for (std::size_t q = 0; q < questions; ++q) {
    for (int i = 0; i < 12; ++i) {
      const bool rel = i % 4 == 0;
      JudgedPair p;
      p.language = i % 3 == 0 ? Language::en : Language::ar;
      p.judgment.question_id = "q" + std::to_string(q);
      p.judgment.candidate_id = p.judgment.question_id + "-" + std::to_string(i);
      const int score = rel ? 4 : 2;
      if (p.language == Language::en) {
        p.judgment.en_score = score;
      } else {
        p.judgment.source_score = score;
        p.judgment.en_score = score;
      }
      p.features.active.fill(false);
      p.features.active[kLexQlSlot] = true;
      p.features.values[kLexQlSlot] = (rel ? 0.6 : 0.2) + 0.3 * rng.uniform();
      pairs.push_back(p);
    }
  }
  return pairs;
}

TEST(SelectBestSubset, SingleCriterionIsReturned) {
  auto pairs = toy_pairs(6, 1);
  const C only[] = {C::consist};
  auto sel = select_best_subset(only, pairs, 3, 0);
  EXPECT_EQ(sel.best, C::consist);
  ASSERT_EQ(sel.scores.size(), 1u);
  EXPECT_TRUE(sel.scores[0].cv_map.has_value());
}

TEST(SelectBestSubset, IdenticalSubsetsTieToTheFirst) {
  auto pairs = toy_pairs(6, 2);  // no inconsistencies, so consist == all
  const C order[] = {C::all, C::consist};
  auto sel = select_best_subset(order, pairs, 3, 0);
  EXPECT_EQ(*sel.scores[0].cv_map, *sel.scores[1].cv_map);
  EXPECT_EQ(sel.best, C::all);
  const C reversed[] = {C::consist, C::all};
  EXPECT_EQ(select_best_subset(reversed, pairs, 3, 0).best, C::consist);
}

TEST(SelectBestSubset, DegenerateCriterionIsUnevaluable) {
  auto pairs = toy_pairs(6, 3);
  const C order[] = {C::ch, C::all};  // no Chinese pairs at all
  auto sel = select_best_subset(order, pairs, 3, 0);
  EXPECT_FALSE(sel.scores[0].cv_map.has_value());
  EXPECT_EQ(sel.scores[0].retained, 0u);
  EXPECT_EQ(sel.best, C::all);
  const C hopeless[] = {C::ch};
  EXPECT_THROW(select_best_subset(hopeless, pairs, 3, 0), Error);
}

TEST(CrossValidate, TestPoolsAreNeverFiltered) {
  auto pairs = toy_pairs(6, 4);
  ExperimentConfig en_only;
  en_only.criterion = C::en;
  en_only.folds = 3;
  ExperimentConfig all = en_only;
  all.criterion = C::all;
  auto a = cross_validate(pairs, en_only), b = cross_validate(pairs, all);
  ASSERT_EQ(a.lists.size(), b.lists.size());
  for (std::size_t q = 0; q < a.lists.size(); ++q) {
    EXPECT_EQ(a.lists[q].entries.size(), 12u);
    EXPECT_EQ(b.lists[q].entries.size(), 12u);
  }
}

TEST(CrossValidate, SeparableToyRanksPerfectly) {
  auto pairs = toy_pairs(8, 5);
  ExperimentConfig config;
  config.folds = 4;
  auto result = cross_validate(pairs, config);
  EXPECT_DOUBLE_EQ(result.map(), 1.0);
  EXPECT_EQ(result.fold_map.size(), 4u);
}

TEST(CrossValidate, PerLanguageModelsAndMerges) {
  auto pairs = toy_pairs(8, 6);
  ExperimentConfig config;
  config.folds = 4;
  config.mode = RankingMode::l2ct;
  for (MergeStrategy s : {MergeStrategy::uniform, MergeStrategy::alternate,
                          MergeStrategy::english_first, MergeStrategy::weighted}) {
    config.merge = s;
    auto result = cross_validate(pairs, config);
    EXPECT_EQ(result.lists.size(), 8u);
    for (const auto& list : result.lists) EXPECT_EQ(list.entries.size(), 12u);
    if (s == MergeStrategy::weighted) {
      EXPECT_EQ(result.merge_weights.size(), 8u);
    }
  }
}

}  // namespace
}  // namespace mlqa
