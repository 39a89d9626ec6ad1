#include "dlr/eval.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "dlr/error.hpp"
#include "eval_fixture.hpp"

namespace dlr {
namespace {

Run run_of(const std::string& text) {
  std::istringstream in(text);
  return parse_run(in);
}

Qrels qrels_of(const std::string& text) {
  std::istringstream in(text);
  return parse_qrels(in);
}

TEST(Mrr, SimpleCases) {
  const auto q = qrels_of("q 0 a 1\n");
  EXPECT_DOUBLE_EQ(mrr_at_k(run_of("q Q0 a 1 9 t\n"), q, 10), 1.0);
  EXPECT_DOUBLE_EQ(
      mrr_at_k(run_of("q Q0 x 1 9 t\nq Q0 y 2 8 t\nq Q0 z 3 7 t\nq Q0 a 4 6 t\n"), q, 10), 0.25);
  const auto two = qrels_of("q1 0 a 1\nq2 0 b 1\n");
  EXPECT_DOUBLE_EQ(mrr_at_k(run_of("q1 Q0 x 1 2 t\nq1 Q0 a 2 1 t\n"), two, 10), 0.25);
}

TEST(Recall, SimpleCasesAndCapping) {
  const auto q = qrels_of("q 0 a 1\nq 0 b 1\nq 0 c 1\nq 0 d 1\n");
  EXPECT_DOUBLE_EQ(recall_at_k(run_of("q Q0 a 1 1 t\nq Q0 z 2 1 t\n"), q, 1000), 0.25);
  EXPECT_DOUBLE_EQ(
      recall_at_k(run_of("q Q0 a 1 4 t\nq Q0 b 2 3 t\nq Q0 c 3 2 t\nq Q0 d 4 1 t\n"), q, 1000),
      1.0);
  const auto both = run_of("q Q0 a 1 2 t\nq Q0 b 2 1 t\n");
  EXPECT_DOUBLE_EQ(recall_at_k(both, q, 2), 0.5);
  EXPECT_DOUBLE_EQ(capped_recall_at_k(both, q, 2), 1.0);
}

TEST(Ndcg, PerfectAndHandComputed) {
  const auto q = qrels_of("q 0 a 2\nq 0 b 1\nq 0 c 0\n");
  EXPECT_DOUBLE_EQ(ndcg_at_k(run_of("q Q0 a 1 3 t\nq Q0 b 2 2 t\nq Q0 c 3 1 t\n"), q, 10), 1.0);
  // Grades [0, 2, 1] at ranks 1..3: (3/log2(3) + 1/2) / (3 + 1/log2(3)).
  EXPECT_NEAR(ndcg_at_k(run_of("q Q0 c 1 3 t\nq Q0 a 2 2 t\nq Q0 b 3 1 t\n"), q, 3),
              0.65900180480241333, 1e-12);
  EXPECT_DOUBLE_EQ(ndcg_at_k(dlr::Run{}, q, 10), 0.0);
}

TEST(EvalFixture, FiveQueryToySet) {
  const auto run = run_of(fixtures::kToyRun);
  const auto qrels = qrels_of(fixtures::kToyQrels);
  EXPECT_NEAR(mrr_at_k(run, qrels, 10), fixtures::kToyMrr10, 1e-9);
  EXPECT_NEAR(recall_at_k(run, qrels, 1000), fixtures::kToyRecall1000, 1e-9);
  EXPECT_NEAR(capped_recall_at_k(run, qrels, 100), fixtures::kToyCappedRecall100, 1e-9);
  EXPECT_NEAR(ndcg_at_k(run, qrels, 10), fixtures::kToyNdcg10, 1e-9);
}

TEST(EvalProperty, BoundedAndInvariantToLineOrderAndTail) {
  const auto qrels = qrels_of(fixtures::kToyQrels);
  std::vector<std::string> lines;
  std::istringstream in(fixtures::kToyRun);
  for (std::string l; std::getline(in, l);) {
    if (!l.empty()) lines.push_back(l);
  }
  std::mt19937_64 rng(1);
  const auto metrics = {"mrr@10", "recall@1000", "capped_recall@100", "ndcg@10", "recall@3"};
  std::map<std::string, double> base;
  for (auto m : metrics) base[m] = evaluate(run_of(fixtures::kToyRun), qrels, parse_metric(m)).mean;
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(lines.begin(), lines.end(), rng);
    std::string text;
    for (const auto& l : lines) text += l + "\n";
    for (auto m : metrics) {
      const double v = evaluate(run_of(text), qrels, parse_metric(m)).mean;
      EXPECT_DOUBLE_EQ(v, base[m]);
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
  // Non-relevant docs below the cutoff change nothing.
  const auto padded = run_of(std::string(fixtures::kToyRun) + "q1 Q0 junk1 2000 -1 t\nq3 Q0 junk2 2000 -1 t\n");
  EXPECT_DOUBLE_EQ(mrr_at_k(padded, qrels, 10), base["mrr@10"]);
  EXPECT_DOUBLE_EQ(ndcg_at_k(padded, qrels, 10), base["ndcg@10"]);
}

TEST(EvalParse, Errors) {
  try {
    run_of("q Q0 a 1 1 t\nq Q0 b two 1 t\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(run_of("q Q0 a 1 1\n"), ParseError);
  EXPECT_THROW(run_of("q Q0 a 1 1 t\nq Q0 a 2 0 t\n"), ParseError);
  EXPECT_THROW(qrels_of("q 0 a -1\n"), ParseError);
  EXPECT_THROW(qrels_of("q 0 a\n"), ParseError);
  EXPECT_THROW(parse_metric("map@10"), ParameterError);
  EXPECT_THROW(parse_metric("mrr"), ParameterError);
  EXPECT_EQ(parse_metric("capped_recall@100").name(), "capped_recall@100");
}

}  // namespace
}  // namespace dlr
