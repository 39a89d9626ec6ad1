#include "dlr/bm25.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "dlr/error.hpp"

namespace dlr {
namespace {

using Tokens = std::vector<std::string>;

TEST(Tokenize, LowercasesAndSplits) {
  EXPECT_EQ(tokenize("The Bauhaus, built 1919!"), (Tokens{"the", "bauhaus", "built", "1919"}));
  EXPECT_EQ(tokenize(""), Tokens{});
  EXPECT_EQ(tokenize("a\xe2\x80\x94" "b"), (Tokens{"a", "b"}));
  EXPECT_EQ(tokenize("  --x_y  "), (Tokens{"x", "y"}));
  EXPECT_EQ(tokenize("café «no»"), (Tokens{"café", "no"}));
  EXPECT_EQ(tokenize("\xff" "ab"), (Tokens{"ab"}));
}

// Three-document toy corpus; expected weights were evaluated by hand from
// idf = ln(1 + (N - df + 0.5) / (df + 0.5)) with k1 = 0.9, b = 0.4.
class Bm25Toy : public ::testing::Test {
 protected:
  std::vector<TextDocument> docs{{"d1", "The Bauhaus school, Bauhaus design"},
                                 {"d2", "Design of the modern school"},
                                 {"d3", "Bauhaus architecture"}};
  Bm25Params params{0.9, 0.4};
};

TEST_F(Bm25Toy, HandComputedWeights) {
  const auto vc = vectorize_corpus(docs, params, 1);
  EXPECT_EQ(vc.stats.doc_count, 3u);
  EXPECT_DOUBLE_EQ(vc.stats.avg_doc_len, 4.0);
  const auto d1 = tokenize(docs[0].text);
  const auto d2 = tokenize(docs[1].text);
  const auto d3 = tokenize(docs[2].text);
  EXPECT_NEAR(bm25_weight("bauhaus", d1, vc.stats, params), 0.59732902713504854, 1e-12);
  EXPECT_NEAR(bm25_weight("bauhaus", d3, vc.stats, params), 0.5191900555621497, 1e-12);
  EXPECT_NEAR(bm25_weight("design", d2, vc.stats, params), 0.44874718370195854, 1e-12);
  EXPECT_EQ(bm25_weight("bauhaus", d2, vc.stats, params), 0.0);   // tf = 0
  EXPECT_EQ(bm25_weight("unknown", d1, vc.stats, params), 0.0);   // not in vocab
}

TEST_F(Bm25Toy, IdfStaysPositiveAtFullDocumentFrequency) {
  EXPECT_GT(bm25_idf(3, 3), 0.0);
  EXPECT_NEAR(bm25_idf(3, 3), std::log(1.0 + 0.5 / 3.5), 1e-15);
}

TEST_F(Bm25Toy, VectorsAreSortedAndMatchWeights) {
  const auto vc = vectorize_corpus(docs, params, 1);
  ASSERT_EQ(vc.vectors.size(), 3u);
  const auto d1 = tokenize(docs[0].text);
  EXPECT_EQ(vc.vectors[0].entries.size(), 4u);  // the, bauhaus, school, design
  for (std::size_t i = 1; i < vc.vectors[0].entries.size(); ++i) {
    EXPECT_LT(vc.vectors[0].entries[i - 1].term, vc.vectors[0].entries[i].term);
  }
  for (const auto& e : vc.vectors[0].entries) {
    EXPECT_DOUBLE_EQ(e.weight, bm25_weight(vc.stats.terms[e.term], d1, vc.stats, params));
  }
}

TEST_F(Bm25Toy, QueryDotEqualsBm25Score) {
  const auto vc = vectorize_corpus(docs, params, 9);
  const auto qtokens = tokenize("bauhaus school bauhaus zebra");
  const auto q = vectorize_query("q", qtokens, vc.stats);
  EXPECT_EQ(q.entries.size(), 2u);
  for (const auto& e : q.entries) EXPECT_EQ(e.weight, 1.0);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto dt = tokenize(docs[i].text);
    const double direct = bm25_weight("bauhaus", dt, vc.stats, params) +
                          bm25_weight("school", dt, vc.stats, params);
    EXPECT_NEAR(sparse_dot(q, vc.vectors[i]), direct, 1e-12);
  }
}

TEST(Bm25, SingleDocAndDeterminism) {
  const std::vector<TextDocument> one{{"x", "a b"}};
  const auto vc = vectorize_corpus(one, {}, 3);
  EXPECT_EQ(vc.stats.vocab_size(), 2u);
  EXPECT_EQ(vc.vectors[0].entries.size(), 2u);

  const std::vector<TextDocument> twins{{"x", "red green red"}, {"y", "red green red"}, {"z", "blue"}};
  const auto t = vectorize_corpus(twins, {}, 3);
  EXPECT_EQ(t.vectors[0].entries, t.vectors[1].entries);
  const auto again = vectorize_corpus(twins, {}, 3);
  EXPECT_EQ(again.vectors, t.vectors);
  EXPECT_EQ(again.stats.terms, t.stats.terms);
}

TEST(Bm25, IdOrders) {
  const std::vector<TextDocument> docs{{"x", "delta alpha charlie bravo echo"}};
  const auto sorted = vectorize_corpus(docs, {}, 0, IdOrder::kSorted);
  EXPECT_EQ(sorted.stats.terms, (Tokens{"alpha", "bravo", "charlie", "delta", "echo"}));
  const auto a = vectorize_corpus(docs, {}, 1).stats.terms;
  const auto b = vectorize_corpus(docs, {}, 2).stats.terms;
  EXPECT_NE(a, b);  // seeds differ
}

TEST(Bm25, Errors) {
  EXPECT_THROW(vectorize_corpus({}, {}, 0), ParameterError);
  const std::vector<TextDocument> one{{"x", "a"}};
  EXPECT_THROW(vectorize_corpus(one, {0.0, 0.4}, 0), ParameterError);
  EXPECT_THROW(vectorize_corpus(one, {0.9, 1.5}, 0), ParameterError);
}

}  // namespace
}  // namespace dlr
