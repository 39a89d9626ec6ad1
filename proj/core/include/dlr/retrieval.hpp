#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dlr/index.hpp"
#include "dlr/scoring.hpp"

namespace dlr {

struct ScoredDoc {
  std::string doc_id;
  float score = 0.0f;

  friend bool operator==(const ScoredDoc&, const ScoredDoc&) = default;
};

/// Ordered by (score desc, doc_id asc); no duplicate ids.
using RankedList = std::vector<ScoredDoc>;

enum class FirstStage : std::uint8_t { kApproxGip, kValueIp };

std::string_view to_string(FirstStage s);
FirstStage parse_first_stage(std::string_view name);

struct TwoStageParams {
  double theta = 0.3;
  FirstStage first_stage = FirstStage::kApproxGip;
  std::size_t candidates = 10000;  // K
  std::size_t k = 1000;
};

struct SearchOptions {
  // Document shards scored in parallel; 0 picks the hardware concurrency.
  unsigned workers = 1;
};

/// Exact GIP against every document, top-k.
RankedList search_exact(const Index& index, const HybridVector& query, std::size_t k,
                        const SearchOptions& options = {});

/// Stage 1 only: top-K by approximate GIP (or value IP) with those
/// approximate scores.
RankedList first_stage(const Index& index, const HybridVector& query,
                       const TwoStageParams& params, const SearchOptions& options = {});

/// Stage 1 candidates reranked by exact GIP; returns top-k. Every returned
/// score is the document's exact GIP score.
RankedList search_two_stage(const Index& index, const HybridVector& query,
                            const TwoStageParams& params, const SearchOptions& options = {});

/// Shortest decimal that round-trips the float.
std::string format_score(float score);

/// TREC 6-column run lines: `qid Q0 docid rank score tag`, rank from 1.
void write_trec_run(std::ostream& out, std::string_view query_id, const RankedList& results,
                    std::string_view tag);

}  // namespace dlr
