#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dlr/bm25.hpp"
#include "dlr/index.hpp"
#include "dlr/retrieval.hpp"
#include "dlr/slicing.hpp"

namespace dlr::cli {

namespace fs = std::filesystem;

/// Where the vocabulary size comes from: an explicit count or a vocab
/// sidecar written by `dlr weight`.
struct VocabSource {
  std::optional<std::uint32_t> vocab_size;
  std::optional<fs::path> vocab;

  std::optional<std::uint32_t> resolve() const;
};

struct WeightOptions {
  fs::path corpus;
  fs::path out;
  std::optional<fs::path> stats_out;  // default: <out>.vocab.jsonl
  std::optional<fs::path> vocab;      // set: vectorize as queries against it
  Bm25Params bm25;
  std::uint64_t seed = 42;
  bool sorted_ids = false;
};

struct IndexOptions {
  fs::path vectors;
  std::optional<fs::path> semantic;
  fs::path out;
  VocabSource vocab;
  std::uint32_t dims = 768;
  std::string discard = "0";  // count or "auto"
  SliceStrategy strategy = SliceStrategy::kStride;
  std::uint64_t seed = 42;
  double lambda = 1.0;
};

struct SearchCommandOptions {
  fs::path index;
  fs::path queries;
  std::optional<fs::path> query_semantic;
  fs::path out;  // "-" for stdout
  VocabSource vocab;
  std::optional<std::uint32_t> dims;
  std::optional<SliceStrategy> strategy;
  std::optional<std::uint64_t> seed;
  TwoStageParams two_stage;
  bool exact = false;
  std::string tag = "dlr";
  unsigned threads = 0;
};

struct EvalOptions {
  fs::path run;
  fs::path qrels;
  std::vector<std::string> metrics{"mrr@10"};
  bool per_query = false;
  int relevance_threshold = 1;
};

struct ReconstructOptions {
  fs::path index;
  std::optional<std::string> doc_id;
  std::optional<fs::path> queries;
  VocabSource vocab;
  std::size_t top = 10;
};

/// Each command writes its product to files (or `out`) and diagnostics to
/// `log`; failures surface as dlr::Error.
void cmd_weight(const WeightOptions& opt, std::ostream& log);
Index cmd_index(const IndexOptions& opt, std::ostream& log);
void cmd_search(const SearchCommandOptions& opt, std::ostream& out, std::ostream& log);
void cmd_eval(const EvalOptions& opt, std::ostream& out);
void cmd_reconstruct(const ReconstructOptions& opt, std::ostream& out);
void cmd_inspect(const fs::path& index, std::ostream& out);

/// Densification config an index was built with, given the vocabulary size
/// (discard = |V| - M*N). Without a size the vocabulary is taken as M*N.
DensificationConfig config_for_index(const IndexHeader& header,
                                     std::optional<std::uint32_t> vocab_size);

/// Reads DLR_THREADS; unset or unparsable means 0 (auto).
unsigned threads_from_env();

}  // namespace dlr::cli
