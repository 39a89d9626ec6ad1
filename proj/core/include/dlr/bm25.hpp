#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dlr/sparse.hpp"

namespace dlr {

struct Bm25Params {
  double k1 = 0.9;
  double b = 0.4;

  void validate() const;
};

struct TextDocument {
  std::string id;
  std::string text;
};

/// Lowercases ASCII letters and splits on anything that is not a letter or
/// digit. Non-ASCII code points count as word characters unless they are
/// punctuation, symbols or spaces (Latin-1 punctuation, General
/// Punctuation, arrows/math/box symbols, CJK and fullwidth punctuation).
std::vector<std::string> tokenize(std::string_view text);

/// How term-ids are handed out over the sorted vocabulary.
enum class IdOrder : std::uint8_t {
  kShuffled,  // seeded permutation (the default for whole-word vocabularies)
  kSorted,    // lexicographic order, id = rank
};

struct CorpusStats {
  std::uint64_t doc_count = 0;
  double avg_doc_len = 0.0;
  std::uint64_t id_seed = 0;
  std::vector<std::string> terms;       // term-id -> token
  std::vector<std::uint32_t> doc_freq;  // term-id -> df
  std::unordered_map<std::string, std::uint32_t> vocab;

  std::uint32_t vocab_size() const { return static_cast<std::uint32_t>(terms.size()); }
  std::optional<std::uint32_t> term_id(std::string_view token) const;
};

/// ln(1 + (N - df + 0.5) / (df + 0.5)); positive for every df in [1, N].
double bm25_idf(std::uint64_t df, std::uint64_t doc_count);

/// idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * doc_len / avg_doc_len)).
double bm25_term_weight(std::uint32_t tf, std::uint32_t doc_len, std::uint64_t df,
                        const CorpusStats& stats, const Bm25Params& params);

/// Weight of `term` in a tokenized document; 0 for unknown terms or tf = 0.
double bm25_weight(std::string_view term, std::span<const std::string> doc_tokens,
                   const CorpusStats& stats, const Bm25Params& params);

CorpusStats build_corpus_stats(std::span<const std::vector<std::string>> tokenized_docs,
                               std::uint64_t seed, IdOrder order = IdOrder::kShuffled);

SparseVector vectorize_document(std::string id, std::span<const std::string> tokens,
                                const CorpusStats& stats, const Bm25Params& params);

/// Weight 1 for each distinct in-vocabulary query term.
SparseVector vectorize_query(std::string id, std::span<const std::string> tokens,
                             const CorpusStats& stats);

struct VectorizedCorpus {
  CorpusStats stats;
  std::vector<SparseVector> vectors;
};

/// Throws ParameterError on an empty corpus.
VectorizedCorpus vectorize_corpus(std::span<const TextDocument> docs, const Bm25Params& params,
                                  std::uint64_t seed, IdOrder order = IdOrder::kShuffled);

}  // namespace dlr
