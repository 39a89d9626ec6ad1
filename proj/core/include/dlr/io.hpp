#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dlr/bm25.hpp"
#include "dlr/scoring.hpp"
#include "dlr/sparse.hpp"

namespace dlr::io {

// Every reader reports failures as ParseError("<source>:<line>: ...").

/// `{"id": "...", "text": "..."}` per line.
std::vector<TextDocument> parse_corpus_jsonl(std::istream& in, const std::string& source);
std::vector<TextDocument> read_corpus_jsonl(const std::filesystem::path& path);

/// `{"id": "...", "indices": [int...], "values": [float...]}` per line,
/// indices strictly ascending. With `vocab_size` set, ids are range-checked.
std::vector<SparseVector> parse_sparse_jsonl(std::istream& in, const std::string& source,
                                             std::optional<std::uint32_t> vocab_size = {});
std::vector<SparseVector> read_sparse_jsonl(const std::filesystem::path& path,
                                            std::optional<std::uint32_t> vocab_size = {});
void write_sparse_jsonl(std::ostream& out, std::span<const SparseVector> vectors);

/// `{"id": "...", "values": [float...]}` per line; all rows the same width.
std::vector<DenseVector> parse_dense_jsonl(std::istream& in, const std::string& source);
std::vector<DenseVector> read_dense_jsonl(const std::filesystem::path& path);

/// Vocabulary sidecar: a header line
///   {"doc_count":..,"avg_doc_len":..,"vocab_size":..,"id_seed":..}
/// followed by one `{"id":..,"term":"..","df":..}` line per term-id.
void write_stats_jsonl(std::ostream& out, const CorpusStats& stats);
CorpusStats parse_stats_jsonl(std::istream& in, const std::string& source);
CorpusStats read_stats_jsonl(const std::filesystem::path& path);

}  // namespace dlr::io
