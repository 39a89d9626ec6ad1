#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dlr {

struct SparseEntry {
  std::uint32_t term = 0;
  double weight = 0.0;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// A document or query in the |V|-dimensional lexical space.
/// Entries are sorted by strictly increasing term-id and carry positive weights.
struct SparseVector {
  std::string id;
  std::vector<SparseEntry> entries;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

/// Builds a validated SparseVector from parallel arrays. Zero weights are
/// dropped; negative or non-finite weights, non-ascending term-ids and
/// term-ids >= vocab_size raise IngestError.
SparseVector make_sparse_vector(std::string id, std::span<const std::uint32_t> terms,
                                std::span<const double> weights, std::uint32_t vocab_size);

/// Checks the ingestion invariants on an already-built vector.
void validate_sparse(const SparseVector& v, std::uint32_t vocab_size);

/// Exact inner product of two sparse vectors (merge join).
double sparse_dot(const SparseVector& a, const SparseVector& b);

}  // namespace dlr
