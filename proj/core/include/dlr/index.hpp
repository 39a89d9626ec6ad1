#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dlr/scoring.hpp"
#include "dlr/slicing.hpp"

namespace dlr {

inline constexpr char kIndexMagic[4] = {'D', 'L', 'R', 'X'};
inline constexpr std::uint32_t kIndexVersion = 1;

/// How values are held in memory. kHalf rounds every value to binary16 at
/// build time (the on-disk representation); kWide keeps float32 and is
/// used for exact-vs-quantized comparisons. Files are always binary16.
enum class ValueStorage : std::uint8_t { kHalf, kWide };

struct IndexHeader {
  std::uint32_t version = kIndexVersion;
  std::uint32_t lexical_dims = 0;  // M
  std::uint32_t slice_width = 0;   // N
  std::uint32_t semantic_dims = 0; // D
  SliceStrategy strategy = SliceStrategy::kStride;
  std::uint64_t seed = 0;
  float lambda = 0.0f;
  std::uint8_t index_width = 1;    // bytes per stored index entry
  std::uint64_t doc_count = 0;

  friend bool operator==(const IndexHeader&, const IndexHeader&) = default;
};

/// 1 when N fits in uint8, else 2. Throws ConfigError above 65536.
std::uint8_t index_width_for(std::uint32_t slice_width);

/// Immutable doc-major store of hybrid vectors. Row r of the value matrix
/// (M + D floats) and the index matrix (M entries) belong to doc_ids()[r].
class Index {
 public:
  Index() = default;

  const IndexHeader& header() const { return header_; }
  HybridLayout layout() const;
  ValueStorage storage() const { return storage_; }
  std::size_t size() const { return doc_ids_.size(); }
  bool empty() const { return doc_ids_.empty(); }
  std::uint32_t lexical_dims() const { return header_.lexical_dims; }
  std::uint32_t row_stride() const { return header_.lexical_dims + header_.semantic_dims; }

  const std::vector<std::string>& doc_ids() const { return doc_ids_; }
  std::optional<std::size_t> find(std::string_view doc_id) const;

  std::span<const float> values_row(std::size_t row) const {
    return {values_.data() + row * row_stride(), row_stride()};
  }
  std::span<const std::uint16_t> indices_row(std::size_t row) const {
    return {indices_.data() + row * header_.lexical_dims, header_.lexical_dims};
  }
  const std::vector<float>& values() const { return values_; }
  const std::vector<std::uint16_t>& indices() const { return indices_; }

  /// Rank of doc_ids()[row] in ascending byte order of all ids; used as the
  /// score tie-break.
  std::uint32_t id_rank(std::size_t row) const { return id_rank_[row]; }

  /// Row materialized as a HybridVector (values widened to double).
  HybridVector document(std::size_t row) const;

  friend bool operator==(const Index& a, const Index& b) {
    return a.header_ == b.header_ && a.doc_ids_ == b.doc_ids_ && a.values_ == b.values_ &&
           a.indices_ == b.indices_;
  }

 private:
  friend class IndexBuilder;
  friend Index deserialize_index(std::span<const std::uint8_t> bytes);

  void finalize_lookup();

  IndexHeader header_;
  ValueStorage storage_ = ValueStorage::kHalf;
  std::vector<std::string> doc_ids_;
  std::vector<float> values_;
  std::vector<std::uint16_t> indices_;
  std::vector<std::uint32_t> id_rank_;
  std::unordered_map<std::string, std::size_t> row_of_id_;
};

/// Single-writer builder; add() preserves insertion order.
class IndexBuilder {
 public:
  IndexBuilder(const DensificationConfig& config, const HybridLayout& layout,
               ValueStorage storage = ValueStorage::kHalf);

  /// Throws BuildError on a duplicate id and DimensionError on layout mismatch.
  void add(std::string id, const HybridVector& v);

  /// Values clamped to the largest finite half so far.
  std::size_t saturated_count() const { return saturated_; }

  Index finish() &&;

 private:
  Index index_;
  std::uint32_t slice_width_ = 0;
  std::size_t saturated_ = 0;
};

struct IndexedVector {
  std::string id;
  HybridVector vector;
};

Index build_index(std::span<const IndexedVector> docs, const DensificationConfig& config,
                  const HybridLayout& layout, ValueStorage storage = ValueStorage::kHalf);

/// Little-endian layout:
///   "DLRX" | version u32 | M u32 | N u32 | D u32 | strategy u8 | seed u64 |
///   lambda f32 | index_width u8 | doc_count u64 |
///   id count u32, then per id: u16 length + UTF-8 bytes |
///   doc_count x (M + D) binary16 values | doc_count x M u8/u16 indices
std::vector<std::uint8_t> serialize_index(const Index& index);
Index deserialize_index(std::span<const std::uint8_t> bytes);

void save_index(const Index& index, const std::filesystem::path& path);
Index load_index(const std::filesystem::path& path);

/// Human-readable header dump, one `key: value` per line.
std::string describe_header(const IndexHeader& header);

}  // namespace dlr
