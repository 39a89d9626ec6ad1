#include "dlr/index.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "dlr/error.hpp"
#include "dlr/half.hpp"

namespace dlr {
namespace {

constexpr std::size_t kFixedHeaderBytes = 4 + 4 + 4 + 4 + 4 + 1 + 8 + 4 + 1 + 8;

class ByteWriter {
 public:
  explicit ByteWriter(std::vector<std::uint8_t>& out) : out_(out) {}

  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  template <typename T>
  void le(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      out_.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(v) >> (8 * i)));
    }
  }
  void f32(float v) { le(std::bit_cast<std::uint32_t>(v)); }

 private:
  std::vector<std::uint8_t>& out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> in) : in_(in) {}

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return in_.size() - pos_; }

  void need(std::size_t n, const char* what) const {
    if (remaining() < n) {
      throw FormatError(std::string("truncated index file: ") + what + " needs " +
                            std::to_string(n) + " bytes, " + std::to_string(remaining()) +
                            " left",
                        pos_);
    }
  }
  template <typename T>
  T le(const char* what) {
    need(sizeof(T), what);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    }
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }
  float f32(const char* what) { return std::bit_cast<float>(le<std::uint32_t>(what)); }
  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    need(n, what);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::uint8_t index_width_for(std::uint32_t slice_width) {
  if (slice_width <= 256) return 1;
  if (slice_width <= 65536) return 2;
  throw ConfigError("slice width N=" + std::to_string(slice_width) +
                    " exceeds the 16-bit index encoding (max 65536)");
}

HybridLayout Index::layout() const {
  return {header_.lexical_dims, header_.semantic_dims, static_cast<double>(header_.lambda)};
}

std::optional<std::size_t> Index::find(std::string_view doc_id) const {
  auto it = row_of_id_.find(std::string(doc_id));
  if (it == row_of_id_.end()) return std::nullopt;
  return it->second;
}

HybridVector Index::document(std::size_t row) const {
  HybridVector h;
  h.layout = layout();
  const auto vals = values_row(row);
  const auto idx = indices_row(row);
  h.values.assign(vals.begin(), vals.end());
  h.indices.assign(idx.begin(), idx.end());
  return h;
}

void Index::finalize_lookup() {
  header_.doc_count = doc_ids_.size();
  std::vector<std::uint32_t> order(doc_ids_.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [this](std::uint32_t a, std::uint32_t b) { return doc_ids_[a] < doc_ids_[b]; });
  id_rank_.assign(doc_ids_.size(), 0);
  for (std::uint32_t r = 0; r < order.size(); ++r) id_rank_[order[r]] = r;
}

IndexBuilder::IndexBuilder(const DensificationConfig& config, const HybridLayout& layout,
                           ValueStorage storage) {
  config.validate();
  layout.validate();
  if (layout.lexical_dims != config.target_dims) {
    throw DimensionError("layout lexical_dims " + std::to_string(layout.lexical_dims) +
                         " != densification M " + std::to_string(config.target_dims));
  }
  auto& h = index_.header_;
  h.lexical_dims = config.target_dims;
  h.slice_width = config.slice_width;
  h.semantic_dims = layout.semantic_dims;
  h.strategy = config.strategy;
  h.seed = config.random_seed;
  h.lambda = static_cast<float>(layout.lambda);
  h.index_width = index_width_for(config.slice_width);
  index_.storage_ = storage;
  slice_width_ = config.slice_width;
}

void IndexBuilder::add(std::string id, const HybridVector& v) {
  const auto& h = index_.header_;
  v.validate();
  if (v.layout.lexical_dims != h.lexical_dims || v.layout.semantic_dims != h.semantic_dims) {
    throw DimensionError("document '" + id + "' has layout (M=" +
                         std::to_string(v.layout.lexical_dims) + ", D=" +
                         std::to_string(v.layout.semantic_dims) + "), index expects (M=" +
                         std::to_string(h.lexical_dims) + ", D=" +
                         std::to_string(h.semantic_dims) + ")");
  }
  if (id.size() > 0xFFFF) {
    throw BuildError("document id longer than 65535 bytes");
  }
  if (index_.row_of_id_.contains(id)) {
    throw BuildError("duplicate document id '" + id + "'");
  }
  for (std::uint32_t m = 0; m < h.lexical_dims; ++m) {
    if (v.indices[m] >= slice_width_) {
      throw BoundsError("document '" + id + "': index " + std::to_string(v.indices[m]) +
                        " at dim " + std::to_string(m) + " >= N=" + std::to_string(slice_width_));
    }
    index_.indices_.push_back(static_cast<std::uint16_t>(v.indices[m]));
  }
  for (double x : v.values) {
    if (index_.storage_ == ValueStorage::kHalf) {
      bool sat = false;
      index_.values_.push_back(half::to_float(half::from_double(x, &sat)));
      if (sat) ++saturated_;
    } else {
      index_.values_.push_back(static_cast<float>(x));
    }
  }
  index_.row_of_id_.emplace(id, index_.doc_ids_.size());
  index_.doc_ids_.push_back(std::move(id));
}

Index IndexBuilder::finish() && {
  index_.finalize_lookup();
  return std::move(index_);
}

Index build_index(std::span<const IndexedVector> docs, const DensificationConfig& config,
                  const HybridLayout& layout, ValueStorage storage) {
  IndexBuilder builder(config, layout, storage);
  for (const auto& d : docs) builder.add(d.id, d.vector);
  return std::move(builder).finish();
}

std::vector<std::uint8_t> serialize_index(const Index& index) {
  const auto& h = index.header();
  std::vector<std::uint8_t> out;
  out.reserve(kFixedHeaderBytes + index.values().size() * 2 +
              index.indices().size() * h.index_width);
  ByteWriter w(out);
  w.bytes(kIndexMagic, 4);
  w.le<std::uint32_t>(h.version);
  w.le<std::uint32_t>(h.lexical_dims);
  w.le<std::uint32_t>(h.slice_width);
  w.le<std::uint32_t>(h.semantic_dims);
  w.le<std::uint8_t>(static_cast<std::uint8_t>(h.strategy));
  w.le<std::uint64_t>(h.seed);
  w.f32(h.lambda);
  w.le<std::uint8_t>(h.index_width);
  w.le<std::uint64_t>(h.doc_count);

  w.le<std::uint32_t>(static_cast<std::uint32_t>(index.doc_ids().size()));
  for (const auto& id : index.doc_ids()) {
    w.le<std::uint16_t>(static_cast<std::uint16_t>(id.size()));
    w.bytes(id.data(), id.size());
  }
  for (float v : index.values()) w.le<std::uint16_t>(half::from_double(v));
  if (h.index_width == 1) {
    for (auto i : index.indices()) w.le<std::uint8_t>(static_cast<std::uint8_t>(i));
  } else {
    for (auto i : index.indices()) w.le<std::uint16_t>(i);
  }
  return out;
}

Index deserialize_index(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  const auto magic = r.take(4, "magic");
  if (std::memcmp(magic.data(), kIndexMagic, 4) != 0) {
    throw FormatError("bad magic (expected \"DLRX\")", 0);
  }
  Index index;
  auto& h = index.header_;
  std::size_t at = r.offset();
  h.version = r.le<std::uint32_t>("version");
  if (h.version != kIndexVersion) {
    throw FormatError("unsupported index version " + std::to_string(h.version), at);
  }
  h.lexical_dims = r.le<std::uint32_t>("M");
  h.slice_width = r.le<std::uint32_t>("N");
  h.semantic_dims = r.le<std::uint32_t>("D");
  at = r.offset();
  const auto strategy = r.le<std::uint8_t>("strategy");
  if (strategy > static_cast<std::uint8_t>(SliceStrategy::kRandom)) {
    throw FormatError("unknown slicing strategy code " + std::to_string(strategy), at);
  }
  h.strategy = static_cast<SliceStrategy>(strategy);
  h.seed = r.le<std::uint64_t>("seed");
  at = r.offset();
  h.lambda = r.f32("lambda");
  if (!(h.lambda >= 0.0f) || !std::isfinite(h.lambda)) {
    throw FormatError("invalid lambda", at);
  }
  at = r.offset();
  h.index_width = r.le<std::uint8_t>("index_width");
  if (h.lexical_dims == 0 && h.semantic_dims == 0) {
    throw FormatError("index has zero width (M = D = 0)", 4);
  }
  if (h.slice_width == 0 || h.slice_width > 65536 ||
      h.index_width != index_width_for(h.slice_width)) {
    throw FormatError("index_width " + std::to_string(h.index_width) +
                          " inconsistent with N=" + std::to_string(h.slice_width),
                      at);
  }
  at = r.offset();
  const auto doc_count = r.le<std::uint64_t>("doc_count");

  at = r.offset();
  const auto id_count = r.le<std::uint32_t>("doc-id count");
  if (id_count != doc_count) {
    throw FormatError("doc-id count " + std::to_string(id_count) + " != doc_count " +
                          std::to_string(doc_count),
                      at);
  }
  index.doc_ids_.reserve(id_count);
  for (std::uint32_t i = 0; i < id_count; ++i) {
    at = r.offset();
    const auto len = r.le<std::uint16_t>("doc-id length");
    const auto raw = r.take(len, "doc-id bytes");
    std::string id(reinterpret_cast<const char*>(raw.data()), raw.size());
    if (!index.row_of_id_.emplace(id, i).second) {
      throw FormatError("duplicate doc id '" + id + "'", at);
    }
    index.doc_ids_.push_back(std::move(id));
  }

  const std::uint64_t stride = static_cast<std::uint64_t>(h.lexical_dims) + h.semantic_dims;
  const std::uint64_t n_values = doc_count * stride;
  const std::uint64_t n_indices = doc_count * h.lexical_dims;
  const std::uint64_t expected = n_values * 2 + n_indices * h.index_width;
  if (r.remaining() != expected) {
    throw FormatError("section size mismatch: expected " + std::to_string(expected) +
                          " bytes of values+indices, found " + std::to_string(r.remaining()),
                      r.offset());
  }
  index.values_.resize(n_values);
  for (auto& v : index.values_) v = half::to_float(r.le<std::uint16_t>("value"));
  index.indices_.resize(n_indices);
  for (std::uint64_t i = 0; i < n_indices; ++i) {
    at = r.offset();
    const std::uint16_t e = h.index_width == 1 ? r.le<std::uint8_t>("index")
                                               : r.le<std::uint16_t>("index");
    if (e >= h.slice_width) {
      throw FormatError("stored index " + std::to_string(e) + " >= N=" +
                            std::to_string(h.slice_width),
                        at);
    }
    index.indices_[i] = e;
  }
  index.storage_ = ValueStorage::kHalf;
  index.finalize_lookup();
  return index;
}

void save_index(const Index& index, const std::filesystem::path& path) {
  const auto bytes = serialize_index(index);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

Index load_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open index '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize_index(bytes);
}

std::string describe_header(const IndexHeader& h) {
  std::ostringstream os;
  os << "magic: DLRX\n"
     << "version: " << h.version << "\n"
     << "lexical_dims (M): " << h.lexical_dims << "\n"
     << "slice_width (N): " << h.slice_width << "\n"
     << "semantic_dims (D): " << h.semantic_dims << "\n"
     << "strategy: " << to_string(h.strategy) << "\n"
     << "seed: " << h.seed << "\n"
     << "lambda: " << h.lambda << "\n"
     << "index_width: " << static_cast<unsigned>(h.index_width) << " (u"
     << 8 * static_cast<unsigned>(h.index_width) << ")\n"
     << "doc_count: " << h.doc_count << "\n";
  return os.str();
}

}  // namespace dlr
