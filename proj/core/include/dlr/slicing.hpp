#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace dlr {

enum class SliceStrategy : std::uint8_t {
  kContiguous = 0,
  kStride = 1,
  kRandom = 2,
};

std::string_view to_string(SliceStrategy s);
SliceStrategy parse_slice_strategy(std::string_view name);

/// Vocabulary geometry for densification.
///
/// The first `discard_count` term-ids are dropped; the remaining
/// `vocab_size - discard_count` ids are partitioned into `target_dims`
/// slices of `slice_width` positions each.
struct DensificationConfig {
  std::uint32_t vocab_size = 0;
  std::uint32_t target_dims = 0;   // M
  std::uint32_t slice_width = 0;   // N
  SliceStrategy strategy = SliceStrategy::kStride;
  std::uint64_t random_seed = 0;
  std::uint32_t discard_count = 0;

  /// Picks the smallest discard making the kept vocabulary a multiple of
  /// `target_dims`, and derives the slice width from it.
  static DensificationConfig derive(std::uint32_t vocab_size, std::uint32_t target_dims,
                                    SliceStrategy strategy, std::uint64_t seed = 0);

  /// Uses an explicit discard count; the kept vocabulary must divide evenly.
  static DensificationConfig with_discard(std::uint32_t vocab_size, std::uint32_t target_dims,
                                          std::uint32_t discard_count, SliceStrategy strategy,
                                          std::uint64_t seed = 0);

  std::uint64_t kept_count() const {
    return static_cast<std::uint64_t>(target_dims) * slice_width;
  }

  /// Throws ConfigError naming every field when the invariants fail.
  void validate() const;

  friend bool operator==(const DensificationConfig&, const DensificationConfig&) = default;
};

struct SlotRef {
  std::uint32_t slice = 0;
  std::uint32_t position = 0;

  friend bool operator==(const SlotRef&, const SlotRef&) = default;
};

/// Bijection between kept term-ids and (slice, position) slots.
/// Immutable once built; safe to share across threads.
class SliceAssignment {
 public:
  explicit SliceAssignment(const DensificationConfig& config);

  const DensificationConfig& config() const { return config_; }
  std::uint32_t dims() const { return config_.target_dims; }
  std::uint32_t slice_width() const { return config_.slice_width; }
  std::uint64_t kept_count() const { return config_.kept_count(); }

  /// Slot for `term_id`; nullopt for discarded ids. Throws BoundsError for
  /// ids outside the vocabulary.
  std::optional<SlotRef> forward(std::uint32_t term_id) const;

  /// Original term-id stored at (slice, position). Throws BoundsError when
  /// either coordinate is out of range.
  std::uint32_t invert(std::uint32_t slice, std::uint32_t position) const;

 private:
  DensificationConfig config_;
  // kept id -> flat slot (slice * N + position)
  std::vector<std::uint32_t> slot_of_kept_;
  // flat slot -> kept id
  std::vector<std::uint32_t> kept_of_slot_;
};

SliceAssignment build_assignment(const DensificationConfig& config);

std::uint32_t invert_assignment(const SliceAssignment& assignment, std::uint32_t slice,
                                std::uint32_t position);

/// Seeded Fisher-Yates permutation of [0, n) driven by std::mt19937_64 with
/// rejection-sampled bounded draws, so the result is identical on every
/// standard library.
std::vector<std::uint32_t> seeded_permutation(std::uint32_t n, std::uint64_t seed);

}  // namespace dlr
