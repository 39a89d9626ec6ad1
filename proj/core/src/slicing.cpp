#include "dlr/slicing.hpp"

#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "dlr/error.hpp"

namespace dlr {

std::string_view to_string(SliceStrategy s) {
  switch (s) {
    case SliceStrategy::kContiguous:
      return "contiguous";
    case SliceStrategy::kStride:
      return "stride";
    case SliceStrategy::kRandom:
      return "random";
  }
  return "unknown";
}

SliceStrategy parse_slice_strategy(std::string_view name) {
  if (name == "contiguous") return SliceStrategy::kContiguous;
  if (name == "stride") return SliceStrategy::kStride;
  if (name == "random") return SliceStrategy::kRandom;
  throw ConfigError("unknown slicing strategy '" + std::string(name) +
                    "' (expected contiguous, stride or random)");
}

DensificationConfig DensificationConfig::derive(std::uint32_t vocab_size,
                                                std::uint32_t target_dims,
                                                SliceStrategy strategy, std::uint64_t seed) {
  if (target_dims == 0) {
    throw ConfigError("target_dims must be >= 1");
  }
  DensificationConfig c;
  c.vocab_size = vocab_size;
  c.target_dims = target_dims;
  c.discard_count = vocab_size % target_dims;
  c.slice_width = vocab_size / target_dims;
  c.strategy = strategy;
  c.random_seed = seed;
  c.validate();
  return c;
}

DensificationConfig DensificationConfig::with_discard(std::uint32_t vocab_size,
                                                      std::uint32_t target_dims,
                                                      std::uint32_t discard_count,
                                                      SliceStrategy strategy,
                                                      std::uint64_t seed) {
  DensificationConfig c;
  c.vocab_size = vocab_size;
  c.target_dims = target_dims;
  c.discard_count = discard_count;
  c.slice_width = (target_dims == 0 || discard_count > vocab_size)
                      ? 0
                      : (vocab_size - discard_count) / target_dims;
  c.strategy = strategy;
  c.random_seed = seed;
  c.validate();
  return c;
}

void DensificationConfig::validate() const {
  const bool ok = target_dims >= 1 && slice_width >= 1 && discard_count <= vocab_size &&
                  static_cast<std::uint64_t>(vocab_size) - discard_count == kept_count();
  if (!ok) {
    std::ostringstream msg;
    msg << "invalid densification config: vocab_size=" << vocab_size
        << " M=" << target_dims << " N=" << slice_width << " discard_count=" << discard_count
        << " (require vocab_size - discard_count == M * N with M, N >= 1)";
    throw ConfigError(msg.str());
  }
}

std::vector<std::uint32_t> seeded_permutation(std::uint32_t n, std::uint64_t seed) {
  std::vector<std::uint32_t> perm(n);
  for (std::uint32_t i = 0; i < n; ++i) perm[i] = i;
  std::mt19937_64 rng(seed);
  // Unbiased draw in [0, bound] by rejecting the tail of the 64-bit range.
  auto draw = [&rng](std::uint64_t bound) {
    const std::uint64_t range = bound + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t x;
    do {
      x = rng();
    } while (x >= limit);
    return x % range;
  };
  for (std::uint32_t i = n; i > 1; --i) {
    const auto j = static_cast<std::uint32_t>(draw(i - 1));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

SliceAssignment::SliceAssignment(const DensificationConfig& config) : config_(config) {
  config_.validate();
  const std::uint32_t m_dims = config_.target_dims;
  const std::uint32_t width = config_.slice_width;
  const auto kept = static_cast<std::uint32_t>(config_.kept_count());

  slot_of_kept_.resize(kept);
  kept_of_slot_.resize(kept);

  switch (config_.strategy) {
    case SliceStrategy::kContiguous:
      for (std::uint32_t k = 0; k < kept; ++k) slot_of_kept_[k] = k;
      break;
    case SliceStrategy::kStride:
      // slice = k mod M, position = k / M; adjacent ids land in distinct slices.
      for (std::uint32_t k = 0; k < kept; ++k) {
        slot_of_kept_[k] = (k % m_dims) * width + k / m_dims;
      }
      break;
    case SliceStrategy::kRandom: {
      // order[i] is the kept id placed at contiguous slot i.
      const auto order = seeded_permutation(kept, config_.random_seed);
      for (std::uint32_t i = 0; i < kept; ++i) slot_of_kept_[order[i]] = i;
      break;
    }
  }
  for (std::uint32_t k = 0; k < kept; ++k) kept_of_slot_[slot_of_kept_[k]] = k;
}

std::optional<SlotRef> SliceAssignment::forward(std::uint32_t term_id) const {
  if (term_id >= config_.vocab_size) {
    throw BoundsError("term-id " + std::to_string(term_id) + " outside vocabulary of size " +
                      std::to_string(config_.vocab_size));
  }
  if (term_id < config_.discard_count) return std::nullopt;
  const std::uint32_t slot = slot_of_kept_[term_id - config_.discard_count];
  return SlotRef{slot / config_.slice_width, slot % config_.slice_width};
}

std::uint32_t SliceAssignment::invert(std::uint32_t slice, std::uint32_t position) const {
  if (slice >= config_.target_dims || position >= config_.slice_width) {
    throw BoundsError("slot (" + std::to_string(slice) + ", " + std::to_string(position) +
                      ") outside [0," + std::to_string(config_.target_dims) + ") x [0," +
                      std::to_string(config_.slice_width) + ")");
  }
  return kept_of_slot_[slice * config_.slice_width + position] + config_.discard_count;
}

SliceAssignment build_assignment(const DensificationConfig& config) {
  return SliceAssignment(config);
}

std::uint32_t invert_assignment(const SliceAssignment& assignment, std::uint32_t slice,
                                std::uint32_t position) {
  return assignment.invert(slice, position);
}

}  // namespace dlr
