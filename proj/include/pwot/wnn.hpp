#pragma once

// WiSARD weightless neural network core: input mappings, RAM-node
// discriminators and the two-network parallel discriminator.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "pwot/geometry.hpp"

namespace pwot {

inline constexpr int kDefaultMaxNodeSize = 24;

/// Index used in an input mapping for a slot wired to a constant 0 bit.
inline constexpr std::uint32_t kPaddingBit = std::numeric_limits<std::uint32_t>::max();

/// Quantized pixels of a rectangular region, one bit per pixel, row-major.
/// Bits are stored one per byte (0 or 1).
class BitPattern {
 public:
  BitPattern() = default;
  explicit BitPattern(Shape shape) : shape_(shape), bits_(shape.area(), 0) {}
  BitPattern(Shape shape, std::vector<std::uint8_t> bits);

  Shape shape() const { return shape_; }
  std::size_t size() const { return bits_.size(); }
  std::span<const std::uint8_t> bits() const { return bits_; }
  std::span<std::uint8_t> bits() { return bits_; }

  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  std::uint8_t& operator[](std::size_t i) { return bits_[i]; }
  std::uint8_t at(int x, int y) const {
    return bits_[static_cast<std::size_t>(y) * shape_.width + x];
  }

  std::size_t count_ones() const;

  friend bool operator==(const BitPattern&, const BitPattern&) = default;

 private:
  Shape shape_{};
  std::vector<std::uint8_t> bits_;
};

std::size_t hamming_distance(const BitPattern& a, const BitPattern& b);

/// Fixed wiring of input bits to RAM-node address lines. Group i occupies
/// assignment[i*node_size, (i+1)*node_size); bit j of the group is address
/// bit j of node i.
struct InputMapping {
  std::size_t total_bits = 0;
  int node_size = 0;
  std::size_t node_count = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> assignment;

  std::span<const std::uint32_t> group(std::size_t node) const {
    return std::span(assignment).subspan(node * node_size, node_size);
  }
  std::size_t padding_slots() const { return node_count * node_size - total_bits; }

  friend bool operator==(const InputMapping&, const InputMapping&) = default;
};

/// Seeded uniform shuffle of [0, total_bits) cut into groups of node_size.
/// The last group is padded with kPaddingBit when total_bits is not a
/// multiple of node_size. Throws ConfigError when node_size is outside
/// [1, max_node_size] or total_bits is zero.
InputMapping make_input_mapping(std::size_t total_bits, int node_size, std::uint64_t seed,
                                int max_node_size = kDefaultMaxNodeSize);

/// k RAM nodes of 2^N one-bit cells sharing one input mapping.
///
/// Mutable only while training. After training, concurrent respond() calls
/// are safe.
class Discriminator {
 public:
  explicit Discriminator(InputMapping mapping);

  const InputMapping& mapping() const { return mapping_; }
  std::size_t node_count() const { return mapping_.node_count; }
  int node_size() const { return mapping_.node_size; }

  /// Writes 1 at every node's addressed cell.
  void train(std::span<const std::uint8_t> bits);
  void train(const BitPattern& pattern) { train(pattern.bits()); }

  /// Number of nodes whose addressed cell holds 1, in [0, node_count].
  int respond(std::span<const std::uint8_t> bits) const;
  int respond(const BitPattern& pattern) const { return respond(pattern.bits()); }

  bool cell(std::size_t node, std::uint64_t address) const;
  std::uint64_t address_of(std::size_t node, std::span<const std::uint8_t> bits) const;

  /// k * 2^N, the logical RAM size in bits.
  std::uint64_t memory_footprint_bits() const;
  /// Bits actually held by the node tables (rounded up to 64-bit words).
  std::uint64_t storage_bits() const { return memory_.size() * 64; }

  friend bool operator==(const Discriminator&, const Discriminator&) = default;

 private:
  void check_length(std::size_t given) const;

  InputMapping mapping_;
  std::size_t words_per_node_;
  std::vector<std::uint64_t> memory_;
};

inline std::uint64_t memory_footprint(const Discriminator& d) { return d.memory_footprint_bits(); }

/// Pixel indices (row-major within the region) of the central rectangle and
/// of the peripheral remainder.
struct CentralPartition {
  Rect inner_rect;  // in region coordinates; empty when P rounds to nothing
  std::vector<std::uint32_t> inner;
  std::vector<std::uint32_t> outer;
};

/// Central rectangle with the region's aspect ratio, each side scaled by
/// sqrt(P) and rounded down, centered (offsets rounded down). P is clamped to
/// [0,1].
CentralPartition partition_central_peripheral(Shape shape, double central_fraction);

struct ParallelParams {
  double central_fraction = 0.5;
  int inner_node_size = 3;
  int outer_node_size = 15;
};

/// Two discriminators over disjoint pixel sets of one region: the central part
/// feeds a small-node network, the periphery a large-node one. The response is
/// the plain sum of both.
///
/// Both networks draw their mapping from the same seed, so P = 1 reproduces a
/// single network of inner_node_size and P = 0 one of outer_node_size.
class ParallelDiscriminator {
 public:
  ParallelDiscriminator(Shape region, ParallelParams params, std::uint64_t seed,
                        int max_node_size = kDefaultMaxNodeSize);

  Shape region_shape() const { return region_; }
  const ParallelParams& params() const { return params_; }
  const CentralPartition& partition() const { return partition_; }
  const std::optional<Discriminator>& inner() const { return inner_; }
  const std::optional<Discriminator>& outer() const { return outer_; }

  void train(const BitPattern& pattern);
  int respond(const BitPattern& pattern) const;
  int respond_inner(const BitPattern& pattern) const;
  int respond_outer(const BitPattern& pattern) const;

  std::size_t node_count() const;
  std::uint64_t memory_footprint_bits() const;

  friend bool operator==(const ParallelDiscriminator&, const ParallelDiscriminator&) = default;

 private:
  void check_shape(const BitPattern& pattern) const;

  Shape region_;
  ParallelParams params_;
  CentralPartition partition_;
  std::optional<Discriminator> inner_;
  std::optional<Discriminator> outer_;
};

inline bool operator==(const ParallelParams& a, const ParallelParams& b) {
  return a.central_fraction == b.central_fraction && a.inner_node_size == b.inner_node_size &&
         a.outer_node_size == b.outer_node_size;
}
inline bool operator==(const CentralPartition& a, const CentralPartition& b) {
  return a.inner_rect == b.inner_rect && a.inner == b.inner && a.outer == b.outer;
}

/// Gathers pattern bits at the listed indices, in list order.
std::vector<std::uint8_t> project_bits(const BitPattern& pattern,
                                       std::span<const std::uint32_t> indices);

}  // namespace pwot
