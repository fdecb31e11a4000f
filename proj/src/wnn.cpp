#include "pwot/wnn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pwot/errors.hpp"
#include "pwot/rng.hpp"

namespace pwot {

BitPattern::BitPattern(Shape shape, std::vector<std::uint8_t> bits)
    : shape_(shape), bits_(std::move(bits)) {
  if (bits_.size() != shape_.area()) {
    throw DimensionError("bit pattern length does not match its shape", shape_.area(),
                         bits_.size());
  }
}

std::size_t BitPattern::count_ones() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::size_t hamming_distance(const BitPattern& a, const BitPattern& b) {
  if (a.size() != b.size()) {
    throw DimensionError("hamming distance of patterns", a.size(), b.size());
  }
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
  return d;
}

InputMapping make_input_mapping(std::size_t total_bits, int node_size, std::uint64_t seed,
                                int max_node_size) {
  if (node_size < 1 || node_size > max_node_size) {
    throw ConfigError("node size " + std::to_string(node_size) + " outside supported range [1, " +
                      std::to_string(max_node_size) + "]");
  }
  if (total_bits == 0) throw ConfigError("input mapping needs at least one input bit");
  if (total_bits >= kPaddingBit) throw ConfigError("input mapping too large");

  InputMapping m;
  m.total_bits = total_bits;
  m.node_size = node_size;
  m.node_count = (total_bits + node_size - 1) / node_size;
  m.seed = seed;
  m.assignment.resize(m.node_count * node_size, kPaddingBit);

  std::vector<std::uint32_t> order(total_bits);
  std::iota(order.begin(), order.end(), 0u);
  Rng rng(seed);
  for (std::size_t i = total_bits - 1; i > 0; --i) {
    std::swap(order[i], order[rng.below(i + 1)]);
  }
  std::copy(order.begin(), order.end(), m.assignment.begin());
  return m;
}

Discriminator::Discriminator(InputMapping mapping)
    : mapping_(std::move(mapping)),
      words_per_node_(std::max<std::size_t>(1, (std::size_t{1} << mapping_.node_size) / 64)),
      memory_(mapping_.node_count * words_per_node_, 0) {}

void Discriminator::check_length(std::size_t given) const {
  if (given != mapping_.total_bits) {
    throw DimensionError("pattern length does not match discriminator input", mapping_.total_bits,
                         given);
  }
}

std::uint64_t Discriminator::address_of(std::size_t node,
                                        std::span<const std::uint8_t> bits) const {
  const std::uint32_t* wires = mapping_.assignment.data() + node * mapping_.node_size;
  std::uint64_t address = 0;
  for (int j = 0; j < mapping_.node_size; ++j) {
    const std::uint32_t src = wires[j];
    if (src != kPaddingBit && bits[src]) address |= std::uint64_t{1} << j;
  }
  return address;
}

void Discriminator::train(std::span<const std::uint8_t> bits) {
  check_length(bits.size());
  for (std::size_t node = 0; node < mapping_.node_count; ++node) {
    const std::uint64_t a = address_of(node, bits);
    memory_[node * words_per_node_ + (a >> 6)] |= std::uint64_t{1} << (a & 63);
  }
}

int Discriminator::respond(std::span<const std::uint8_t> bits) const {
  check_length(bits.size());
  int sum = 0;
  for (std::size_t node = 0; node < mapping_.node_count; ++node) {
    const std::uint64_t a = address_of(node, bits);
    sum += static_cast<int>((memory_[node * words_per_node_ + (a >> 6)] >> (a & 63)) & 1u);
  }
  return sum;
}

bool Discriminator::cell(std::size_t node, std::uint64_t address) const {
  return (memory_.at(node * words_per_node_ + (address >> 6)) >> (address & 63)) & 1u;
}

std::uint64_t Discriminator::memory_footprint_bits() const {
  return static_cast<std::uint64_t>(mapping_.node_count) << mapping_.node_size;
}

CentralPartition partition_central_peripheral(Shape shape, double central_fraction) {
  const double p = std::clamp(central_fraction, 0.0, 1.0);
  const double scale = std::sqrt(p);
  // The epsilon absorbs sqrt round-off such as sqrt(0.36) * 10 = 5.9999...
  int w = static_cast<int>(std::floor(shape.width * scale + 1e-9));
  int h = static_cast<int>(std::floor(shape.height * scale + 1e-9));
  w = std::clamp(w, 0, shape.width);
  h = std::clamp(h, 0, shape.height);
  if (w == 0 || h == 0) w = h = 0;

  CentralPartition part;
  part.inner_rect = {(shape.width - w) / 2, (shape.height - h) / 2, w, h};
  part.inner.reserve(static_cast<std::size_t>(w) * h);
  part.outer.reserve(shape.area() - static_cast<std::size_t>(w) * h);
  for (int y = 0; y < shape.height; ++y) {
    for (int x = 0; x < shape.width; ++x) {
      const auto idx = static_cast<std::uint32_t>(y * shape.width + x);
      (part.inner_rect.contains(Point{x, y}) ? part.inner : part.outer).push_back(idx);
    }
  }
  return part;
}

std::vector<std::uint8_t> project_bits(const BitPattern& pattern,
                                       std::span<const std::uint32_t> indices) {
  std::vector<std::uint8_t> out(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) out[i] = pattern[indices[i]];
  return out;
}

ParallelDiscriminator::ParallelDiscriminator(Shape region, ParallelParams params,
                                             std::uint64_t seed, int max_node_size)
    : region_(region),
      params_(params),
      partition_(partition_central_peripheral(region, params.central_fraction)) {
  if (params.central_fraction < 0.0 || params.central_fraction > 1.0) {
    throw ConfigError("central fraction must lie in [0, 1]");
  }
  // Validate both node sizes even when one side ends up empty.
  for (int n : {params.inner_node_size, params.outer_node_size}) {
    if (n < 1 || n > max_node_size) {
      throw ConfigError("node size " + std::to_string(n) + " outside supported range [1, " +
                        std::to_string(max_node_size) + "]");
    }
  }
  if (!partition_.inner.empty()) {
    inner_.emplace(make_input_mapping(partition_.inner.size(), params.inner_node_size, seed,
                                      max_node_size));
  }
  if (!partition_.outer.empty()) {
    outer_.emplace(make_input_mapping(partition_.outer.size(), params.outer_node_size, seed,
                                      max_node_size));
  }
}

void ParallelDiscriminator::check_shape(const BitPattern& pattern) const {
  if (pattern.shape() != region_) {
    throw DimensionError("pattern shape does not match parallel discriminator region",
                         region_.area(), pattern.size());
  }
}

void ParallelDiscriminator::train(const BitPattern& pattern) {
  check_shape(pattern);
  if (inner_) inner_->train(project_bits(pattern, partition_.inner));
  if (outer_) outer_->train(project_bits(pattern, partition_.outer));
}

int ParallelDiscriminator::respond_inner(const BitPattern& pattern) const {
  check_shape(pattern);
  return inner_ ? inner_->respond(project_bits(pattern, partition_.inner)) : 0;
}

int ParallelDiscriminator::respond_outer(const BitPattern& pattern) const {
  check_shape(pattern);
  return outer_ ? outer_->respond(project_bits(pattern, partition_.outer)) : 0;
}

int ParallelDiscriminator::respond(const BitPattern& pattern) const {
  return respond_inner(pattern) + respond_outer(pattern);
}

std::size_t ParallelDiscriminator::node_count() const {
  return (inner_ ? inner_->node_count() : 0) + (outer_ ? outer_->node_count() : 0);
}

std::uint64_t ParallelDiscriminator::memory_footprint_bits() const {
  return (inner_ ? inner_->memory_footprint_bits() : 0) +
         (outer_ ? outer_->memory_footprint_bits() : 0);
}

}  // namespace pwot
