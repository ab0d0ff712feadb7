#include "specfield/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "specfield/error.hpp"

namespace specfield {

Frequency::Frequency(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw ValidationError("frequency must have at least one coordinate");
  for (double c : coords_) {
    if (!std::isfinite(c) || c <= -kPi || c > kPi) {
      throw ValidationError("frequency coordinate " + std::to_string(c) + " outside (-pi, pi]");
    }
  }
}

BoxDims::BoxDims(std::vector<std::int64_t> v) : v_(std::move(v)) {
  if (v_.empty()) throw ValidationError("box dims must have at least one coordinate");
  volume_ = 1;
  for (auto side : v_) {
    if (side < 1) throw ValidationError("box side " + std::to_string(side) + " must be >= 1");
    if (volume_ > std::numeric_limits<std::int32_t>::max() / side) {
      throw ValidationError("box volume overflows");
    }
    volume_ *= side;
  }
}

std::int64_t BoxDims::min_side() const { return *std::min_element(v_.begin(), v_.end()); }
std::int64_t BoxDims::max_side() const { return *std::max_element(v_.begin(), v_.end()); }

std::size_t BoxDims::linear_index(std::span<const std::int64_t> offset) const {
  std::size_t idx = 0;
  for (std::size_t s = 0; s < v_.size(); ++s) {
    idx = idx * static_cast<std::size_t>(v_[s]) + static_cast<std::size_t>(offset[s]);
  }
  return idx;
}

Lag BoxDims::offset_of(std::size_t linear) const {
  Lag k(v_.size());
  for (std::size_t s = v_.size(); s-- > 0;) {
    const auto side = static_cast<std::size_t>(v_[s]);
    k[s] = static_cast<std::int64_t>(linear % side);
    linear /= side;
  }
  return k;
}

void validate_dims_sequence(std::span<const BoxDims> seq) {
  if (seq.empty()) throw ValidationError("dims sequence is empty");
  for (std::size_t i = 1; i < seq.size(); ++i) {
    if (seq[i].dim() != seq[0].dim()) throw ValidationError("dims sequence mixes dimensions");
    if (seq[i].min_side() < seq[i - 1].min_side()) {
      throw ValidationError("dims sequence min-coordinate must be non-decreasing");
    }
  }
  if (seq.size() > 1 && seq.back().min_side() <= seq.front().min_side()) {
    throw ValidationError("dims sequence min-coordinate must grow");
  }
}

}  // namespace specfield
