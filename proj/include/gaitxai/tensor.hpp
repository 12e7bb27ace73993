#pragma once

#include <cstddef>
#include <vector>

namespace gaitxai {

// Dense (channels x length) activation buffer, row-major per channel.
struct Tensor {
  std::size_t channels = 0;
  std::size_t length = 0;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::size_t c, std::size_t l) : channels(c), length(l), data(c * l, 0.0) {}

  double& at(std::size_t c, std::size_t l) { return data[c * length + l]; }
  double at(std::size_t c, std::size_t l) const { return data[c * length + l]; }
  std::size_t size() const { return data.size(); }

  bool same_shape(const Tensor& o) const {
    return channels == o.channels && length == o.length;
  }
};

}  // namespace gaitxai
