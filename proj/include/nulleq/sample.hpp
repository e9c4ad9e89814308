#pragma once

#include <span>
#include <vector>

namespace nulleq {

/// Ordered, finite observations. Construction rejects empty input and
/// non-finite entries (DataError).
class Sample {
 public:
  explicit Sample(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

}  // namespace nulleq
