#include "nulleq/sample.hpp"

#include <cmath>
#include <string>

#include "nulleq/errors.hpp"

namespace nulleq {

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DataError("sample is empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) throw DataError("sample value " + std::to_string(i) + " is not finite");
  }
}

}  // namespace nulleq
