#pragma once

#include <cstdint>
#include <vector>

#include "roadocc/sampling.hpp"

namespace roadocc::detail {

struct LloydResult {
  std::vector<double> centers;  // k x d
  std::vector<std::size_t> assignment;
  std::vector<double> objective_history;
};

/// Lloyd's algorithm from a seeded farthest-first start. The first center
/// is a uniformly drawn sample; empty clusters move to the sample farthest
/// from its nearest center.
LloydResult lloyd(const SampleSet& samples, std::size_t k, std::uint64_t seed,
                  int max_iterations);

}  // namespace roadocc::detail
