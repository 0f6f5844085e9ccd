#pragma once

// Seeded random DES instances with walk-generated (hence realisable)
// observations. Unobservable transitions only move upward in each
// component's state order, so silent behaviour never loops and the
// certified oracle bound covers every consistent trace.

#include <cstdint>
#include <string>

#include "diagfp/des_model.hpp"

namespace diagfp {

struct GeneratorParams {
  std::uint64_t seed = 1;
  std::size_t components = 3;  // 1..4
  std::size_t states = 4;      // 2..5 per component
  std::size_t faults = 3;      // 0..3
  std::size_t obs_len = 4;     // 0..5 (upper bound; a walk may deadlock earlier)

  /// Throws a usage error when a parameter is out of range.
  void validate() const;
};

struct GeneratedInstance {
  std::string model_text;
  std::string observation_text;
  std::string sidecar_json;  // seed, parameters, reachable states, oracle bound, silent depth
  std::size_t reachable_states = 0;
  std::size_t oracle_bound = 0;
  std::size_t silent_depth = 0;
};

GeneratedInstance generate_instance(const GeneratorParams& params);

}  // namespace diagfp
