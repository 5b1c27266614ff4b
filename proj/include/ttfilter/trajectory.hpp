#pragma once

#include <optional>
#include <vector>

#include "ttfilter/spin_net.hpp"
#include "ttfilter/types.hpp"

namespace ttfilter {

struct Measurement {
  int index = 0;         // discrete time step
  Vec3 position = Vec3::Zero();  // [m]
  bool available = true;
};

// One recorded sample: the (possibly missing) measurement plus, for
// synthetic data, the ground-truth state.
struct Sample {
  int index = 0;
  bool available = true;
  Vec3 position = Vec3::Zero();
  std::optional<State> truth;

  Measurement measurement() const { return {index, position, available}; }
};

struct Trajectory {
  double dt = 1.0 / 180.0;
  std::optional<LaunchInfo> launch;
  std::vector<Sample> samples;

  int length() const { return static_cast<int>(samples.size()); }

  std::vector<Measurement> measurements() const {
    std::vector<Measurement> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.measurement());
    return out;
  }
};

}  // namespace ttfilter
