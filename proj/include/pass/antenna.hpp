// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The pass-sac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <vector>

namespace pass {

// One pinching antenna per waveguide. Waveguides run parallel to the
// x-axis at fixed heights; x[n] is the antenna's offset along guide n.
struct AntennaConfig {
  std::vector<double> x;     // meters, each in [0, length]
  std::vector<double> y_wg;  // waveguide y-coordinates, strictly increasing
  double guided_wavelength = 0.0;  // meters
  double height = 10.0;            // meters above ground
  double length = 100.0;           // waveguide length D, meters

  std::size_t size() const { return x.size(); }

  // Throws std::invalid_argument when an invariant is broken.
  void validate() const;
};

}  // namespace pass
