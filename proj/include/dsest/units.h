// Copyright 2026 The dsest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DSEST_UNITS_H_
#define DSEST_UNITS_H_

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

namespace dsest {

// Every information quantity inside the library is in nats. Conversion
// happens only when results are presented.
enum class Units { kBits, kNats };

inline double ToUnits(double nats, Units units) {
  return units == Units::kBits ? nats / std::numbers::ln2 : nats;
}

inline double FromUnits(double value, Units units) {
  return units == Units::kBits ? value * std::numbers::ln2 : value;
}

inline std::string_view UnitsName(Units units) {
  return units == Units::kBits ? "bits" : "nats";
}

// Returns false if `name` is neither "bits" nor "nats".
inline bool ParseUnits(std::string_view name, Units* units) {
  if (name == "bits") {
    *units = Units::kBits;
    return true;
  }
  if (name == "nats") {
    *units = Units::kNats;
    return true;
  }
  return false;
}

}  // namespace dsest

#endif  // DSEST_UNITS_H_
