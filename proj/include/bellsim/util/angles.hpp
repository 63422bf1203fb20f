/*
 * Copyright 2026 The bellsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string_view>

namespace bellsim {

/// Parses an angle in radians. Accepts plain numbers and pi-rational forms
/// such as "pi/8", "3pi/8", "3*pi/8", "-pi/4", "2*pi".
double parse_angle(std::string_view text);

/// Maps an angle onto [0, pi). Polarizer axes are lines, so theta and
/// theta + pi describe the same setting.
double canonical_angle(double theta);

}  // namespace bellsim
