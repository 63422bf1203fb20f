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

#include "bellsim/util/angles.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bellsim {
namespace {

std::string strip(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

double parse_number(std::string_view text, std::string_view whole) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("cannot parse angle '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

double parse_angle(std::string_view text) {
  const std::string s = strip(text);
  if (s.empty()) {
    throw std::invalid_argument("empty angle");
  }
  const auto pi_pos = s.find("pi");
  if (pi_pos == std::string::npos) {
    return parse_number(s, text);
  }

  // [sign][coefficient][*]pi[/denominator]
  std::string coeff = s.substr(0, pi_pos);
  const std::string rest = s.substr(pi_pos + 2);
  if (!coeff.empty() && coeff.back() == '*') {
    coeff.pop_back();
  }
  double factor = 1.0;
  if (coeff == "-") {
    factor = -1.0;
  } else if (coeff == "+" || coeff.empty()) {
    factor = 1.0;
  } else {
    factor = parse_number(coeff, text);
  }
  double denom = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') {
      throw std::invalid_argument("cannot parse angle '" + std::string(text) + "'");
    }
    denom = parse_number(std::string_view(rest).substr(1), text);
    if (denom == 0.0) {
      throw std::invalid_argument("zero denominator in angle '" + std::string(text) + "'");
    }
  }
  return factor * std::numbers::pi / denom;
}

double canonical_angle(double theta) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("angle must be finite");
  }
  double r = std::fmod(theta, std::numbers::pi);
  if (r < 0.0) {
    r += std::numbers::pi;
  }
  if (r >= std::numbers::pi) {
    r = 0.0;
  }
  return r;
}

}  // namespace bellsim
