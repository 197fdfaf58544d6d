// Copyright 2026 The ampwit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AMPWIT_IO_H
#define AMPWIT_IO_H

#include <iosfwd>
#include <string>
#include <string_view>

#include "ampwit/fock_core.h"
#include "ampwit/witnesses.h"

namespace ampwit {

/// Shortest decimal text that reads back to exactly x.
std::string format_double(double x);

/// Pulse CSV: optional `# key=value` comment lines, a header
/// `pulse_index,counts` or `pulse_index,counts,herald`, then one row per
/// pulse. Malformed input throws ValidationError naming the source and line.
PulseRecordSet read_pulse_csv(std::istream &in, std::string_view source = "<stream>");
PulseRecordSet load_pulse_csv(const std::string &path);
void write_pulse_csv(std::ostream &out, const PulseRecordSet &records);

/// {"probs": [p0, p1, ...]}. The result is not validated.
PhotonNumberDistribution parse_distribution_json(const std::string &json_text);
std::string distribution_to_json(const PhotonNumberDistribution &dist);

/// `N,density` rows.
void write_intensity_csv(std::ostream &out, const IntensityDistribution &dist);

/// `# kind=<name>` then `param,x,y` rows.
void write_curve_csv(std::ostream &out, const BoundaryCurve &curve);

std::string read_text_file(const std::string &path);

}  // namespace ampwit

#endif
