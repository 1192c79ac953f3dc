// Copyright 2026 The dpfl Authors
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
//
// Self-contained SVG scatter-plus-frontier charts for sweep records.

#ifndef DPFL_CHART_HPP_
#define DPFL_CHART_HPP_

#include <string>
#include <vector>

#include "dpfl/sweep.hpp"

namespace dpfl {

// Renders a fixed 800x600 chart: one marker per record, the Pareto frontier
// as an overlaid polyline, axes labeled with the field names in nats.
// Throws EmptyRecords when no record has finite values for both fields.
std::string render_svg(const std::vector<TradeoffRecord>& records,
                       InfoField x_field, InfoField y_field);

// render_svg plus an atomic write to out_path.
void emit_svg(const std::vector<TradeoffRecord>& records, InfoField x_field,
              InfoField y_field, const std::string& out_path);

}  // namespace dpfl

#endif  // DPFL_CHART_HPP_
