/*
 * Copyright 2026 The mb authors
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

#include <string>
#include <vector>

#include "json.hpp"
#include "mb/harness.hpp"
#include "mb/maximality.hpp"

namespace mb {

/// Debug dump: array of {id, level, length, n, points[[x,y]...], parent}.
nlohmann::json lines_to_json(const LevelLineTree& tree);

/// Detection list: array of {line_id, detector, log10_nfa, meaningful}
/// with "maximal": true on pruning survivors. log10_nfa is null for
/// not-applicable lines and clamped to +-1e308 for infinite scores.
nlohmann::json detections_to_json(const std::vector<Detection>& detections);

nlohmann::json trial_report_to_json(const TrialReport& report);

void write_json_file(const nlohmann::json& j, const std::string& path);

}  // namespace mb
