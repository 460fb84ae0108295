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

#include <vector>

#include "mb/saliency.hpp"
#include "mb/topo_map.hpp"

namespace mb {

/// Keeps, inside each maximal monotone section, only the meaningful
/// detection with the smallest log10 NFA (ties to the smallest line id);
/// sections without a meaningful line contribute nothing. Interpolation
/// bundles of parallel lines collapse to one representative. The survivors
/// are returned with their `maximal` flag set, ordered by line id.
/// Idempotent: pruning the pruned set changes nothing.
std::vector<Detection> prune_maximal(const LevelLineTree& tree,
                                     const std::vector<MonotoneSection>& sections,
                                     const std::vector<Detection>& detections);

}  // namespace mb
