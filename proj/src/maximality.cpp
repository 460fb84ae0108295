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

#include "mb/maximality.hpp"

#include <algorithm>
#include <unordered_map>

namespace mb {

std::vector<Detection> prune_maximal(const LevelLineTree& tree,
                                     const std::vector<MonotoneSection>& sections,
                                     const std::vector<Detection>& detections) {
    std::unordered_map<int32_t, const Detection*> by_id;
    by_id.reserve(detections.size());
    for (const Detection& d : detections)
        by_id.emplace(d.line_id, &d);

    std::vector<Detection> out;
    for (const MonotoneSection& sec : sections) {
        const Detection* best = nullptr;
        for (int32_t id : sec.line_ids) {
            const auto it = by_id.find(id);
            if (it == by_id.end() || !it->second->meaningful)
                continue;
            const Detection* d = it->second;
            if (best == nullptr || d->log10_nfa < best->log10_nfa ||
                (d->log10_nfa == best->log10_nfa && d->line_id < best->line_id))
                best = d;
        }
        if (best != nullptr) {
            Detection survivor = *best;
            survivor.maximal = true;
            out.push_back(survivor);
        }
    }

    // lines not covered by any section (detections over a partial tree)
    // pass through untouched when meaningful
    std::unordered_map<int32_t, bool> in_section;
    for (const MonotoneSection& sec : sections)
        for (int32_t id : sec.line_ids)
            in_section[id] = true;
    (void)tree;
    for (const Detection& d : detections)
        if (d.meaningful && !in_section.count(d.line_id)) {
            Detection survivor = d;
            survivor.maximal = true;
            out.push_back(survivor);
        }

    std::sort(out.begin(), out.end(),
              [](const Detection& a, const Detection& b) { return a.line_id < b.line_id; });
    return out;
}

}  // namespace mb
