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

#include "mb/json_io.hpp"

#include <cmath>
#include <fstream>

namespace mb {

using nlohmann::json;

json lines_to_json(const LevelLineTree& tree) {
    json arr = json::array();
    for (size_t i = 0; i < tree.lines.size(); ++i) {
        const LevelLine& line = tree.lines[i];
        json points = json::array();
        for (const Vec2& p : line.polyline)
            points.push_back({p.x, p.y});
        const int32_t parent = tree.parent[i];
        arr.push_back({{"id", line.id},
                       {"level", line.level},
                       {"length", line.euclidean_length},
                       {"n", line.n()},
                       {"touches_border", line.touches_border},
                       {"points", std::move(points)},
                       {"parent", parent < 0 ? json(nullptr) : json(tree.lines[parent].id)}});
    }
    return arr;
}

json detections_to_json(const std::vector<Detection>& detections) {
    json arr = json::array();
    for (const Detection& d : detections) {
        json j{{"line_id", d.line_id},
               {"detector", detector_name(d.detector)},
               {"meaningful", d.meaningful}};
        if (!d.applicable)
            j["log10_nfa"] = nullptr;
        else if (std::isinf(d.log10_nfa))
            j["log10_nfa"] = d.log10_nfa > 0 ? 1e308 : -1e308;
        else
            j["log10_nfa"] = d.log10_nfa;
        if (d.maximal)
            j["maximal"] = true;
        arr.push_back(std::move(j));
    }
    return arr;
}

json trial_report_to_json(const TrialReport& r) {
    return json{{"detector", detector_name(r.detector)},
                {"eps", r.eps},
                {"trials", r.seeds.size()},
                {"seeds", r.seeds},
                {"counts", r.counts},
                {"n_ll", r.n_ll},
                {"mean", r.mean},
                {"bound", r.bound},
                {"ok", r.ok},
                {"wall_time_seconds", r.wall_time_seconds}};
}

void write_json_file(const json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("write_json_file: cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

}  // namespace mb
