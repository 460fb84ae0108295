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

#include "mb/maximality.hpp"

namespace mb {

/// Stroke color bucket by log10 NFA: >=0, [-5,0), [-20,-5), [-50,-20), <-50.
const char* nfa_bucket_color(double log10_nfa);

/// Writes an SVG overlay: the raster embedded as a base64 BMP underneath,
/// one path per detection, stroke colored by NFA bucket. Deterministic
/// byte-for-byte for identical inputs.
void write_overlay_svg(const RasterImage& image, const LevelLineTree& tree,
                       const std::vector<Detection>& detections, const std::string& path);

}  // namespace mb
