// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <string>
#include <vector>

#include "adsst/types.hpp"

namespace adsst::cli {

// 8-bit RGB, row-major, top row first.
struct Image {
  std::size_t width = 0, height = 0;
  std::vector<unsigned char> rgb;
};

// Magnitude heatmap of a (time x frequency) matrix: time runs left to right,
// frequency bottom to top. Log scale maps [max - db_range, max] dB to the
// color ramp; an all-zero matrix renders as a uniform image.
Image render_heatmap(const CMatrix& m, bool log_scale, double db_range = 80.0);

void write_ppm(const std::string& path, const Image& img);
Image read_ppm(const std::string& path);
// No time or text chunks, so identical images give identical files.
void write_png(const std::string& path, const Image& img);
const char* png_encoder_version();

}  // namespace adsst::cli
