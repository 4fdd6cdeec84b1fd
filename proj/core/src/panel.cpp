// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#include "msinpaint/panel.hpp"

#include "msinpaint/errors.hpp"

namespace msinpaint {

namespace {

void blit(Image8& canvas, const MSICube& cube, std::size_t row, std::size_t col,
          double gain) {
  const std::size_t h = cube.height(), w = cube.width();
  if (h * (row + 1) > canvas.height || w * (col + 1) > canvas.width) {
    throw ShapeError("panel tiles must share one size");
  }
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const std::size_t dst = ((row * h + y) * canvas.width + col * w + x) * 3;
      for (std::size_t c = 0; c < 3; ++c) {
        canvas.pixels[dst + c] = quantize_unit(gain * cube.at(kRgbBands[c], y, x));
      }
    }
  }
}

}  // namespace

Image8 render_panel_image(std::span<const PanelColumn> columns, double gain) {
  if (columns.empty()) throw PreconditionError("panel needs at least one sample");
  const std::size_t methods = columns.front().outputs.size();
  const std::size_t h = columns.front().truth.height();
  const std::size_t w = columns.front().truth.width();
  Image8 canvas;
  canvas.channels = 3;
  canvas.width = w * columns.size();
  canvas.height = h * (3 + methods);
  canvas.pixels.assign(canvas.width * canvas.height * 3, 0);
  for (std::size_t col = 0; col < columns.size(); ++col) {
    const auto& s = columns[col];
    if (s.outputs.size() != methods) {
      throw ShapeError("every panel column needs the same number of outputs");
    }
    if (s.truth.height() != h || s.truth.width() != w) {
      throw ShapeError("panel tiles must share one size");
    }
    blit(canvas, s.truth, 0, col, gain);
    blit(canvas, s.historical, 1, col, gain);
    blit(canvas, s.input, 2, col, gain);
    for (std::size_t m = 0; m < methods; ++m) blit(canvas, s.outputs[m], 3 + m, col, gain);
  }
  return canvas;
}

std::vector<std::uint8_t> render_panel(std::span<const PanelColumn> columns,
                                       double gain) {
  return encode_png(render_panel_image(columns, gain));
}

std::vector<std::uint8_t> render_preview(const MSICube& cube, double gain) {
  Image8 tile;
  tile.channels = 3;
  tile.width = cube.width();
  tile.height = cube.height();
  tile.pixels.resize(tile.width * tile.height * 3);
  blit(tile, cube, 0, 0, gain);
  return encode_png(tile);
}

}  // namespace msinpaint
