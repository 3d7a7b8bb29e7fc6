#pragma once

#include "gcplocate/geometry.hpp"

#include <opencv2/core.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gcp {

struct BadTileSize : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OverlapTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OutOfTile : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OutOfImage : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RasterIoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 1-based tile address: i = row, j = column.
struct TileIndex {
    int i = 1;
    int j = 1;
};

inline bool operator==(TileIndex a, TileIndex b) { return a.i == b.i && a.j == b.j; }
inline bool operator!=(TileIndex a, TileIndex b) { return !(a == b); }

// Plan of a padded, uniformly cropped tile grid over one full-size image.
// Tiles step by (tile - overlap); right/bottom pads make the last row and
// column land exactly on the padded image edge.
struct TileGrid {
    int image_w = 0;
    int image_h = 0;
    int tile_w = 0;
    int tile_h = 0;
    int overlap_x = 0;
    int overlap_y = 0;
    int pad_right = 0;
    int pad_bottom = 0;
    int rows = 0;
    int cols = 0;

    int stride_x() const { return tile_w - overlap_x; }
    int stride_y() const { return tile_h - overlap_y; }
    int padded_w() const { return image_w + pad_right; }
    int padded_h() const { return image_h + pad_bottom; }
    int tile_count() const { return rows * cols; }
    bool contains(TileIndex idx) const {
        return idx.i >= 1 && idx.i <= rows && idx.j >= 1 && idx.j <= cols;
    }
    int origin_x(TileIndex idx) const { return (idx.j - 1) * stride_x(); }
    int origin_y(TileIndex idx) const { return (idx.i - 1) * stride_y(); }
};

inline bool operator==(const TileGrid& a, const TileGrid& b) {
    return a.image_w == b.image_w && a.image_h == b.image_h && a.tile_w == b.tile_w &&
           a.tile_h == b.tile_h && a.overlap_x == b.overlap_x && a.overlap_y == b.overlap_y &&
           a.pad_right == b.pad_right && a.pad_bottom == b.pad_bottom && a.rows == b.rows &&
           a.cols == b.cols;
}

// Minimal grid covering the image. Tile dimensions must be positive
// multiples of 32; overlaps must be smaller than the tile on each axis.
TileGrid plan_grid(int image_w, int image_h, int tile_w, int tile_h, int overlap_x = 0,
                   int overlap_y = 0);

// Detector-letterboxing gray.
inline constexpr int kDefaultPadFill = 114;

struct Tile {
    TileIndex index;
    cv::Mat image;
};

// Cuts the raster into rows*cols tiles of exactly tile_w x tile_h, row-major.
// The padded band is filled with pad_fill. 8-bit rasters only.
std::vector<Tile> crop_tiles(const cv::Mat& image, const TileGrid& grid,
                             int pad_fill = kDefaultPadFill);

// Tile-local -> full-image coordinates. Exact: one addition per axis.
PixelPoint tile_to_global(const TileGrid& grid, TileIndex idx, PixelPoint local);

// All tiles containing a padded-image point, with tile-local coordinates.
// Exactly one hit when overlap is zero and the point is interior.
std::vector<std::pair<TileIndex, PixelPoint>> global_to_tile(const TileGrid& grid,
                                                             PixelPoint global);

// 8-bit 3-channel rasters only; anything else is rejected, never converted.
cv::Mat load_raster(const std::filesystem::path& path);
void save_raster(const std::filesystem::path& path, const cv::Mat& image);

std::string tile_filename(std::string_view image_stem, TileIndex idx);

}  // namespace gcp
