#include "gcplocate/tiler.hpp"

#include <opencv2/imgcodecs.hpp>

#include <cmath>
#include <string>

namespace gcp {

namespace {

int ceil_div(int num, int den) { return (num + den - 1) / den; }

void check_tile_dim(int dim, const char* axis) {
    if (dim <= 0 || dim % 32 != 0) {
        throw BadTileSize(std::string("tile ") + axis + " must be a positive multiple of 32, got " +
                          std::to_string(dim));
    }
}

}  // namespace

TileGrid plan_grid(int image_w, int image_h, int tile_w, int tile_h, int overlap_x,
                   int overlap_y) {
    if (image_w <= 0 || image_h <= 0) {
        throw DimensionMismatch("image dimensions must be positive");
    }
    check_tile_dim(tile_w, "width");
    check_tile_dim(tile_h, "height");
    if (overlap_x < 0 || overlap_x >= tile_w) {
        throw OverlapTooLarge("overlap_x " + std::to_string(overlap_x) + " not in [0, " +
                              std::to_string(tile_w) + ")");
    }
    if (overlap_y < 0 || overlap_y >= tile_h) {
        throw OverlapTooLarge("overlap_y " + std::to_string(overlap_y) + " not in [0, " +
                              std::to_string(tile_h) + ")");
    }

    TileGrid g;
    g.image_w = image_w;
    g.image_h = image_h;
    g.tile_w = tile_w;
    g.tile_h = tile_h;
    g.overlap_x = overlap_x;
    g.overlap_y = overlap_y;
    g.cols = image_w <= tile_w ? 1 : 1 + ceil_div(image_w - tile_w, g.stride_x());
    g.rows = image_h <= tile_h ? 1 : 1 + ceil_div(image_h - tile_h, g.stride_y());
    g.pad_right = (g.cols - 1) * g.stride_x() + tile_w - image_w;
    g.pad_bottom = (g.rows - 1) * g.stride_y() + tile_h - image_h;
    return g;
}

std::vector<Tile> crop_tiles(const cv::Mat& image, const TileGrid& grid, int pad_fill) {
    if (image.cols != grid.image_w || image.rows != grid.image_h) {
        throw DimensionMismatch("raster is " + std::to_string(image.cols) + "x" +
                                std::to_string(image.rows) + ", grid expects " +
                                std::to_string(grid.image_w) + "x" + std::to_string(grid.image_h));
    }
    if (image.depth() != CV_8U || (image.channels() != 1 && image.channels() != 3)) {
        throw RasterIoError("tiling expects an 8-bit 1- or 3-channel raster");
    }

    cv::Mat padded;
    cv::copyMakeBorder(image, padded, 0, grid.pad_bottom, 0, grid.pad_right, cv::BORDER_CONSTANT,
                       cv::Scalar(pad_fill, pad_fill, pad_fill));

    std::vector<Tile> tiles;
    tiles.reserve(static_cast<std::size_t>(grid.tile_count()));
    for (int i = 1; i <= grid.rows; ++i) {
        for (int j = 1; j <= grid.cols; ++j) {
            const TileIndex idx{i, j};
            cv::Rect roi(grid.origin_x(idx), grid.origin_y(idx), grid.tile_w, grid.tile_h);
            tiles.push_back({idx, padded(roi).clone()});
        }
    }
    return tiles;
}

PixelPoint tile_to_global(const TileGrid& grid, TileIndex idx, PixelPoint local) {
    if (!grid.contains(idx)) {
        throw OutOfTile("tile (" + std::to_string(idx.i) + "," + std::to_string(idx.j) +
                        ") outside grid of " + std::to_string(grid.rows) + "x" +
                        std::to_string(grid.cols));
    }
    if (!(local.x >= 0.0 && local.x < grid.tile_w && local.y >= 0.0 && local.y < grid.tile_h)) {
        throw OutOfTile("point (" + std::to_string(local.x) + "," + std::to_string(local.y) +
                        ") outside tile bounds");
    }
    return {grid.origin_x(idx) + local.x, grid.origin_y(idx) + local.y};
}

std::vector<std::pair<TileIndex, PixelPoint>> global_to_tile(const TileGrid& grid,
                                                             PixelPoint global) {
    if (!(global.x >= 0.0 && global.x < grid.padded_w() && global.y >= 0.0 &&
          global.y < grid.padded_h())) {
        throw OutOfImage("point (" + std::to_string(global.x) + "," + std::to_string(global.y) +
                         ") outside padded image");
    }

    // Candidate rows/columns around floor(g / stride); test each exactly.
    auto axis_hits = [](double g, int stride, int tile, int count) {
        std::vector<int> hits;
        int lo = static_cast<int>(std::floor((g - tile) / stride)) + 1;
        if (lo < 0) lo = 0;
        for (int k = lo; k < count; ++k) {
            const double local = g - static_cast<double>(k) * stride;
            if (local < 0.0) break;
            if (local < tile) hits.push_back(k);
        }
        return hits;
    };

    const std::vector<int> is = axis_hits(global.y, grid.stride_y(), grid.tile_h, grid.rows);
    const std::vector<int> js = axis_hits(global.x, grid.stride_x(), grid.tile_w, grid.cols);

    std::vector<std::pair<TileIndex, PixelPoint>> out;
    out.reserve(is.size() * js.size());
    for (int i0 : is) {
        for (int j0 : js) {
            const TileIndex idx{i0 + 1, j0 + 1};
            out.emplace_back(idx, PixelPoint{global.x - grid.origin_x(idx),
                                             global.y - grid.origin_y(idx)});
        }
    }
    return out;
}

cv::Mat load_raster(const std::filesystem::path& path) {
    cv::Mat img = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
    if (img.empty()) {
        throw RasterIoError("cannot read raster " + path.string());
    }
    if (img.depth() != CV_8U || img.channels() != 3) {
        throw RasterIoError("raster " + path.string() +
                            " is not 8-bit RGB; refusing to convert");
    }
    return img;
}

void save_raster(const std::filesystem::path& path, const cv::Mat& image) {
    if (image.empty()) {
        throw RasterIoError("refusing to write empty raster " + path.string());
    }
    if (!cv::imwrite(path.string(), image)) {
        throw RasterIoError("cannot write raster " + path.string());
    }
}

std::string tile_filename(std::string_view image_stem, TileIndex idx) {
    return std::string(image_stem) + "_r" + std::to_string(idx.i) + "_c" + std::to_string(idx.j) +
           ".png";
}

}  // namespace gcp
