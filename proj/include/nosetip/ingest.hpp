#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nosetip/core.hpp"

namespace nosetip::ingest {

/// On-disk depth formats.
///
///  PGM16       binary "P5" PGM with 16-bit big-endian samples (maxval 256..65535).
///              Sample 0 is a dropout (invalid pixel); any other sample is the
///              depth itself. Saving rounds each valid depth to the nearest
///              integer, which must land in [1, 65535].
///  ASCII_GRID  "width height" on the first line, then `height` lines of
///              `width` numbers. The token "nan" (any case) marks an invalid pixel.
///  XYZ         one "x y z" triple per line; x and y must be integers and
///              address (col, row). An optional leading "# grid W H" line fixes
///              the grid, otherwise the grid is the bounding box of the points.
///              Cells without a point are invalid. Other '#' lines are comments.
enum class DepthFileFormat { PGM16, ASCII_GRID, XYZ };

/// Accepts "pgm16", "grid" and "xyz".
std::optional<DepthFileFormat> parse_format(std::string_view name);
std::string_view format_name(DepthFileFormat format);

DepthMap read_depth_map(std::istream& in, DepthFileFormat format);
void write_depth_map(const DepthMap& map, std::ostream& out, DepthFileFormat format);

/// Throws IoError when the file cannot be opened and ParseError (carrying the
/// line or byte offset) when it is malformed.
DepthMap load_depth_map(const std::filesystem::path& path, DepthFileFormat format);

/// Throws IoError for unwritable paths and std::range_error when a depth does
/// not fit the PGM16 sample range.
void save_depth_map(const DepthMap& map, const std::filesystem::path& path,
                    DepthFileFormat format);

/// Landmark record: six "key=value" lines (row, col, x, y, z, score).
std::string format_landmark(const Landmark& lm);
Landmark parse_landmark(std::string_view text);
void save_landmark(const Landmark& lm, const std::filesystem::path& path);
Landmark load_landmark(const std::filesystem::path& path);

/// "x y z" per line, shortest round-trip decimal form.
void save_point_cloud(const std::vector<Point3>& cloud, const std::filesystem::path& path);

/// Shortest decimal representation that parses back to the same double.
std::string format_number(double value);

void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace nosetip::ingest
