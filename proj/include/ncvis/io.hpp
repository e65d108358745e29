#ifndef NCVIS_IO_HPP
#define NCVIS_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "ncvis/core.hpp"

namespace ncvis {

/// Headerless delimited numeric table. Any ragged row, unparsable token or
/// non-finite value raises Error("io", ...) with its 1-based row and column.
Matrix read_table(const std::filesystem::path& path, char delimiter = ',');

DataMatrix read_csv(const std::filesystem::path& path);

/// Binary layout, all little-endian: "NCV1", uint32 rows, uint32 cols, then
/// rows * cols float32 values in row-major order.
DataMatrix read_bin(const std::filesystem::path& path);
void write_bin(const Matrix& values, const std::filesystem::path& path);

/// Shortest decimal that reads back to the same double; zero is "0.0".
std::string format_coordinate(double value);

/// One tab-separated line per point.
void write_embedding(const EmbeddingState& state, const std::filesystem::path& path);

/// One label per line, compared as strings.
std::vector<std::string> read_labels(const std::filesystem::path& path);

/// Standalone SVG scatter plot of a 2-D embedding. Each distinct label gets
/// its own color from a 12-color cycle, in order of first appearance.
void write_svg_scatter(const EmbeddingState& state, const std::vector<std::string>* labels,
                       const std::filesystem::path& path);

} // namespace ncvis

#endif
