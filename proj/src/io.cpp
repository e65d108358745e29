#include "ncvis/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>

namespace ncvis {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& message) {
    throw Error("io", path.string() + ": " + message);
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(path, "cannot open for reading");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return std::move(buffer).str();
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    while (!lines.empty() && trim(lines.back()).empty()) {
        lines.pop_back();
    }
    return lines;
}

std::string location(std::size_t row, std::size_t col) {
    return "row " + std::to_string(row) + " col " + std::to_string(col);
}

std::uint32_t read_u32_le(const unsigned char* p) {
    return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
           (std::uint32_t(p[3]) << 24);
}

void write_u32_le(std::ostream& out, std::uint32_t v) {
    const std::array<char, 4> bytes{char(v & 0xff), char((v >> 8) & 0xff), char((v >> 16) & 0xff),
                                    char((v >> 24) & 0xff)};
    out.write(bytes.data(), bytes.size());
}

constexpr std::string_view bin_magic = "NCV1";
constexpr std::size_t bin_header = 12;

} // namespace

Matrix read_table(const std::filesystem::path& path, char delimiter) {
    const std::string text = slurp(path);
    const auto lines = split_lines(text);
    if (lines.empty()) {
        fail(path, "empty file");
    }

    std::vector<double> values;
    std::size_t cols = 0;
    for (std::size_t r = 0; r < lines.size(); ++r) {
        const std::size_t row = r + 1;
        std::size_t count = 0;
        std::string_view rest = lines[r];
        if (trim(rest).empty()) {
            fail(path, "row " + std::to_string(row) + ": empty row");
        }
        for (;;) {
            const auto cut = rest.find(delimiter);
            std::string_view token = trim(rest.substr(0, cut));
            ++count;
            if (!token.empty() && token.front() == '+') {
                token.remove_prefix(1);
            }
            double v = 0;
            const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
            if (token.empty() || ec != std::errc() || end != token.data() + token.size()) {
                fail(path, location(row, count) + ": cannot parse '" + std::string(token) + "'");
            }
            if (!std::isfinite(v)) {
                fail(path, location(row, count) + ": non-finite value '" + std::string(token) + "'");
            }
            values.push_back(v);
            if (cut == std::string_view::npos) {
                break;
            }
            rest.remove_prefix(cut + 1);
        }
        if (r == 0) {
            cols = count;
        } else if (count != cols) {
            fail(path, "row " + std::to_string(row) + ": ragged row with " + std::to_string(count) +
                           " columns, expected " + std::to_string(cols));
        }
    }
    return Matrix(lines.size(), cols, std::move(values));
}

DataMatrix read_csv(const std::filesystem::path& path) {
    return DataMatrix(read_table(path, ','));
}

DataMatrix read_bin(const std::filesystem::path& path) {
    const std::string bytes = slurp(path);
    if (bytes.size() < bin_header || std::string_view(bytes).substr(0, 4) != bin_magic) {
        fail(path, "not an NCV1 file (bad magic)");
    }
    const auto* raw = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::uint64_t rows = read_u32_le(raw + 4);
    const std::uint64_t cols = read_u32_le(raw + 8);
    const std::uint64_t expected = bin_header + rows * cols * 4;
    if (bytes.size() < expected) {
        fail(path, "truncated payload: header declares " + std::to_string(rows) + "x" +
                       std::to_string(cols) + " values, file holds " +
                       std::to_string((bytes.size() - bin_header) / 4));
    }
    if (bytes.size() > expected) {
        fail(path, "unexpected " + std::to_string(bytes.size() - expected) + " trailing bytes");
    }

    std::vector<double> values(rows * cols);
    for (std::uint64_t idx = 0; idx < values.size(); ++idx) {
        const float v = std::bit_cast<float>(read_u32_le(raw + bin_header + 4 * idx));
        if (!std::isfinite(v)) {
            fail(path, location(idx / cols + 1, idx % cols + 1) + ": non-finite value");
        }
        values[idx] = v;
    }
    return DataMatrix(Matrix(rows, cols, std::move(values)));
}

void write_bin(const Matrix& values, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(path, "cannot open for writing");
    }
    out.write(bin_magic.data(), bin_magic.size());
    write_u32_le(out, static_cast<std::uint32_t>(values.rows()));
    write_u32_le(out, static_cast<std::uint32_t>(values.cols()));
    for (double v : values.values()) {
        write_u32_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
    if (!out) {
        fail(path, "write failed");
    }
}

std::string format_coordinate(double value) {
    if (value == 0) {
        return "0.0";
    }
    std::array<char, 32> buffer{};
    const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    std::string out(buffer.data(), end);
    if (out.find_first_of(".eni") == std::string::npos) {
        out += ".0";
    }
    return out;
}

void write_embedding(const EmbeddingState& state, const std::filesystem::path& path) {
    if (!state.coords.all_finite()) {
        fail(path, "refusing to write a non-finite embedding");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(path, "cannot open for writing");
    }
    std::string line;
    for (std::size_t i = 0; i < state.coords.rows(); ++i) {
        line.clear();
        const auto row = state.coords.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j > 0) {
                line += '\t';
            }
            line += format_coordinate(row[j]);
        }
        line += '\n';
        out << line;
    }
    if (!out) {
        fail(path, "write failed");
    }
}

std::vector<std::string> read_labels(const std::filesystem::path& path) {
    const std::string text = slurp(path);
    std::vector<std::string> labels;
    for (auto line : split_lines(text)) {
        labels.emplace_back(trim(line));
    }
    if (labels.empty()) {
        fail(path, "empty label file");
    }
    return labels;
}

void write_svg_scatter(const EmbeddingState& state, const std::vector<std::string>* labels,
                       const std::filesystem::path& path) {
    const Matrix& z = state.coords;
    if (z.cols() != 2) {
        fail(path, "scatter plot needs a 2-D embedding, got " + std::to_string(z.cols()) +
                       " dimensions");
    }
    if (labels != nullptr && labels->size() != z.rows()) {
        fail(path, "label count " + std::to_string(labels->size()) + " does not match " +
                       std::to_string(z.rows()) + " points");
    }
    if (!z.all_finite()) {
        fail(path, "refusing to plot a non-finite embedding");
    }

    static constexpr std::array<std::string_view, 12> palette{
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
        "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#ad494a"};
    constexpr double size = 800.0;
    constexpr double margin = 0.05 * size;
    constexpr double inner = size - 2 * margin;

    double lo[2] = {0, 0};
    double hi[2] = {0, 0};
    for (std::size_t c = 0; c < 2; ++c) {
        lo[c] = hi[c] = z.rows() > 0 ? z(0, c) : 0.0;
        for (std::size_t i = 1; i < z.rows(); ++i) {
            lo[c] = std::min(lo[c], z(i, c));
            hi[c] = std::max(hi[c], z(i, c));
        }
    }
    const double span = std::max(hi[0] - lo[0], hi[1] - lo[1]);
    const double scale = span > 0 ? inner / span : 0.0;
    // Uniform scale keeps the aspect ratio; the shorter axis is centered.
    const double offset_x = margin + 0.5 * (inner - scale * (hi[0] - lo[0]));
    const double offset_y = margin + 0.5 * (inner - scale * (hi[1] - lo[1]));

    std::map<std::string, std::size_t> color_of;
    std::vector<std::size_t> colors(z.rows(), 0);
    if (labels != nullptr) {
        for (std::size_t i = 0; i < z.rows(); ++i) {
            const auto [it, inserted] = color_of.try_emplace((*labels)[i], color_of.size());
            colors[i] = it->second % palette.size();
        }
    }

    std::ofstream out(path);
    if (!out) {
        fail(path, "cannot open for writing");
    }
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
        << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    char buffer[160];
    for (std::size_t i = 0; i < z.rows(); ++i) {
        const double x = offset_x + scale * (z(i, 0) - lo[0]);
        const double y = size - (offset_y + scale * (z(i, 1) - lo[1]));
        std::snprintf(buffer, sizeof(buffer),
                      "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2\" fill=\"%s\" fill-opacity=\"0.7\"/>\n", x,
                      y, palette[colors[i]].data());
        out << buffer;
    }
    out << "</svg>\n";
    if (!out) {
        fail(path, "write failed");
    }
}

} // namespace ncvis
