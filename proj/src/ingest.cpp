#include "nosetip/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "nosetip/error.hpp"

namespace nosetip::ingest {
namespace {

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

std::optional<double> parse_double(std::string_view tok) {
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
    return v;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view tok) {
    Int v{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
    return v;
}

std::vector<std::string> read_lines(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
    }
    return lines;
}

bool blank(std::string_view s) { return split_ws(s).empty(); }

DepthMap read_grid(std::istream& in) {
    const auto lines = read_lines(in);
    if (lines.empty()) throw ParseError(at_line(1) + "missing 'width height' header", 1);
    const auto header = split_ws(lines[0]);
    std::optional<std::size_t> width, height;
    if (header.size() == 2) {
        width = parse_int<std::size_t>(header[0]);
        height = parse_int<std::size_t>(header[1]);
    }
    if (!width || !height || *width == 0 || *height == 0)
        throw ParseError(at_line(1) + "malformed header, expected 'width height'", 1);

    const std::size_t w = *width, h = *height;
    std::vector<double> depth(w * h, 0.0);
    std::vector<std::uint8_t> valid(w * h, 0);
    std::size_t row = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        const auto toks = split_ws(lines[i]);
        if (toks.empty()) continue;
        if (row == h)
            throw ParseError(at_line(lineno) + "unexpected data after " + std::to_string(h) + " rows",
                             lineno);
        if (toks.size() != w)
            throw ParseError(at_line(lineno) + "expected " + std::to_string(w) + " values, found " +
                                 std::to_string(toks.size()),
                             lineno);
        for (std::size_t c = 0; c < w; ++c) {
            const std::size_t idx = row * w + c;
            if (iequals(toks[c], "nan")) continue;
            const auto v = parse_double(toks[c]);
            if (!v || !std::isfinite(*v))
                throw ParseError(at_line(lineno) + "bad depth value '" + std::string(toks[c]) + "'",
                                 lineno);
            depth[idx] = *v;
            valid[idx] = 1;
        }
        ++row;
    }
    if (row != h)
        throw ParseError(at_line(lines.size() + 1) + "expected " + std::to_string(h) +
                             " rows, found " + std::to_string(row),
                         lines.size() + 1);
    return DepthMap(w, h, std::move(depth), std::move(valid));
}

std::optional<long long> integral(double v) {
    if (!std::isfinite(v) || std::trunc(v) != v || std::abs(v) > 1e15) return std::nullopt;
    return static_cast<long long>(v);
}

DepthMap read_xyz(std::istream& in) {
    const auto lines = read_lines(in);
    std::optional<std::pair<std::size_t, std::size_t>> grid;
    struct Sample {
        long long x, y;
        double z;
        std::size_t line;
    };
    std::vector<Sample> samples;
    bool seen_content = false;

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        auto toks = split_ws(lines[i]);
        if (toks.empty()) continue;
        if (toks[0].starts_with('#')) {
            if (!seen_content && toks[0] == "#" && toks.size() >= 2 && toks[1] == "grid") {
                std::optional<std::size_t> w, h;
                if (toks.size() == 4) {
                    w = parse_int<std::size_t>(toks[2]);
                    h = parse_int<std::size_t>(toks[3]);
                }
                if (!w || !h || *w == 0 || *h == 0)
                    throw ParseError(at_line(lineno) + "malformed header, expected '# grid W H'",
                                     lineno);
                grid = {*w, *h};
            }
            seen_content = true;
            continue;
        }
        seen_content = true;
        if (toks.size() != 3)
            throw ParseError(at_line(lineno) + "expected 3 values 'x y z', found " +
                                 std::to_string(toks.size()),
                             lineno);
        const auto x = parse_double(toks[0]);
        const auto y = parse_double(toks[1]);
        const auto z = parse_double(toks[2]);
        if (!x || !y || !z) throw ParseError(at_line(lineno) + "unparseable number", lineno);
        const auto xi = integral(*x);
        const auto yi = integral(*y);
        if (!xi || !yi)
            throw ParseError(at_line(lineno) + "non-integer grid coordinates", lineno);
        if (!std::isfinite(*z)) throw ParseError(at_line(lineno) + "non-finite depth", lineno);
        samples.push_back({*xi, *yi, *z, lineno});
    }

    long long x0 = 0, y0 = 0;
    std::size_t w = 0, h = 0;
    if (grid) {
        std::tie(w, h) = *grid;
    } else {
        if (samples.empty()) throw ParseError("line 1: no points and no '# grid W H' header", 1);
        auto [xmin, xmax] = std::minmax_element(samples.begin(), samples.end(),
                                                [](auto& a, auto& b) { return a.x < b.x; });
        auto [ymin, ymax] = std::minmax_element(samples.begin(), samples.end(),
                                                [](auto& a, auto& b) { return a.y < b.y; });
        x0 = xmin->x;
        y0 = ymin->y;
        w = static_cast<std::size_t>(xmax->x - x0 + 1);
        h = static_cast<std::size_t>(ymax->y - y0 + 1);
        constexpr std::size_t max_cells = std::size_t{1} << 28;
        if (w > max_cells / h)
            throw ParseError(at_line(xmax->line) + "grid bounding box too large", xmax->line);
    }

    std::vector<double> depth(w * h, 0.0);
    std::vector<std::uint8_t> valid(w * h, 0);
    for (const auto& s : samples) {
        const long long cx = s.x - x0, cy = s.y - y0;
        if (cx < 0 || cy < 0 || static_cast<std::size_t>(cx) >= w || static_cast<std::size_t>(cy) >= h)
            throw ParseError(at_line(s.line) + "coordinates outside the declared grid", s.line);
        const std::size_t idx = static_cast<std::size_t>(cy) * w + static_cast<std::size_t>(cx);
        if (valid[idx] != 0) throw ParseError(at_line(s.line) + "duplicate grid cell", s.line);
        depth[idx] = s.z;
        valid[idx] = 1;
    }
    return DepthMap(w, h, std::move(depth), std::move(valid));
}

// PGM header tokens are separated by whitespace and may be interleaved with
// '#' comments running to end of line.
class PgmReader {
public:
    explicit PgmReader(std::string bytes) : bytes_(std::move(bytes)) {}

    std::string_view token() {
        skip_space_and_comments();
        const std::size_t start = pos_;
        while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_])) &&
               bytes_[pos_] != '#')
            ++pos_;
        return std::string_view(bytes_).substr(start, pos_ - start);
    }

    std::size_t number(const char* what) {
        skip_space_and_comments();
        const std::size_t at = pos_;
        const auto v = parse_int<std::size_t>(token());
        if (!v)
            throw ParseError("byte " + std::to_string(at) + ": malformed header, bad " + what, at);
        return *v;
    }

    std::size_t pos() const { return pos_; }
    const std::string& bytes() const { return bytes_; }
    void advance(std::size_t n) { pos_ += n; }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::string bytes_;
    std::size_t pos_ = 0;
};

DepthMap read_pgm16(std::istream& in) {
    PgmReader rd(std::string(std::istreambuf_iterator<char>(in), {}));
    if (rd.token() != "P5") throw ParseError("byte 0: malformed header, expected magic 'P5'", 0);
    const std::size_t w = rd.number("width");
    const std::size_t h = rd.number("height");
    const std::size_t maxval_at = rd.pos();
    const std::size_t maxval = rd.number("maxval");
    if (w == 0 || h == 0)
        throw ParseError("byte " + std::to_string(maxval_at) + ": malformed header, zero dimension",
                         maxval_at);
    if (maxval < 256 || maxval > 65535)
        throw ParseError("byte " + std::to_string(maxval_at) +
                             ": malformed header, maxval must be 256..65535 for 16-bit samples",
                         maxval_at);
    const std::size_t sep = rd.pos();
    if (sep >= rd.bytes().size() || !std::isspace(static_cast<unsigned char>(rd.bytes()[sep])))
        throw ParseError("byte " + std::to_string(sep) + ": missing whitespace after maxval", sep);
    rd.advance(1);

    const std::size_t data = rd.pos();
    const auto& bytes = rd.bytes();
    if (w > (std::numeric_limits<std::size_t>::max() / 2) / h)
        throw ParseError("byte " + std::to_string(data) + ": dimensions too large", data);
    const std::size_t need = 2 * w * h;
    if (bytes.size() - data < need)
        throw ParseError("byte " + std::to_string(bytes.size()) + ": truncated pixel data, expected " +
                             std::to_string(need) + " bytes",
                         bytes.size());
    if (bytes.size() - data > need)
        throw ParseError("byte " + std::to_string(data + need) + ": trailing data after pixels",
                         data + need);

    std::vector<double> depth(w * h, 0.0);
    std::vector<std::uint8_t> valid(w * h, 0);
    for (std::size_t i = 0; i < w * h; ++i) {
        const std::size_t at = data + 2 * i;
        const unsigned v = (static_cast<unsigned char>(bytes[at]) << 8) |
                           static_cast<unsigned char>(bytes[at + 1]);
        if (v > maxval)
            throw ParseError("byte " + std::to_string(at) + ": sample exceeds maxval", at);
        if (v != 0) {
            depth[i] = v;
            valid[i] = 1;
        }
    }
    return DepthMap(w, h, std::move(depth), std::move(valid));
}

void write_pgm16(const DepthMap& map, std::ostream& out) {
    std::string body;
    body.reserve(2 * map.size());
    for (std::size_t i = 0; i < map.size(); ++i) {
        unsigned v = 0;
        if (map.validity()[i] != 0) {
            const double q = std::round(map.depths()[i]);
            if (q < 1.0 || q > 65535.0)
                throw std::range_error("depth " + format_number(map.depths()[i]) + " at pixel " +
                                       std::to_string(i) + " does not fit PGM16 range [1, 65535]");
            v = static_cast<unsigned>(q);
        }
        body.push_back(static_cast<char>(v >> 8));
        body.push_back(static_cast<char>(v & 0xff));
    }
    out << "P5\n" << map.width() << ' ' << map.height() << "\n65535\n";
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
}

void write_grid(const DepthMap& map, std::ostream& out) {
    out << map.width() << ' ' << map.height() << '\n';
    for (std::size_t r = 0; r < map.height(); ++r) {
        for (std::size_t c = 0; c < map.width(); ++c) {
            if (c != 0) out << ' ';
            out << (map.valid(r, c) ? format_number(map.depth(r, c)) : std::string("nan"));
        }
        out << '\n';
    }
}

void write_xyz(const DepthMap& map, std::ostream& out) {
    out << "# grid " << map.width() << ' ' << map.height() << '\n';
    for (std::size_t r = 0; r < map.height(); ++r)
        for (std::size_t c = 0; c < map.width(); ++c)
            if (map.valid(r, c)) out << c << ' ' << r << ' ' << format_number(map.depth(r, c)) << '\n';
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

std::optional<DepthFileFormat> parse_format(std::string_view name) {
    if (iequals(name, "pgm16") || iequals(name, "pgm")) return DepthFileFormat::PGM16;
    if (iequals(name, "grid") || iequals(name, "ascii_grid")) return DepthFileFormat::ASCII_GRID;
    if (iequals(name, "xyz")) return DepthFileFormat::XYZ;
    return std::nullopt;
}

std::string_view format_name(DepthFileFormat format) {
    switch (format) {
        case DepthFileFormat::PGM16: return "pgm16";
        case DepthFileFormat::ASCII_GRID: return "grid";
        case DepthFileFormat::XYZ: return "xyz";
    }
    return "?";
}

std::string format_number(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

DepthMap read_depth_map(std::istream& in, DepthFileFormat format) {
    switch (format) {
        case DepthFileFormat::PGM16: return read_pgm16(in);
        case DepthFileFormat::ASCII_GRID: return read_grid(in);
        case DepthFileFormat::XYZ: return read_xyz(in);
    }
    throw std::invalid_argument("unknown depth file format");
}

void write_depth_map(const DepthMap& map, std::ostream& out, DepthFileFormat format) {
    switch (format) {
        case DepthFileFormat::PGM16: write_pgm16(map, out); return;
        case DepthFileFormat::ASCII_GRID: write_grid(map, out); return;
        case DepthFileFormat::XYZ: write_xyz(map, out); return;
    }
}

DepthMap load_depth_map(const std::filesystem::path& path, DepthFileFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    try {
        return read_depth_map(in, format);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.location());
    }
}

void save_depth_map(const DepthMap& map, const std::filesystem::path& path, DepthFileFormat format) {
    // Serialize first so a range error leaves no partial file behind.
    std::ostringstream buf(std::ios::binary);
    write_depth_map(map, buf, format);
    write_text_file(path, buf.str());
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
    auto out = open_for_write(path);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    finish_write(out, path);
}

std::string format_landmark(const Landmark& lm) {
    std::ostringstream os;
    os << "row=" << lm.row << '\n'
       << "col=" << lm.col << '\n'
       << "x=" << format_number(lm.point.x) << '\n'
       << "y=" << format_number(lm.point.y) << '\n'
       << "z=" << format_number(lm.point.z) << '\n'
       << "score=" << format_number(lm.score) << '\n';
    return os.str();
}

Landmark parse_landmark(std::string_view text) {
    std::map<std::string, std::string, std::less<>> kv;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (blank(line) || line.starts_with('#')) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(at_line(lineno) + "expected key=value", lineno);
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    auto get = [&](std::string_view key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw ParseError("landmark record missing key '" + std::string(key) + "'", 0);
        return it->second;
    };
    auto num = [&](std::string_view key) {
        const auto v = parse_double(get(key));
        if (!v) throw ParseError("landmark record has bad value for '" + std::string(key) + "'", 0);
        return *v;
    };
    auto idx = [&](std::string_view key) {
        const auto v = parse_int<std::size_t>(get(key));
        if (!v) throw ParseError("landmark record has bad value for '" + std::string(key) + "'", 0);
        return *v;
    };
    Landmark lm;
    lm.row = idx("row");
    lm.col = idx("col");
    lm.point = {num("x"), num("y"), num("z")};
    lm.score = num("score");
    return lm;
}

void save_landmark(const Landmark& lm, const std::filesystem::path& path) {
    write_text_file(path, format_landmark(lm));
}

Landmark load_landmark(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return parse_landmark(std::string(std::istreambuf_iterator<char>(in), {}));
}

void save_point_cloud(const std::vector<Point3>& cloud, const std::filesystem::path& path) {
    std::string text;
    for (const auto& p : cloud) {
        text += format_number(p.x);
        text += ' ';
        text += format_number(p.y);
        text += ' ';
        text += format_number(p.z);
        text += '\n';
    }
    write_text_file(path, text);
}

}  // namespace nosetip::ingest
