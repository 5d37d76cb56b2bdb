#include "segcoreset/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "segcoreset/error.hpp"

namespace segcoreset {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

[[noreturn]] void parse_fail(const std::string& what) { fail(ErrorKind::Parse, what); }

bool is_blank(std::string_view s) { return trim(s).empty(); }

}  // namespace

SignalFormat format_from_path(const std::string& path) {
    const auto dot = path.rfind('.');
    if (dot != std::string::npos) {
        std::string ext = path.substr(dot + 1);
        for (char& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        if (ext == "pgm") return SignalFormat::Pgm;
    }
    return SignalFormat::Csv;
}

SignalFormat parse_signal_format(const std::string& text) {
    if (text == "csv") return SignalFormat::Csv;
    if (text == "pgm") return SignalFormat::Pgm;
    fail(ErrorKind::Parameter, "format must be 'csv' or 'pgm', got '" + text + "'");
}

Signal parse_csv(std::string_view text) {
    std::vector<double> labels;
    int rows = 0;
    int cols = -1;
    std::size_t line_no = 0;
    std::size_t trailing_blank = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (is_blank(line)) {
            ++trailing_blank;
            continue;
        }
        if (trailing_blank > 0) parse_fail("line " + std::to_string(line_no - trailing_blank) + ": empty row");
        int count = 0;
        while (true) {
            const auto comma = line.find(',');
            const std::string_view token = trim(line.substr(0, comma));
            double v = 0.0;
            const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
            if (token.empty() || res.ec != std::errc{} || res.ptr != token.data() + token.size() ||
                !std::isfinite(v)) {
                parse_fail("line " + std::to_string(line_no) + ", field " + std::to_string(count + 1) +
                           ": not a finite number: '" + std::string(token) + "'");
            }
            labels.push_back(v);
            ++count;
            if (comma == std::string_view::npos) break;
            line.remove_prefix(comma + 1);
        }
        if (cols < 0) {
            cols = count;
        } else if (count != cols) {
            parse_fail("line " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                       " fields, found " + std::to_string(count));
        }
        ++rows;
    }
    if (rows == 0) parse_fail("line 1: no data rows");
    return Signal(rows, cols, std::move(labels));
}

namespace {

class PgmReader {
public:
    PgmReader(std::string_view bytes, std::size_t start) : b_(bytes), pos_(start) {}

    std::size_t pos() const { return pos_; }

    void skip_space_and_comments() {
        while (pos_ < b_.size()) {
            const char ch = b_[pos_];
            if (ch == '#') {
                while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(ch))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    long read_uint(const char* what) {
        skip_space_and_comments();
        const std::size_t start = pos_;
        long v = 0;
        while (pos_ < b_.size() && std::isdigit(static_cast<unsigned char>(b_[pos_]))) {
            v = v * 10 + (b_[pos_] - '0');
            if (v > 1000000000L) parse_fail("byte " + std::to_string(start) + ": " + what + " too large");
            ++pos_;
        }
        if (pos_ == start) {
            parse_fail("byte " + std::to_string(start) + ": expected " + what);
        }
        return v;
    }

    unsigned char byte(const char* what) {
        if (pos_ >= b_.size()) parse_fail("byte " + std::to_string(pos_) + ": unexpected end of data reading " + what);
        return static_cast<unsigned char>(b_[pos_++]);
    }

private:
    std::string_view b_;
    std::size_t pos_;
};

}  // namespace

Signal parse_pgm(std::string_view bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
        parse_fail("byte 0: not a PGM file (expected magic P2 or P5)");
    }
    const bool binary = bytes[1] == '5';
    PgmReader in(bytes, 2);
    const long width = in.read_uint("width");
    const long height = in.read_uint("height");
    in.skip_space_and_comments();
    const std::size_t maxval_pos = in.pos();
    const long maxval = in.read_uint("maxval");
    if (width < 1 || height < 1) parse_fail("byte 2: image dimensions must be positive");
    if (maxval < 1 || maxval > 65535) {
        parse_fail("byte " + std::to_string(maxval_pos) + ": unsupported maxval " + std::to_string(maxval) +
                   " (must be 1..65535)");
    }
    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (count > bytes.size()) {
        parse_fail("byte " + std::to_string(bytes.size()) + ": data ends before " + std::to_string(count) +
                   " pixels");
    }
    std::vector<double> labels;
    labels.reserve(count);
    if (binary) {
        const std::size_t ws = in.pos();
        if (ws >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[ws]))) {
            parse_fail("byte " + std::to_string(ws) + ": expected whitespace after maxval");
        }
        PgmReader raw(bytes, ws + 1);
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t at = raw.pos();
            long v = raw.byte("pixel");
            if (maxval > 255) v = (v << 8) | raw.byte("pixel");
            if (v > maxval) {
                parse_fail("byte " + std::to_string(at) + ": pixel " + std::to_string(v) + " exceeds maxval");
            }
            labels.push_back(static_cast<double>(v));
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            in.skip_space_and_comments();
            const std::size_t at = in.pos();
            const long v = in.read_uint("pixel value");
            if (v > maxval) {
                parse_fail("byte " + std::to_string(at) + ": pixel " + std::to_string(v) + " exceeds maxval");
            }
            labels.push_back(static_cast<double>(v));
        }
    }
    return Signal(static_cast<int>(height), static_cast<int>(width), std::move(labels));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write '" + path + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) fail(ErrorKind::Io, "write to '" + path + "' failed");
}

Signal load_signal(const std::string& path, SignalFormat format) {
    const std::string data = read_file(path);
    try {
        return format == SignalFormat::Pgm ? parse_pgm(data) : parse_csv(data);
    } catch (const Error& e) {
        fail(e.kind(), path + ": " + e.what());
    }
}

Signal load_signal(const std::string& path) { return load_signal(path, format_from_path(path)); }

namespace {

std::string shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string to_csv(const Signal& signal) {
    std::string out;
    for (int r = 0; r < signal.rows(); ++r) {
        for (int c = 0; c < signal.cols(); ++c) {
            if (c) out += ',';
            out += shortest(signal.at(r, c));
        }
        out += '\n';
    }
    return out;
}

void save_csv(const Signal& signal, const std::string& path) { write_file(path, to_csv(signal)); }

namespace {

json rect_json(const Rect& r) { return json::array({r.r0, r.r1, r.c0, r.c1}); }

Rect rect_from(const json& j) {
    if (!j.is_array() || j.size() != 4) parse_fail("rect must be [r0, r1, c0, c1]");
    for (const auto& v : j) {
        if (!v.is_number_integer()) parse_fail("rect entries must be integers");
    }
    return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
}

const json& field(const json& obj, const char* key) {
    if (!obj.is_object()) parse_fail(std::string("expected an object holding '") + key + "'");
    const auto it = obj.find(key);
    if (it == obj.end()) parse_fail(std::string("missing field '") + key + "'");
    return *it;
}

double number(const json& obj, const char* key) {
    const json& v = field(obj, key);
    if (!v.is_number()) parse_fail(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

int integer(const json& obj, const char* key) {
    const json& v = field(obj, key);
    if (!v.is_number_integer()) parse_fail(std::string("field '") + key + "' must be an integer");
    return v.get<int>();
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        parse_fail(std::string("invalid JSON: ") + e.what());
    }
}

void check_version(const json& doc) {
    const int version = integer(doc, "version");
    if (version != kFileVersion) {
        parse_fail("unsupported file version " + std::to_string(version));
    }
}

}  // namespace

std::string coreset_to_json(const Coreset& c) {
    json blocks = json::array();
    for (const BlockCoreset& b : c.blocks) {
        json pts = json::array();
        for (const CoresetPoint& p : b.points) {
            pts.push_back({{"row", p.row}, {"col", p.col}, {"label", p.label}, {"weight", p.weight}});
        }
        blocks.push_back({{"rect", rect_json(b.rect)}, {"points", std::move(pts)}});
    }
    json doc = {{"version", kFileVersion}, {"n", c.rows},         {"m", c.cols},
                {"k", c.k},                {"eps", c.eps},        {"delta", c.delta},
                {"gamma", c.gamma},        {"sigma", c.sigma},    {"mode", to_string(c.mode)},
                {"blocks", std::move(blocks)}};
    return doc.dump(1) + "\n";
}

Coreset coreset_from_json(std::string_view text) {
    const json doc = parse_json(text);
    check_version(doc);
    Coreset c;
    c.rows = integer(doc, "n");
    c.cols = integer(doc, "m");
    c.k = integer(doc, "k");
    c.eps = number(doc, "eps");
    c.delta = doc.contains("delta") ? number(doc, "delta") : 1.0;
    c.gamma = number(doc, "gamma");
    c.sigma = number(doc, "sigma");
    const json& mode = field(doc, "mode");
    if (!mode.is_string()) parse_fail("field 'mode' must be a string");
    try {
        c.mode = parse_build_mode(mode.get<std::string>());
    } catch (const Error& e) {
        parse_fail(e.what());
    }
    if (c.rows < 1 || c.cols < 1) parse_fail("grid dimensions must be positive");
    const Rect grid{0, c.rows, 0, c.cols};
    std::int64_t area = 0;
    const json& blocks = field(doc, "blocks");
    if (!blocks.is_array()) parse_fail("field 'blocks' must be an array");
    for (const json& jb : blocks) {
        BlockCoreset b;
        b.rect = rect_from(field(jb, "rect"));
        if (b.rect.empty() || !grid.contains(b.rect)) {
            fail(ErrorKind::Bounds, "block rect " + to_string(b.rect) + " outside grid");
        }
        area += b.rect.area();
        const json& pts = field(jb, "points");
        if (!pts.is_array() || pts.size() != 4) parse_fail("every block needs exactly 4 points");
        for (std::size_t i = 0; i < 4; ++i) {
            const json& jp = pts[i];
            b.points[i] = {integer(jp, "row"), integer(jp, "col"), number(jp, "label"), number(jp, "weight")};
            if (!b.rect.contains(b.points[i].row, b.points[i].col)) {
                fail(ErrorKind::Bounds, "coreset point outside its block " + to_string(b.rect));
            }
        }
        c.blocks.push_back(b);
    }
    if (area != grid.area()) {
        fail(ErrorKind::Validation, "block areas sum to " + std::to_string(area) + ", grid has " +
                                        std::to_string(grid.area()) + " cells");
    }
    return c;
}

void save_coreset(const Coreset& coreset, const std::string& path) {
    write_file(path, coreset_to_json(coreset));
}

Coreset load_coreset(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return coreset_from_json(text);
    } catch (const Error& e) {
        fail(e.kind(), path + ": " + e.what());
    }
}

namespace {

json node_json(const KTree& tree, int i) {
    const KTree::Node& n = tree.node(i);
    if (n.leaf) return {{"leaf", {{"label", n.label}}}};
    return {{"split",
             {{"axis", n.axis == Axis::Row ? "row" : "col"},
              {"threshold", n.threshold},
              {"low", node_json(tree, n.low)},
              {"high", node_json(tree, n.high)}}}};
}

int node_from(const json& j, KTree& tree, int depth) {
    if (depth > 100000) parse_fail("tree nesting too deep");
    if (!j.is_object()) parse_fail("tree node must be an object");
    if (j.contains("leaf")) {
        const double label = number(j["leaf"], "label");
        if (!std::isfinite(label)) parse_fail("leaf label must be finite");
        return tree.add_leaf(label);
    }
    if (!j.contains("split")) parse_fail("tree node needs 'leaf' or 'split'");
    const json& s = j["split"];
    const json& axis = field(s, "axis");
    if (!axis.is_string() || (axis != "row" && axis != "col")) parse_fail("split axis must be \"row\" or \"col\"");
    const int threshold = integer(s, "threshold");
    const int low = node_from(field(s, "low"), tree, depth + 1);
    const int high = node_from(field(s, "high"), tree, depth + 1);
    return tree.add_split(axis == "row" ? Axis::Row : Axis::Col, threshold, low, high);
}

}  // namespace

std::string tree_to_json(const KTree& tree, int rows, int cols) {
    json doc = {{"version", kFileVersion}, {"n", rows}, {"m", cols}, {"tree", node_json(tree, tree.root())}};
    return doc.dump(1) + "\n";
}

std::string segmentation_to_json(const KSegmentation& seg) {
    json cells = json::array();
    for (const Cell& c : seg.cells()) cells.push_back({{"rect", rect_json(c.rect)}, {"label", c.label}});
    json doc = {{"version", kFileVersion}, {"n", seg.rows()}, {"m", seg.cols()}, {"cells", std::move(cells)}};
    return doc.dump(1) + "\n";
}

KSegmentation segmentation_from_json(std::string_view text, int rows, int cols) {
    const json doc = parse_json(text);
    check_version(doc);
    if (doc.contains("n") || doc.contains("m")) {
        const int n = integer(doc, "n");
        const int m = integer(doc, "m");
        if (n != rows || m != cols) {
            fail(ErrorKind::Dimension, "tree is declared for " + std::to_string(n) + "x" + std::to_string(m) +
                                           ", grid is " + std::to_string(rows) + "x" + std::to_string(cols));
        }
    }
    if (doc.contains("tree")) {
        KTree tree;
        tree.set_root(node_from(doc["tree"], tree, 0));
        return ktree_to_segmentation(tree, rows, cols);
    }
    const json& cells = field(doc, "cells");
    if (!cells.is_array()) parse_fail("field 'cells' must be an array");
    std::vector<Cell> out;
    for (const json& jc : cells) {
        const double label = number(jc, "label");
        if (!std::isfinite(label)) parse_fail("cell label must be finite");
        out.push_back({rect_from(field(jc, "rect")), label});
    }
    return KSegmentation(rows, cols, std::move(out));
}

KSegmentation load_segmentation(const std::string& path, int rows, int cols) {
    const std::string text = read_file(path);
    try {
        return segmentation_from_json(text, rows, cols);
    } catch (const Error& e) {
        fail(e.kind(), path + ": " + e.what());
    }
}

}  // namespace segcoreset
