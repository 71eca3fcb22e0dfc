#include "regionflow/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "regionflow/error.hpp"

namespace regionflow::csv {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool skippable(std::string_view line) {
    auto t = trim(line);
    return t.empty() || t.front() == '#';
}

}  // namespace

Reader::Reader(const std::string& path) : path_(path), in_(path) {
    if (!in_) throw InputError("missing_file", "cannot open '" + path + "'");
    while (std::getline(in_, line_)) {
        ++line_no_;
        if (line_no_ == 1 && line_.size() >= 3 && line_.compare(0, 3, "\xEF\xBB\xBF") == 0)
            line_.erase(0, 3);
        if (skippable(line_)) continue;
        split_line(line_, header_);
        for (auto& h : header_) h = std::string(trim(h));
        return;
    }
    throw InputError("empty_input", "'" + path + "' has no header row");
}

std::optional<std::size_t> Reader::column(std::string_view name) const {
    auto it = std::find(header_.begin(), header_.end(), name);
    if (it == header_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header_.begin());
}

std::size_t Reader::require_column(std::string_view name) const {
    if (auto c = column(name)) return *c;
    throw InputError("malformed_header",
                     "'" + path_ + "' is missing required column '" + std::string(name) + "'");
}

bool Reader::next(std::vector<std::string>& fields) {
    while (std::getline(in_, line_)) {
        ++line_no_;
        if (skippable(line_)) continue;
        split_line(line_, fields);
        for (auto& f : fields) {
            auto t = trim(f);
            if (t.size() != f.size()) f = std::string(t);
        }
        ++rows_;
        return true;
    }
    return false;
}

void split_line(std::string_view line, std::vector<std::string>& fields) {
    fields.clear();
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
}

std::optional<long long> parse_int(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<bool> parse_bool(std::string_view s) {
    std::string t(trim(s));
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "1" || t == "true" || t == "yes" || t == "y" || t == "t") return true;
    if (t == "0" || t == "false" || t == "no" || t == "n" || t == "f") return false;
    return std::nullopt;
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace regionflow::csv
