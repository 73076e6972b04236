#include "hardy/problem_file.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hardy {

ProblemFile ProblemFile::parse(std::string_view text, std::string source) {
    ProblemFile f;
    f.source_ = std::move(source);
    bool header = false;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

        Entry e;
        e.line = line_no;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
            if (i >= line.size()) break;
            const std::size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
            const std::string tok(line.substr(start, i - start));
            if (e.key.empty()) {
                e.key = tok;
                e.key_column = static_cast<int>(start) + 1;
            } else {
                e.tokens.push_back(tok);
                e.columns.push_back(static_cast<int>(start) + 1);
            }
        }
        if (e.key.empty()) {
            if (eol == text.size()) break;
            continue;
        }
        f.last_line_ = line_no;

        if (!header) {
            if (e.key != "hardy-problem") {
                throw ParseError(f.source_, e.line, e.key_column, "expected header 'hardy-problem <version>'");
            }
            if (e.tokens.size() != 1) throw ParseError(f.source_, e.line, e.key_column, "header takes one version number");
            const long v = f.integer(e, 0);
            if (v != kVersion) {
                throw ParseError(f.source_, e.line, e.columns[0], "unsupported format version " + e.tokens[0]);
            }
            f.version_ = static_cast<int>(v);
            header = true;
            continue;
        }
        if (e.key == "kind") {
            if (!f.kind_.empty()) throw ParseError(f.source_, e.line, e.key_column, "duplicate key 'kind'");
            if (e.tokens.size() != 1) throw ParseError(f.source_, e.line, e.key_column, "kind takes one word");
            f.kind_ = e.tokens[0];
            continue;
        }
        f.entries_.push_back(std::move(e));
        if (eol == text.size()) break;
    }
    if (!header) throw ParseError(f.source_, 1, 1, "missing header 'hardy-problem <version>'");
    if (f.kind_.empty()) throw ParseError(f.source_, f.last_line_, 1, "missing key 'kind'");
    return f;
}

ProblemFile ProblemFile::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidInput, "cannot open problem file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

void ProblemFile::check_keys(const std::vector<std::string_view>& allowed,
                             const std::vector<std::string_view>& repeatable) const {
    std::vector<std::string_view> seen;
    for (const Entry& e : entries_) {
        if (std::find(allowed.begin(), allowed.end(), e.key) == allowed.end()) {
            throw ParseError(source_, e.line, e.key_column, "unknown key '" + e.key + "' for kind " + kind_);
        }
        const bool repeats = std::find(repeatable.begin(), repeatable.end(), e.key) != repeatable.end();
        if (!repeats && std::find(seen.begin(), seen.end(), e.key) != seen.end()) {
            throw ParseError(source_, e.line, e.key_column, "duplicate key '" + e.key + "'");
        }
        seen.push_back(e.key);
    }
}

bool ProblemFile::has(std::string_view key) const { return find(key) != nullptr; }

const ProblemFile::Entry* ProblemFile::find(std::string_view key) const {
    for (const Entry& e : entries_) {
        if (e.key == key) return &e;
    }
    return nullptr;
}

const ProblemFile::Entry& ProblemFile::require(std::string_view key) const {
    if (const Entry* e = find(key)) return *e;
    fail_missing(key);
}

std::vector<const ProblemFile::Entry*> ProblemFile::all(std::string_view key) const {
    std::vector<const Entry*> out;
    for (const Entry& e : entries_) {
        if (e.key == key) out.push_back(&e);
    }
    return out;
}

void ProblemFile::fail(const Entry& e, std::size_t index, const std::string& what) const {
    const int col = index < e.columns.size() ? e.columns[index] : e.key_column;
    throw ParseError(source_, e.line, col, what);
}

void ProblemFile::fail_missing(std::string_view key) const {
    throw ParseError(source_, last_line_, 1, "missing key '" + std::string(key) + "'");
}

double ProblemFile::real(const Entry& e, std::size_t index) const {
    if (index >= e.tokens.size()) fail(e, e.tokens.size(), "'" + e.key + "' needs more values");
    const std::string& t = e.tokens[index];
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
        fail(e, index, "expected a finite number, found '" + t + "'");
    }
    return v;
}

long ProblemFile::integer(const Entry& e, std::size_t index) const {
    if (index >= e.tokens.size()) fail(e, e.tokens.size(), "'" + e.key + "' needs more values");
    const std::string& t = e.tokens[index];
    long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) fail(e, index, "expected an integer, found '" + t + "'");
    return v;
}

double ProblemFile::real(std::string_view key) const {
    const Entry& e = require(key);
    if (e.tokens.size() != 1) fail(e, std::string::npos, "'" + e.key + "' takes one number");
    return real(e, 0);
}

std::optional<double> ProblemFile::optional_real(std::string_view key) const {
    if (!has(key)) return std::nullopt;
    return real(key);
}

std::optional<long> ProblemFile::optional_integer(std::string_view key) const {
    const Entry* e = find(key);
    if (e == nullptr) return std::nullopt;
    if (e->tokens.size() != 1) fail(*e, std::string::npos, "'" + e->key + "' takes one integer");
    return integer(*e, 0);
}

std::string ProblemFile::word(std::string_view key) const {
    const Entry& e = require(key);
    if (e.tokens.size() != 1) fail(e, std::string::npos, "'" + e.key + "' takes one word");
    return e.tokens[0];
}

std::optional<std::string> ProblemFile::optional_word(std::string_view key) const {
    if (!has(key)) return std::nullopt;
    return word(key);
}

std::vector<std::complex<double>> ProblemFile::complex_list(const Entry& e) const {
    if (e.tokens.size() % 2 != 0) fail(e, e.tokens.size() - 1, "'" + e.key + "' needs re/im pairs");
    std::vector<std::complex<double>> out;
    out.reserve(e.tokens.size() / 2);
    for (std::size_t i = 0; i < e.tokens.size(); i += 2) out.emplace_back(real(e, i), real(e, i + 1));
    return out;
}

std::vector<std::complex<double>> ProblemFile::complex_list(std::string_view key) const {
    return complex_list(require(key));
}

}  // namespace hardy
