#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hardy/errors.hpp"

namespace hardy {

/// Malformed problem file; the message carries source:line:column.
class ParseError : public Error {
public:
    ParseError(const std::string& source, int line, int column, const std::string& what)
        : Error(ErrorCode::InvalidInput,
                source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}
    [[nodiscard]] int line() const noexcept { return line_; }
    [[nodiscard]] int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// Versioned line-oriented problem description:
///
///     hardy-problem 1
///     kind feasible
///     points 0 0  0.5 0      # re/im pairs
///
/// Every line is `key token...`; `#` starts a comment. Keys may repeat only where
/// the format uses one line per item (direction, pair, point_set, row, subspace).
class ProblemFile {
public:
    static constexpr int kVersion = 1;

    struct Entry {
        std::string key;
        std::vector<std::string> tokens;
        std::vector<int> columns;  // 1-based column of each token
        int line = 0;
        int key_column = 1;
    };

    static ProblemFile parse(std::string_view text, std::string source);
    static ProblemFile load(const std::string& path);

    [[nodiscard]] int version() const noexcept { return version_; }
    [[nodiscard]] const std::string& kind() const noexcept { return kind_; }
    [[nodiscard]] const std::string& source() const noexcept { return source_; }
    [[nodiscard]] const std::vector<Entry>& entries() const noexcept { return entries_; }

    /// Rejects keys outside `allowed` and repeats of keys not in `repeatable`.
    void check_keys(const std::vector<std::string_view>& allowed,
                    const std::vector<std::string_view>& repeatable = {}) const;

    [[nodiscard]] bool has(std::string_view key) const;
    [[nodiscard]] const Entry* find(std::string_view key) const;
    [[nodiscard]] const Entry& require(std::string_view key) const;
    [[nodiscard]] std::vector<const Entry*> all(std::string_view key) const;

    [[nodiscard]] double real(const Entry& e, std::size_t index) const;
    [[nodiscard]] long integer(const Entry& e, std::size_t index) const;
    [[nodiscard]] double real(std::string_view key) const;
    [[nodiscard]] std::optional<double> optional_real(std::string_view key) const;
    [[nodiscard]] std::optional<long> optional_integer(std::string_view key) const;
    [[nodiscard]] std::string word(std::string_view key) const;
    [[nodiscard]] std::optional<std::string> optional_word(std::string_view key) const;
    /// Tokens of the entry read as re/im pairs.
    [[nodiscard]] std::vector<std::complex<double>> complex_list(const Entry& e) const;
    [[nodiscard]] std::vector<std::complex<double>> complex_list(std::string_view key) const;

    /// Throws ParseError at the given token (or at the key when index is npos).
    [[noreturn]] void fail(const Entry& e, std::size_t index, const std::string& what) const;
    [[noreturn]] void fail_missing(std::string_view key) const;

private:
    std::string source_;
    int version_ = 0;
    std::string kind_;
    std::vector<Entry> entries_;
    int last_line_ = 1;
};

}  // namespace hardy
