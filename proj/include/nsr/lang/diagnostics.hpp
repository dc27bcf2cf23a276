#pragma once

#include <optional>
#include <string>
#include <vector>

namespace nsr::lang {

// Parse error with a position into the source text.
struct ParseDiagnostic {
    int line = 1;    // 1-based
    int column = 1;  // 1-based
    std::string expected;
    std::string found;

    std::string message() const;
};

template <typename T>
struct ParseResult {
    std::optional<T> value;
    std::vector<ParseDiagnostic> diagnostics;

    bool ok() const { return value.has_value() && diagnostics.empty(); }
    std::string first_message() const {
        return diagnostics.empty() ? std::string{} : diagnostics.front().message();
    }
    std::string all_messages() const {
        std::string out;
        for (const auto& d : diagnostics) {
            if (!out.empty()) out += "\n";
            out += d.message();
        }
        return out;
    }
};

}  // namespace nsr::lang
