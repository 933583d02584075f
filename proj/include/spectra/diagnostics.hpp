#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace spectra {

/// Location of a syntax node or token. Offsets are byte offsets into the
/// source text; line and column are 1-based and refer to `begin`.
struct Span {
    std::shared_ptr<const std::string> file;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::uint32_t line = 0;
    std::uint32_t column = 0;

    const std::string& file_name() const;
    bool valid() const { return line != 0; }
};

enum class Severity { Error, Warning, Note };

struct Diagnostic {
    Span span;
    Severity severity = Severity::Error;
    std::string message;
    // Only filled by the parser on syntax errors.
    std::vector<std::string> expected;
};

/// "file:line:col: severity: message"
std::string format(const Diagnostic& d);
std::string format(const std::vector<Diagnostic>& ds);

bool has_errors(const std::vector<Diagnostic>& ds);

/// Thrown by the front end (parser, import resolution, checker) when a
/// specification is rejected. Carries every diagnostic found, not just the
/// first.
class SpecError : public std::runtime_error {
public:
    explicit SpecError(std::vector<Diagnostic> diagnostics);

    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

} // namespace spectra
