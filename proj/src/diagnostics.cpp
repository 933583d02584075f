#include "spectra/diagnostics.hpp"

#include <algorithm>
#include <sstream>

namespace spectra {

const std::string& Span::file_name() const {
    static const std::string unknown = "<input>";
    return file ? *file : unknown;
}

namespace {

const char* severity_name(Severity s) {
    switch (s) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Note: return "note";
    }
    return "error";
}

} // namespace

std::string format(const Diagnostic& d) {
    std::ostringstream out;
    out << d.span.file_name() << ':' << d.span.line << ':' << d.span.column << ": "
        << severity_name(d.severity) << ": " << d.message;
    if (!d.expected.empty()) {
        out << " (expected ";
        for (std::size_t i = 0; i < d.expected.size(); ++i) {
            if (i > 0)
                out << (i + 1 == d.expected.size() ? " or " : ", ");
            out << d.expected[i];
        }
        out << ')';
    }
    return out.str();
}

std::string format(const std::vector<Diagnostic>& ds) {
    std::string out;
    for (const auto& d : ds) {
        out += format(d);
        out += '\n';
    }
    return out;
}

bool has_errors(const std::vector<Diagnostic>& ds) {
    return std::any_of(ds.begin(), ds.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

SpecError::SpecError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(diagnostics.empty() ? std::string("specification rejected")
                                             : format(diagnostics.front())),
      diagnostics_(std::move(diagnostics)) {}

} // namespace spectra
