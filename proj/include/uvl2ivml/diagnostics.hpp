#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace uvl2ivml {

struct SourceLoc {
    int line = 0;   // 1-based
    int column = 0; // 1-based
};

enum class Severity { error, warning };

/// One located message. Formats as "file:line:col: severity: message",
/// the shape build pipelines and editors already understand.
struct Diagnostic {
    Severity severity = Severity::error;
    SourceLoc loc;
    std::string message;
    std::string source_name;

    std::string format() const {
        std::ostringstream os;
        os << (source_name.empty() ? "<input>" : source_name) << ':' << loc.line << ':'
           << loc.column << ": " << (severity == Severity::error ? "error" : "warning") << ": "
           << message;
        return os.str();
    }
};

/// Thrown by the parsers. Always carries a located diagnostic; parsing
/// never fails without a position.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(Diagnostic diag)
        : std::runtime_error(diag.format()), diag_(std::move(diag)) {}

    const Diagnostic& diagnostic() const { return diag_; }

private:
    Diagnostic diag_;
};

} // namespace uvl2ivml
