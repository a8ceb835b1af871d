#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mimocap {

/// Shortest round-trip decimal representation of x (printf %.17g trimmed);
/// deterministic across runs so identical configs give byte-identical files.
std::string format_double(double x);

/// Minimal CSV emitter: comment lines, one header row, LF endings, `.`
/// decimal separator.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void comment(const std::string& text);
    void header(const std::vector<std::string>& names);
    void row(const std::vector<std::string>& fields);

private:
    std::ostream& out_;
};

}  // namespace mimocap
