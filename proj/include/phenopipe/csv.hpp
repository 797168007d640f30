#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace phenopipe::csv {

/// Quotes a field when it contains a comma, quote, CR or LF (RFC 4180).
std::string escape(std::string_view field);

std::string join_row(const std::vector<std::string>& fields);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Parses a whole CSV document. Quoted fields may span multiple lines.
/// A trailing newline does not produce an empty record.
std::vector<std::vector<std::string>> parse(std::string_view content);

std::vector<std::vector<std::string>> read_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

} // namespace phenopipe::csv
