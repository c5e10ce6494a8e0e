#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pragproof/n3/term.hpp"

namespace pragproof::n3 {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Parses the supported N3 subset and desugars every shortcut.
///
/// Blank nodes written as `[]` or `[p o]` become existentials named `bN`, numbered
/// in order of appearance and skipping any label the document already uses.
/// Relative IRIs are kept as written unless a base is given.
Document parse_document(std::string_view text, std::optional<std::string> base = std::nullopt);

/// Convenience wrapper returning only the body.
Formula parse_formula(std::string_view text);

}  // namespace pragproof::n3
