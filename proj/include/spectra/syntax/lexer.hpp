#pragma once

#include "spectra/syntax/token.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace spectra::syntax {

/// Splits Spectra source text into tokens. Line comments (`//`) and block
/// comments (`/* */`) are skipped. The returned list has no End sentinel, so
/// empty input yields an empty list.
///
/// Throws SpecError on the first unrecognized character or unterminated
/// string/comment.
std::vector<Token> tokenize(std::string_view text, const std::string& file_name = "<input>");

} // namespace spectra::syntax
