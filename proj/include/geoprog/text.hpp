#pragma once

// Lexer for the free-text problem statement ("Find BD.", "Find m ∠1 if x = 4").

#include <string>
#include <string_view>
#include <vector>

namespace geoprog::text {

struct Piece {
  enum class Kind {
    Space,
    Word,       // general word ("Find", "area", "sin")
    PointRun,   // run of uppercase point letters ("BD")
    Argument,   // single lowercase unknown ("x")
    Number,     // numeric literal ("12", "2.5")
    AngleId,    // digits right after ∠ ("1" in "∠1")
    Symbol,     // glyphs and punctuation
  };
  Kind kind;
  std::string text;
  std::size_t offset;
};

/// Splits problem text into pieces whose concatenation is the input.
/// A lone "m" or "l" directly before ∠ or a point run is a measure prefix
/// (Word), not an argument.
std::vector<Piece> lex(std::string_view text);

std::string join(const std::vector<Piece>& pieces);

}  // namespace geoprog::text
