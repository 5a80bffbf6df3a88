#include "geoprog/text.hpp"

namespace geoprog::text {

namespace {

constexpr std::string_view kAngle = "∠";
constexpr std::string_view kArc = "⌒";

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_alpha(char c) { return is_upper(c) || is_lower(c); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

}  // namespace

std::vector<Piece> lex(std::string_view s) {
  using K = Piece::Kind;
  std::vector<Piece> out;
  auto last_solid = [&]() -> const Piece* {
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
      if (it->kind != K::Space) return &*it;
    }
    return nullptr;
  };
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    std::size_t j = i;
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      while (j < s.size() && (s[j] == ' ' || s[j] == '\t' || s[j] == '\n' || s[j] == '\r')) ++j;
      out.push_back({K::Space, std::string(s.substr(i, j - i)), i});
    } else if (is_digit(c)) {
      while (j < s.size() && is_digit(s[j])) ++j;
      const Piece* prev = last_solid();
      const bool after_angle = prev && prev->text == kAngle;
      if (!after_angle && j + 1 < s.size() && s[j] == '.' && is_digit(s[j + 1])) {
        ++j;
        while (j < s.size() && is_digit(s[j])) ++j;
      }
      out.push_back({after_angle ? K::AngleId : K::Number, std::string(s.substr(i, j - i)), i});
    } else if (is_alpha(c)) {
      while (j < s.size() && is_alpha(s[j])) ++j;
      const std::string_view word = s.substr(i, j - i);
      bool all_upper = true;
      for (char w : word) all_upper = all_upper && is_upper(w);
      K kind = K::Word;
      if (all_upper) {
        kind = K::PointRun;
      } else if (word.size() == 1) {
        kind = K::Argument;
        if (word == "m" || word == "l") {
          std::size_t k = j;
          while (k < s.size() && s[k] == ' ') ++k;
          const std::string_view rest = s.substr(k);
          if (rest.starts_with(kAngle) || rest.starts_with(kArc) || (!rest.empty() && is_upper(rest[0]))) {
            kind = K::Word;
          }
        }
      }
      out.push_back({kind, std::string(word), i});
    } else {
      j = i + std::min(utf8_length(static_cast<unsigned char>(c)), s.size() - i);
      out.push_back({K::Symbol, std::string(s.substr(i, j - i)), i});
    }
    i = j;
  }
  return out;
}

std::string join(const std::vector<Piece>& pieces) {
  std::string out;
  for (const auto& p : pieces) out += p.text;
  return out;
}

}  // namespace geoprog::text
