#include "geoprog/clause.hpp"

#include <algorithm>
#include <set>

#include "geoprog/error.hpp"
#include "geoprog/symbolic.hpp"
#include "geoprog/text.hpp"

namespace geoprog::clause {

namespace {

constexpr std::string_view kCircle = "⊙";
constexpr std::string_view kPerp = "⊥";
constexpr std::string_view kPara = "∥";
constexpr std::string_view kAngle = "∠";
constexpr std::string_view kArc = "⌒";

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

[[noreturn]] void mismatch(std::string_view text, std::string_view why = "no template matches") {
  throw Error(ErrorCode::TemplateMismatch, std::string(why) + ": '" + std::string(text) + "'");
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// Whitespace-separated tokens with the clause glyphs split off on their own
// and ASCII aliases mapped to glyphs.
std::vector<std::string> clause_tokens(std::string_view s) {
  static constexpr std::string_view kGlyphs[] = {kCircle, kPerp, kPara, kAngle, kArc, "="};
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    if (cur == "circle") cur = kCircle;
    else if (cur == "perp") cur = kPerp;
    else if (cur == "para") cur = kPara;
    else if (cur == "angle") cur = kAngle;
    else if (cur == "arc") cur = kArc;
    out.push_back(std::move(cur));
    cur.clear();
  };
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == ' ' || s[i] == '\t') {
      flush();
      ++i;
      continue;
    }
    bool glyph = false;
    for (auto g : kGlyphs) {
      if (s.substr(i, g.size()) == g) {
        flush();
        out.emplace_back(g);
        i += g.size();
        glyph = true;
        break;
      }
    }
    if (!glyph) cur += s[i++];
  }
  flush();
  return out;
}

bool is_point_token(const std::string& t) { return t.size() == 1 && is_upper(t[0]); }

std::vector<PointLabel> point_list(std::string_view text, const std::vector<std::string>& toks, std::size_t from) {
  std::vector<PointLabel> pts;
  std::set<char> seen;
  for (std::size_t i = from; i < toks.size(); ++i) {
    if (!is_point_token(toks[i])) mismatch(text, "expected a point label");
    if (!seen.insert(toks[i][0]).second) {
      throw Error(ErrorCode::DuplicatePoint, std::string(1, toks[i][0]) + " in '" + std::string(text) + "'");
    }
    pts.emplace_back(toks[i][0]);
  }
  if (pts.size() < 2) mismatch(text, "need at least two points");
  return pts;
}

// Segment written as two adjacent point letters ("AB").
std::optional<Segment> segment_token(const std::string& t) {
  if (t.size() != 2 || !is_upper(t[0]) || !is_upper(t[1])) return std::nullopt;
  return make_segment(t[0], t[1]);
}

std::optional<Arc> arc_token(const std::string& t) {
  if (t.size() < 2 || t.size() > 3) return std::nullopt;
  if (!std::all_of(t.begin(), t.end(), is_upper)) return std::nullopt;
  return make_arc(t);
}

std::optional<LineRef> line_ref(const std::vector<std::string>& toks) {
  if (toks.size() == 1) {
    if (auto s = segment_token(toks[0])) return LineRef{*s};
  }
  if (toks.size() == 2 && toks[0] == "line" && toks[1].size() == 1 && is_lower(toks[1][0])) {
    return LineRef{NamedLine{LineLabel(toks[1][0])}};
  }
  return std::nullopt;
}

using ChainItem = std::variant<Segment, Arc /*length*/, AngleRef, std::pair<Arc, int> /*degree*/>;

std::optional<ChainItem> chain_item(const std::vector<std::string>& toks) {
  if (toks.size() == 1) {
    if (auto s = segment_token(toks[0])) return ChainItem{*s};
    return std::nullopt;
  }
  if (toks.empty() || (toks[0] != "l" && toks[0] != "m")) return std::nullopt;
  std::size_t k = 1;
  if (toks[0] == "m" && k < toks.size() && toks[k] == kAngle) {
    if (toks.size() != 3) return std::nullopt;
    const std::string& a = toks[2];
    if (a.size() == 3 && std::all_of(a.begin(), a.end(), is_upper)) return ChainItem{AngleRef{make_angle3(a[0], a[1], a[2])}};
    if (a.size() == 1 && is_upper(a[0])) return ChainItem{AngleRef{AngleAtVertex{PointLabel(a[0])}}};
    if (!a.empty() && std::all_of(a.begin(), a.end(), is_digit) && a.size() <= 6) {
      return ChainItem{AngleRef{AngleById{AngleId(std::stoi(a))}}};
    }
    return std::nullopt;
  }
  if (k < toks.size() && toks[k] == kArc) ++k;
  if (toks.size() != k + 1) return std::nullopt;
  auto arc = arc_token(toks[k]);
  if (!arc) return std::nullopt;
  if (toks[0] == "l") return ChainItem{*arc};
  return ChainItem{std::pair<Arc, int>{*arc, 0}};
}

std::vector<std::string> split_on(std::string_view s, std::string_view sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + sep.size();
  }
  return parts;
}

SemanticClause parse_chain(std::string_view text) {
  const auto parts = split_on(text, "=");
  std::vector<ChainItem> items;
  std::optional<std::string> value;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    auto item = chain_item(clause_tokens(parts[i]));
    if (item) {
      items.push_back(*item);
      continue;
    }
    if (i + 1 != parts.size() || parts[i].empty()) mismatch(text, "malformed chain item");
    try {
      symbolic::parse_expression(parts[i]);
    } catch (const Error&) {
      mismatch(text, "unparseable value expression");
    }
    value = parts[i];
  }
  if (items.empty()) mismatch(text, "chain without items");
  const std::size_t kind = items.front().index();
  for (const auto& it : items) {
    if (it.index() != kind) {
      throw Error(ErrorCode::MixedChainKinds, "'" + std::string(text) + "'");
    }
  }
  switch (kind) {
    case 0: {
      LengthChain c{{}, value};
      for (const auto& it : items) c.items.push_back(std::get<Segment>(it));
      return c;
    }
    case 1: {
      ArcLengthChain c{{}, value};
      for (const auto& it : items) c.items.push_back(std::get<Arc>(it));
      return c;
    }
    case 2: {
      AngleChain c{{}, value};
      for (const auto& it : items) c.items.push_back(std::get<AngleRef>(it));
      return c;
    }
    default: {
      ArcDegreeChain c{{}, value};
      for (const auto& it : items) c.items.push_back(std::get<std::pair<Arc, int>>(it).first);
      return c;
    }
  }
}

std::string points_text(const std::vector<PointLabel>& pts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += sep;
    out += pts[i].letter();
  }
  return out;
}

std::string line_ref_text(const LineRef& r) {
  if (const auto* s = std::get_if<Segment>(&r)) return {s->p1.letter(), s->p2.letter()};
  return std::string("line ") + std::get<NamedLine>(r).label.letter();
}

std::string angle_ref_text(const AngleRef& r) {
  return std::visit([](const auto& a) { return "m " + serialize_ref(GeomRef{a}); }, r);
}

template <typename Item, typename F>
std::string chain_text(const std::vector<Item>& items, const std::optional<std::string>& value, F&& item_text) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += " = ";
    out += item_text(items[i]);
  }
  if (value) out += " = " + *value;
  return out;
}

}  // namespace

PointLabel::PointLabel(char letter) : letter_(letter) {
  if (!is_upper(letter)) throw Error(ErrorCode::InvalidLabel, "point label must be A-Z, got '" + std::string(1, letter) + "'");
}

LineLabel::LineLabel(char letter) : letter_(letter) {
  if (!is_lower(letter)) throw Error(ErrorCode::InvalidLabel, "line label must be a-z, got '" + std::string(1, letter) + "'");
}

AngleId::AngleId(int number) : number_(number) {
  if (number < 1) throw Error(ErrorCode::InvalidLabel, "angle id must be positive");
}

Segment make_segment(char a, char b) {
  if (a == b) throw Error(ErrorCode::DuplicatePoint, std::string("segment ") + a + b);
  return Segment{PointLabel(a), PointLabel(b)};
}

Arc make_arc(std::string_view points) {
  if (points.size() < 2 || points.size() > 3) throw Error(ErrorCode::TemplateMismatch, "arc needs 2-3 points");
  Arc arc;
  std::set<char> seen;
  for (char c : points) {
    if (!seen.insert(c).second) throw Error(ErrorCode::DuplicatePoint, "arc " + std::string(points));
    arc.points.emplace_back(c);
  }
  return arc;
}

Angle3 make_angle3(char a, char vertex, char c) {
  if (a == vertex || a == c || vertex == c) {
    throw Error(ErrorCode::DuplicatePoint, std::string("angle ") + a + vertex + c);
  }
  return Angle3{PointLabel(a), PointLabel(vertex), PointLabel(c)};
}

const std::optional<std::string>* value_of(const SemanticClause& clause) {
  return std::visit(
      [](const auto& c) -> const std::optional<std::string>* {
        if constexpr (requires { c.value; }) {
          return &c.value;
        } else {
          return nullptr;
        }
      },
      clause);
}

std::optional<std::string>* value_of(SemanticClause& clause) {
  return const_cast<std::optional<std::string>*>(value_of(static_cast<const SemanticClause&>(clause)));
}

StructuralClause parse_structural(std::string_view text) {
  const auto toks = clause_tokens(text);
  if (toks.empty()) mismatch(text);
  if (toks[0] == "line") {
    if (toks.size() >= 3 && toks[2] == "lieson") {
      if (toks[1].size() != 1 || !is_lower(toks[1][0])) mismatch(text, "expected a line label");
      return NamedLineThrough{LineLabel(toks[1][0]), point_list(text, toks, 3)};
    }
    return LineThrough{point_list(text, toks, 1)};
  }
  if (toks[0] == kCircle) {
    if (toks.size() < 3 || !is_point_token(toks[1]) || toks[2] != "lieson") mismatch(text);
    CircleThrough c{PointLabel(toks[1][0]), point_list(text, toks, 3)};
    for (const auto& p : c.points) {
      if (p == c.center) throw Error(ErrorCode::DuplicatePoint, "center on its own circle: '" + std::string(text) + "'");
    }
    return c;
  }
  mismatch(text);
}

SemanticClause parse_semantic(std::string_view text) {
  const auto toks = clause_tokens(text);
  const auto has = [&](std::string_view g) { return std::find(toks.begin(), toks.end(), g) != toks.end(); };
  if (has(kPerp)) {
    const auto perp = std::find(toks.begin(), toks.end(), kPerp);
    const auto on = std::find(perp, toks.end(), "on");
    if (on == toks.end() || on + 2 != toks.end() || !is_point_token(*(on + 1))) mismatch(text);
    auto a = line_ref({toks.begin(), perp});
    auto b = line_ref({perp + 1, on});
    if (!a || !b) mismatch(text, "expected a segment or named line");
    return Perpendicular{*a, *b, PointLabel((*(on + 1))[0])};
  }
  if (has(kPara)) {
    Parallel p;
    std::vector<std::string> cur;
    auto take = [&] {
      auto r = line_ref(cur);
      if (!r) mismatch(text, "expected a segment or named line");
      p.items.push_back(*r);
      cur.clear();
    };
    for (const auto& t : toks) {
      if (t == kPara) {
        take();
      } else {
        cur.push_back(t);
      }
    }
    take();
    return p;
  }
  if (text.find('=') != std::string_view::npos) return parse_chain(text);
  mismatch(text);
}

std::string serialize_ref(const GeomRef& ref) {
  return std::visit(
      [](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Segment>) {
          return {r.p1.letter(), r.p2.letter()};
        } else if constexpr (std::is_same_v<T, Arc>) {
          return points_text(r.points, "");
        } else if constexpr (std::is_same_v<T, Angle3>) {
          return std::string(kAngle) + r.p1.letter() + r.vertex.letter() + r.p3.letter();
        } else if constexpr (std::is_same_v<T, AngleAtVertex>) {
          return std::string(kAngle) + r.vertex.letter();
        } else if constexpr (std::is_same_v<T, AngleById>) {
          return std::string(kAngle) + std::to_string(r.id.number());
        } else {
          return std::string("line ") + r.label.letter();
        }
      },
      ref);
}

std::string serialize_clause(const StructuralClause& clause) {
  return std::visit(
      [](const auto& c) -> std::string {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, LineThrough>) {
          return "line " + points_text(c.points, " ");
        } else if constexpr (std::is_same_v<T, NamedLineThrough>) {
          return std::string("line ") + c.label.letter() + " lieson " + points_text(c.points, " ");
        } else {
          return std::string(kCircle) + c.center.letter() + " lieson " + points_text(c.points, " ");
        }
      },
      clause);
}

std::string serialize_clause(const SemanticClause& clause) {
  return std::visit(
      [](const auto& c) -> std::string {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, LengthChain>) {
          return chain_text(c.items, c.value, [](const Segment& s) { return serialize_ref(GeomRef{s}); });
        } else if constexpr (std::is_same_v<T, ArcLengthChain>) {
          return chain_text(c.items, c.value, [](const Arc& a) { return "l " + serialize_ref(GeomRef{a}); });
        } else if constexpr (std::is_same_v<T, AngleChain>) {
          return chain_text(c.items, c.value, angle_ref_text);
        } else if constexpr (std::is_same_v<T, ArcDegreeChain>) {
          return chain_text(c.items, c.value, [](const Arc& a) { return "m " + serialize_ref(GeomRef{a}); });
        } else if constexpr (std::is_same_v<T, Parallel>) {
          std::string out;
          for (std::size_t i = 0; i < c.items.size(); ++i) {
            if (i) out += " " + std::string(kPara) + " ";
            out += line_ref_text(c.items[i]);
          }
          return out;
        } else {
          return line_ref_text(c.a) + " " + std::string(kPerp) + " " + line_ref_text(c.b) + " on " + c.at.letter();
        }
      },
      clause);
}

std::string normalize_whitespace(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      space = !out.empty();
    } else {
      if (space) out += ' ';
      space = false;
      out += c;
    }
  }
  return out;
}

bool is_numeric_value(std::string_view value) { return std::any_of(value.begin(), value.end(), is_digit); }

std::vector<ProblemVariable> assign_problem_variables(const std::vector<SemanticClause>& semantic,
                                                      std::string_view problem_text) {
  std::vector<ProblemVariable> vars;
  auto push = [&](std::string text, VariableSource src) {
    if (static_cast<int>(vars.size()) >= kMaxProblemVariables) {
      throw Error(ErrorCode::TooManyVariables, "more than " + std::to_string(kMaxProblemVariables) + " problem variables");
    }
    vars.push_back({static_cast<int>(vars.size()), std::move(text), src});
  };
  for (std::size_t i = 0; i < semantic.size(); ++i) {
    const auto* v = value_of(semantic[i]);
    if (v && *v && is_numeric_value(**v)) {
      push(**v, {VariableSource::Section::Semantic, static_cast<int>(i), 0});
    }
  }
  for (const auto& piece : text::lex(problem_text)) {
    if (piece.kind == text::Piece::Kind::Number) push(piece.text, {VariableSource::Section::Text, -1, piece.offset});
  }
  return vars;
}

}  // namespace geoprog::clause
