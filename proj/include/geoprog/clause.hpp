#pragma once

// Diagram clauses: three structural templates (points on lines and circles)
// and six semantic templates (lengths, arcs, angles, parallel, perpendicular).
//
// Canonical text uses the glyphs ⊙ ⊥ ∥ ∠ and the prefixes "m" (measure) and
// "l" (arc length). On input the ASCII aliases "circle", "perp", "para",
// "angle" and "arc" are accepted as well; see docs/clause_grammar.md.

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace geoprog::clause {

/// Single uppercase point name, A-Z.
class PointLabel {
 public:
  explicit PointLabel(char letter);
  char letter() const { return letter_; }
  auto operator<=>(const PointLabel&) const = default;

 private:
  char letter_;
};

/// Single lowercase line name, a-z.
class LineLabel {
 public:
  explicit LineLabel(char letter);
  char letter() const { return letter_; }
  auto operator<=>(const LineLabel&) const = default;

 private:
  char letter_;
};

/// Numbered angle (∠1, ∠2, ...).
class AngleId {
 public:
  explicit AngleId(int number);
  int number() const { return number_; }
  auto operator<=>(const AngleId&) const = default;

 private:
  int number_;
};

struct Segment {
  PointLabel p1, p2;
  auto operator<=>(const Segment&) const = default;
};
struct Arc {
  std::vector<PointLabel> points;  // 2 or 3
  auto operator<=>(const Arc&) const = default;
};
struct Angle3 {
  PointLabel p1, vertex, p3;
  auto operator<=>(const Angle3&) const = default;
};
struct AngleAtVertex {
  PointLabel vertex;
  auto operator<=>(const AngleAtVertex&) const = default;
};
struct AngleById {
  AngleId id;
  auto operator<=>(const AngleById&) const = default;
};
struct NamedLine {
  LineLabel label;
  auto operator<=>(const NamedLine&) const = default;
};

using GeomRef = std::variant<Segment, Arc, Angle3, AngleAtVertex, AngleById, NamedLine>;
using AngleRef = std::variant<Angle3, AngleAtVertex, AngleById>;
using LineRef = std::variant<Segment, NamedLine>;

// Validating constructors for the composite references.
Segment make_segment(char a, char b);
Arc make_arc(std::string_view points);
Angle3 make_angle3(char a, char vertex, char c);

// --- structural ---------------------------------------------------------------

struct LineThrough {
  std::vector<PointLabel> points;
  bool operator==(const LineThrough&) const = default;
};
struct NamedLineThrough {
  LineLabel label;
  std::vector<PointLabel> points;
  bool operator==(const NamedLineThrough&) const = default;
};
struct CircleThrough {
  PointLabel center;
  std::vector<PointLabel> points;
  bool operator==(const CircleThrough&) const = default;
};

using StructuralClause = std::variant<LineThrough, NamedLineThrough, CircleThrough>;

// --- semantic -----------------------------------------------------------------

/// Value expressions are kept verbatim; only the symbolic module interprets them.
struct LengthChain {
  std::vector<Segment> items;
  std::optional<std::string> value;
  bool operator==(const LengthChain&) const = default;
};
struct ArcLengthChain {
  std::vector<Arc> items;
  std::optional<std::string> value;
  bool operator==(const ArcLengthChain&) const = default;
};
struct AngleChain {
  std::vector<AngleRef> items;
  std::optional<std::string> value;
  bool operator==(const AngleChain&) const = default;
};
struct ArcDegreeChain {
  std::vector<Arc> items;
  std::optional<std::string> value;
  bool operator==(const ArcDegreeChain&) const = default;
};
struct Parallel {
  std::vector<LineRef> items;
  bool operator==(const Parallel&) const = default;
};
struct Perpendicular {
  LineRef a;
  LineRef b;
  PointLabel at;
  bool operator==(const Perpendicular&) const = default;
};

using SemanticClause =
    std::variant<LengthChain, ArcLengthChain, AngleChain, ArcDegreeChain, Parallel, Perpendicular>;

/// Trailing value expression of a chain clause, if any.
const std::optional<std::string>* value_of(const SemanticClause& clause);
std::optional<std::string>* value_of(SemanticClause& clause);

StructuralClause parse_structural(std::string_view text);
SemanticClause parse_semantic(std::string_view text);

std::string serialize_clause(const StructuralClause& clause);
std::string serialize_clause(const SemanticClause& clause);
std::string serialize_ref(const GeomRef& ref);

/// Collapses runs of whitespace to single spaces and trims both ends.
std::string normalize_whitespace(std::string_view text);

// --- problem variables ------------------------------------------------------

inline constexpr int kMaxProblemVariables = 11;

struct VariableSource {
  enum class Section { Semantic, Text };
  Section section;
  int clause = -1;        // semantic clause index, -1 for text
  std::size_t offset = 0; // byte offset of the literal inside the problem text
  auto operator<=>(const VariableSource&) const = default;
};

struct ProblemVariable {
  int index;          // N<index>
  std::string text;   // expression text
  VariableSource source;
  bool operator==(const ProblemVariable&) const = default;
};

/// True when a value expression is a problem variable: it contains at least
/// one digit ("30", "3x+y", "5π"); pure argument values like "x" are not.
bool is_numeric_value(std::string_view value);

/// N0, N1, ... in appearance order: semantic clause values first, then the
/// numeric literals of the problem text. Throws TooManyVariables past N10.
std::vector<ProblemVariable> assign_problem_variables(const std::vector<SemanticClause>& semantic,
                                                      std::string_view problem_text);

}  // namespace geoprog::clause
