#pragma once

// Solution-program DSL: 34 theorem operators over four operand classes.
// A program is a flat token sequence; each operator token opens a step and
// the operand tokens after it fill that step.

#include <array>
#include <compare>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace geoprog::program {

enum class Operator {
  Get, Equal, Sum, Multiple, Ratio, Median, Gougu, Gsin, Gcos, Gtan,
  Sin_Law, Cos_Law, Iso_Tri_Ang, Proportion, Geo_Mean, Chord2_Ang,
  TanSec_Ang, Tria_BH_Area, Tria_SAS_Area, PRK_Perim, Para_Area,
  Rect_Area, Rhom_Area, Kite_Area, Trap_Area, Circle_R_Circum,
  Circle_D_Circum, Circle_R_Area, Circle_D_Area, ArcSeg_Area,
  Ngon_Angsum, RNgon_B_Area, RNgon_L_Area, RNgon_H_Area,
};

inline constexpr std::size_t kOperatorCount = 34;
inline constexpr int kMaxProblemIndex = 10;
inline constexpr int kMaxProcessIndex = 6;
inline constexpr std::array<double, 11> kConstants = {0.5, 2, 3, 4, 5, 6, 8, 60, 90, 180, 360};

/// Arity, slot roles and commutative slot groups of one operator. This table
/// is the single source of truth; the executor's formulas are written against
/// these slot orders.
struct OperatorSpec {
  Operator op;
  std::string_view name;
  std::vector<std::string_view> slots;  // for Sum: {"x", "t"}, x repeats
  bool variadic = false;                // Sum: >= 2 addends then the total
  std::vector<std::vector<int>> commutative;  // slot index groups
  std::string_view formula;             // human-readable theorem formula
  std::string_view note;                // why this slot order / formula
};

const OperatorSpec& spec(Operator op);
std::span<const OperatorSpec> all_operators();
std::optional<Operator> operator_from_name(std::string_view name);
std::string_view name(Operator op);

/// Minimum operand count (exact count unless variadic).
std::size_t arity(Operator op);
bool arity_ok(Operator op, std::size_t operand_count);

/// Commutative slot groups for a step with `operand_count` operands (the Sum
/// addend group depends on the count).
std::vector<std::vector<int>> commutative_groups(Operator op, std::size_t operand_count);

// --- operands ---------------------------------------------------------------

struct ProblemVar {
  int index;  // N0..N10
  auto operator<=>(const ProblemVar&) const = default;
};
struct ProcessVar {
  int index;  // V0..V6
  auto operator<=>(const ProcessVar&) const = default;
};
struct Argument {
  char letter;  // a..z
  auto operator<=>(const Argument&) const = default;
};
struct Constant {
  int slot;  // index into kConstants
  double value() const { return kConstants[static_cast<std::size_t>(slot)]; }
  auto operator<=>(const Constant&) const = default;
};

using Operand = std::variant<ProblemVar, ProcessVar, Argument, Constant>;

std::optional<Operand> operand_from_token(std::string_view token);
std::string operand_token(const Operand& o);
std::optional<Constant> constant_for(double value);

/// Normalization priority of operand classes: argument first, then process
/// variable, problem variable, constant.
int class_rank(const Operand& o);

struct Step {
  Operator op;
  std::vector<Operand> operands;
  bool operator==(const Step&) const = default;
};

/// Nonempty sequence of arity-checked steps.
class SolutionProgram {
 public:
  /// Throws EmptyProgram or ArityMismatch.
  explicit SolutionProgram(std::vector<Step> steps);

  const std::vector<Step>& steps() const { return steps_; }
  std::size_t size() const { return steps_.size(); }
  bool operator==(const SolutionProgram&) const = default;

 private:
  std::vector<Step> steps_;
};

/// Greedy segmentation. Throws UnknownToken, LeadingOperand, ArityMismatch,
/// EmptyProgram.
SolutionProgram parse_program(std::span<const std::string> tokens);
SolutionProgram parse_program(std::string_view text);  // whitespace separated

std::vector<std::string> serialize_program(const SolutionProgram& p);
std::string to_string(const SolutionProgram& p);  // tokens joined by spaces

/// Sorts every commutative slot group by (class rank, index). Idempotent.
Step normalize_step(const Step& step);
SolutionProgram normalize_program(const SolutionProgram& p);

// --- vocabulary check ---------------------------------------------------------

/// Decoder candidate set of one problem: every V and C token plus the N
/// indices and argument letters that occur in the problem.
struct CandidateVocab {
  std::set<int> problem_indices;
  std::set<char> arguments;

  bool contains(const Operand& o) const;
  std::vector<std::string> tokens() const;
  bool operator==(const CandidateVocab&) const = default;
};

struct Violation {
  enum class Kind { OutOfVocab, UndefinedProcessVariable };
  Kind kind;
  Operand operand;
  std::size_t step;
  bool operator==(const Violation&) const = default;
};

std::string to_string(const Violation& v);

/// Empty iff every operand is in `vocab` and every process variable first
/// appears in a step that can solve for it (anything but Get).
std::vector<Violation> validate_program(const SolutionProgram& p, const CandidateVocab& vocab);

}  // namespace geoprog::program
