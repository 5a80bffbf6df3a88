#include "geoprog/augment.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "geoprog/symbolic.hpp"
#include "geoprog/text.hpp"

namespace geoprog::augment {

using namespace clause;

namespace {

// Applies `pf` to every point label and `af` to every numbered angle.
template <typename PF, typename AF>
struct RefMapper {
  PF pf;
  AF af;

  PointLabel operator()(PointLabel p) const { return pf(p); }
  Segment operator()(const Segment& s) const { return {pf(s.p1), pf(s.p2)}; }
  Arc operator()(const Arc& a) const {
    Arc out;
    for (auto p : a.points) out.points.push_back(pf(p));
    return out;
  }
  Angle3 operator()(const Angle3& a) const { return {pf(a.p1), pf(a.vertex), pf(a.p3)}; }
  AngleAtVertex operator()(const AngleAtVertex& a) const { return {pf(a.vertex)}; }
  AngleById operator()(const AngleById& a) const { return {af(a.id)}; }
  NamedLine operator()(const NamedLine& l) const { return l; }

  std::vector<PointLabel> points(const std::vector<PointLabel>& ps) const {
    std::vector<PointLabel> out;
    for (auto p : ps) out.push_back(pf(p));
    return out;
  }
  AngleRef angle(const AngleRef& r) const {
    return std::visit([&](const auto& x) -> AngleRef { return (*this)(x); }, r);
  }
  LineRef line(const LineRef& r) const {
    return std::visit([&](const auto& x) -> LineRef { return (*this)(x); }, r);
  }

  StructuralClause structural(const StructuralClause& c) const {
    return std::visit(
        [&](const auto& x) -> StructuralClause {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, LineThrough>) {
            return LineThrough{points(x.points)};
          } else if constexpr (std::is_same_v<T, NamedLineThrough>) {
            return NamedLineThrough{x.label, points(x.points)};
          } else {
            return CircleThrough{pf(x.center), points(x.points)};
          }
        },
        c);
  }

  SemanticClause semantic(const SemanticClause& c) const {
    return std::visit(
        [&](const auto& x) -> SemanticClause {
          using T = std::decay_t<decltype(x)>;
          T out = x;
          if constexpr (std::is_same_v<T, Perpendicular>) {
            out.a = line(x.a);
            out.b = line(x.b);
            out.at = pf(x.at);
          } else if constexpr (std::is_same_v<T, Parallel>) {
            for (auto& it : out.items) it = line(it);
          } else if constexpr (std::is_same_v<T, AngleChain>) {
            for (auto& it : out.items) it = angle(it);
          } else {
            for (auto& it : out.items) it = (*this)(it);
          }
          return out;
        },
        c);
  }
};

template <typename PF, typename AF>
RefMapper<PF, AF> mapper(PF pf, AF af) {
  return {pf, af};
}

struct Inventory {
  std::set<char> points;
  std::set<int> angle_ids;
  std::set<char> arguments;        // letters that get renamed
  std::set<char> reserved_letters; // lowercase letters that must stay as they are
};

// Letters that can start a function name or π when written next to another
// argument ("p" + "i" reads as pi), plus the measure prefixes.
constexpr std::string_view kNeverArgument = "clmpst";

void collect_expression_arguments(const std::string& expr, std::set<char>& out) {
  for (const auto& tok : symbolic::lex_expression(expr)) {
    if (tok.kind == symbolic::ExprToken::Kind::Argument) out.insert(tok.text[0]);
  }
}

Inventory inventory(const GeometryProblem& prob) {
  Inventory inv;
  auto pf = [&](PointLabel p) {
    inv.points.insert(p.letter());
    return p;
  };
  auto af = [&](AngleId a) {
    inv.angle_ids.insert(a.number());
    return a;
  };
  const auto m = mapper(pf, af);
  for (const auto& c : prob.structural) {
    m.structural(c);
    if (const auto* n = std::get_if<NamedLineThrough>(&c)) inv.reserved_letters.insert(n->label.letter());
  }
  for (const auto& c : prob.semantic) {
    m.semantic(c);
    if (const auto* v = value_of(c); v && *v) collect_expression_arguments(**v, inv.arguments);
    auto note_line = [&](const LineRef& r) {
      if (const auto* n = std::get_if<NamedLine>(&r)) inv.reserved_letters.insert(n->label.letter());
    };
    if (const auto* p = std::get_if<Perpendicular>(&c)) {
      note_line(p->a);
      note_line(p->b);
    } else if (const auto* q = std::get_if<Parallel>(&c)) {
      for (const auto& r : q->items) note_line(r);
    }
  }
  if (prob.program) {
    for (const auto& step : prob.program->steps()) {
      for (const auto& o : step.operands) {
        if (const auto* a = std::get_if<program::Argument>(&o)) inv.arguments.insert(a->letter);
      }
    }
  }
  std::set<char> text_arguments;
  for (const auto& piece : text::lex(prob.problem_text)) {
    using K = text::Piece::Kind;
    if (piece.kind == K::PointRun) {
      for (char c : piece.text) inv.points.insert(c);
    } else if (piece.kind == K::AngleId) {
      inv.angle_ids.insert(std::stoi(piece.text));
    } else if (piece.kind == K::Argument) {
      text_arguments.insert(piece.text[0]);
    }
  }
  // Lone letters that only occur in the prose ("a circle") are not unknowns.
  for (char c : text_arguments) {
    if (!inv.arguments.count(c)) inv.reserved_letters.insert(c);
  }
  for (char c : kNeverArgument) inv.reserved_letters.insert(c);
  return inv;
}

template <typename T>
std::map<T, T> sample_injection(const std::set<T>& domain, std::vector<T> pool, Rng& rng) {
  rng.shuffle(pool);
  std::map<T, T> out;
  std::size_t i = 0;
  for (const auto& d : domain) out[d] = pool[i++];
  return out;
}

template <typename T>
std::map<T, T> invert(const std::map<T, T>& m) {
  std::map<T, T> out;
  for (const auto& [k, v] : m) out[v] = k;
  return out;
}

template <typename T>
T lookup(const std::map<T, T>& m, T key) {
  auto it = m.find(key);
  return it == m.end() ? key : it->second;
}

std::string rename_text(const std::string& s, const Renaming& r) {
  using K = text::Piece::Kind;
  auto pieces = text::lex(s);
  for (auto& piece : pieces) {
    if (piece.kind == K::PointRun) {
      for (char& c : piece.text) c = lookup(r.points, c);
    } else if (piece.kind == K::AngleId) {
      piece.text = std::to_string(lookup(r.angle_ids, std::stoi(piece.text)));
    } else if (piece.kind == K::Argument) {
      piece.text[0] = lookup(r.arguments, piece.text[0]);
    }
  }
  return text::join(pieces);
}

template <typename T>
void maybe_reverse(std::vector<T>& v, Rng& rng) {
  if (rng.bernoulli(0.5)) std::reverse(v.begin(), v.end());
}

}  // namespace

std::string_view name(Strategy s) {
  switch (s) {
    case Strategy::TokenReplace: return "token_replace";
    case Strategy::ConnectionRotate: return "connection_rotate";
    case Strategy::ReprTranspose: return "repr_transpose";
    case Strategy::ClauseShuffle: return "clause_shuffle";
  }
  return "?";
}

Renaming Renaming::inverse() const { return {invert(points), invert(angle_ids), invert(arguments)}; }

GeometryProblem apply_renaming(const GeometryProblem& prob, const Renaming& r) {
  GeometryProblem out = prob;
  const auto m = mapper([&](PointLabel p) { return PointLabel(lookup(r.points, p.letter())); },
                        [&](AngleId a) { return AngleId(lookup(r.angle_ids, a.number())); });
  for (auto& c : out.structural) c = m.structural(c);
  for (auto& c : out.semantic) {
    c = m.semantic(c);
    if (auto* v = value_of(c); v && *v) **v = symbolic::rename_arguments(**v, r.arguments);
  }
  out.problem_text = rename_text(prob.problem_text, r);
  if (prob.program && !r.arguments.empty()) {
    auto steps = prob.program->steps();
    for (auto& step : steps) {
      for (auto& o : step.operands) {
        if (auto* a = std::get_if<program::Argument>(&o)) a->letter = lookup(r.arguments, a->letter);
      }
    }
    out.program = program::SolutionProgram(std::move(steps));
  }
  out.refresh_variables();
  return out;
}

Renaming sample_renaming(const GeometryProblem& prob, Rng& rng) {
  const Inventory inv = inventory(prob);
  Renaming r;

  std::vector<char> letters;
  for (char c = 'A'; c <= 'Z'; ++c) letters.push_back(c);
  r.points = sample_injection(inv.points, letters, rng);

  if (!inv.angle_ids.empty()) {
    const int top = std::max(*inv.angle_ids.rbegin(), 9);
    std::vector<int> ids;
    for (int i = 1; i <= top; ++i) ids.push_back(i);
    r.angle_ids = sample_injection(inv.angle_ids, ids, rng);
  }

  std::vector<char> pool;
  for (char c = 'a'; c <= 'z'; ++c) {
    if (!inv.reserved_letters.count(c)) pool.push_back(c);
  }
  if (pool.size() >= inv.arguments.size()) r.arguments = sample_injection(inv.arguments, pool, rng);
  return r;
}

GeometryProblem token_replace(const GeometryProblem& prob, Rng& rng) {
  return apply_renaming(prob, sample_renaming(prob, rng));
}

GeometryProblem connection_rotate(const GeometryProblem& prob, Rng& rng) {
  GeometryProblem out = prob;
  for (auto& c : out.structural) {
    if (auto* l = std::get_if<LineThrough>(&c)) {
      maybe_reverse(l->points, rng);
    } else if (auto* n = std::get_if<NamedLineThrough>(&c)) {
      maybe_reverse(n->points, rng);
    } else if (auto* o = std::get_if<CircleThrough>(&c); o && !o->points.empty()) {
      const auto k = static_cast<std::ptrdiff_t>(rng.below(o->points.size()));
      std::rotate(o->points.begin(), o->points.begin() + k, o->points.end());
      maybe_reverse(o->points, rng);
    }
  }
  return out;
}

GeometryProblem repr_transpose(const GeometryProblem& prob, Rng& rng) {
  GeometryProblem out = prob;
  auto seg = [&](Segment& s) {
    if (rng.bernoulli(0.5)) std::swap(s.p1, s.p2);
  };
  auto line = [&](LineRef& r) {
    if (auto* s = std::get_if<Segment>(&r)) seg(*s);
  };
  for (auto& c : out.semantic) {
    std::visit(
        [&](auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, LengthChain>) {
            for (auto& s : x.items) seg(s);
          } else if constexpr (std::is_same_v<T, ArcLengthChain> || std::is_same_v<T, ArcDegreeChain>) {
            for (auto& a : x.items) maybe_reverse(a.points, rng);
          } else if constexpr (std::is_same_v<T, AngleChain>) {
            for (auto& a : x.items) {
              if (auto* a3 = std::get_if<Angle3>(&a); a3 && rng.bernoulli(0.5)) std::swap(a3->p1, a3->p3);
            }
          } else if constexpr (std::is_same_v<T, Parallel>) {
            for (auto& r : x.items) line(r);
          } else {
            line(x.a);
            line(x.b);
          }
        },
        c);
  }
  return out;
}

GeometryProblem shuffle_clauses(const GeometryProblem& prob, const std::vector<std::size_t>& order) {
  GeometryProblem out = prob;
  out.semantic.clear();
  for (auto i : order) out.semantic.push_back(prob.semantic.at(i));

  const auto before = assign_problem_variables(prob.semantic, prob.problem_text);
  out.refresh_variables();
  std::vector<int> new_position(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) new_position[order[k]] = static_cast<int>(k);

  // Each variable is identified by where it came from: a clause (which holds
  // at most one value) or a text offset (the text is untouched).
  std::map<int, int> remap;
  for (const auto& v : before) {
    VariableSource src = v.source;
    if (src.section == VariableSource::Section::Semantic) src.clause = new_position[static_cast<std::size_t>(src.clause)];
    for (const auto& w : out.variables) {
      if (w.source == src) remap[v.index] = w.index;
    }
  }
  if (prob.program) {
    auto steps = prob.program->steps();
    for (auto& step : steps) {
      for (auto& o : step.operands) {
        if (auto* n = std::get_if<program::ProblemVar>(&o)) n->index = lookup(remap, n->index);
      }
    }
    out.program = program::SolutionProgram(std::move(steps));
  }
  return out;
}

GeometryProblem clause_shuffle(const GeometryProblem& prob, Rng& rng) {
  std::vector<std::size_t> order(prob.semantic.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  return shuffle_clauses(prob, order);
}

GeometryProblem apply(Strategy s, const GeometryProblem& prob, Rng& rng) {
  switch (s) {
    case Strategy::TokenReplace: return token_replace(prob, rng);
    case Strategy::ConnectionRotate: return connection_rotate(prob, rng);
    case Strategy::ReprTranspose: return repr_transpose(prob, rng);
    case Strategy::ClauseShuffle: return clause_shuffle(prob, rng);
  }
  return prob;
}

Rng strategy_stream(const GeometryProblem& prob, std::uint64_t seed, Strategy s) {
  return Rng::keyed(seed, prob.id, name(s));
}

PipelineResult augment_pipeline_traced(const GeometryProblem& prob, const AugmentConfig& cfg) {
  PipelineResult result{prob, {}};
  Rng gate = Rng::keyed(cfg.seed, prob.id, std::string_view("gate"));
  for (std::size_t i = 0; i < kStrategyOrder.size(); ++i) {
    result.fired[i] = gate.bernoulli(cfg.p);
    if (!result.fired[i]) continue;
    Rng rng = strategy_stream(prob, cfg.seed, kStrategyOrder[i]);
    result.problem = apply(kStrategyOrder[i], result.problem, rng);
  }
  return result;
}

GeometryProblem augment_pipeline(const GeometryProblem& prob, const AugmentConfig& cfg) {
  return augment_pipeline_traced(prob, cfg).problem;
}

}  // namespace geoprog::augment
