#include "geoprog/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "geoprog/rng.hpp"
#include "geoprog/text.hpp"

namespace geoprog::corpus {

using clause::VariableSource;

namespace {

struct StreamBuilder {
  std::vector<TaggedToken> out;
  std::set<char> line_labels;

  // Appends the pieces of `s`; pieces starting at or after `value_from` belong
  // to the clause's value expression. Returns the positions of N tokens
  // emitted inside the value.
  std::vector<std::size_t> add(std::string_view s, SectionTag section, std::size_t value_from,
                               std::vector<std::pair<std::size_t, std::size_t>>* text_numbers = nullptr) {
    using K = text::Piece::Kind;
    std::vector<std::size_t> value_numbers;
    for (const auto& piece : text::lex(s)) {
      const bool in_value = piece.offset >= value_from;
      switch (piece.kind) {
        case K::Space: break;
        case K::PointRun:
          for (char c : piece.text) push(std::string(1, c), ClassTag::P, section);
          break;
        case K::Number:
          if (in_value) value_numbers.push_back(out.size());
          if (text_numbers) text_numbers->emplace_back(piece.offset, out.size());
          push(piece.text, ClassTag::N, section);
          break;
        case K::AngleId: push(piece.text, ClassTag::ANGID, section); break;
        case K::Argument: {
          // Outside a value, a lone lowercase letter in a clause names a line.
          const bool is_arg = section == SectionTag::T ? !line_labels.count(piece.text[0]) : in_value;
          push(piece.text, is_arg ? ClassTag::ARG : ClassTag::G, section);
          break;
        }
        case K::Word:
        case K::Symbol: push(piece.text, ClassTag::G, section); break;
      }
    }
    return value_numbers;
  }

  void push(std::string text, ClassTag c, SectionTag s) {
    out.push_back({std::move(text), c, s, out.size(), -1});
  }
};

void note_line_labels(const clause::SemanticClause& c, std::set<char>& labels) {
  auto note = [&](const clause::LineRef& r) {
    if (const auto* n = std::get_if<clause::NamedLine>(&r)) labels.insert(n->label.letter());
  };
  if (const auto* p = std::get_if<clause::Perpendicular>(&c)) {
    note(p->a);
    note(p->b);
  } else if (const auto* q = std::get_if<clause::Parallel>(&c)) {
    for (const auto& r : q->items) note(r);
  }
}

std::string operand_key(const TaggedToken& t) {
  if (t.problem_variable >= 0) return "N" + std::to_string(t.problem_variable);
  return t.text;
}

}  // namespace

std::string_view name(ClassTag t) {
  switch (t) {
    case ClassTag::G: return "G";
    case ClassTag::N: return "N";
    case ClassTag::ARG: return "ARG";
    case ClassTag::P: return "P";
    case ClassTag::ANGID: return "ANGID";
  }
  return "?";
}

std::string_view name(SectionTag t) {
  switch (t) {
    case SectionTag::S: return "S";
    case SectionTag::C: return "C";
    case SectionTag::T: return "T";
  }
  return "?";
}

std::vector<TaggedToken> tokenize_and_tag(const GeometryProblem& prob) {
  StreamBuilder b;
  for (const auto& c : prob.structural) {
    if (const auto* n = std::get_if<clause::NamedLineThrough>(&c)) b.line_labels.insert(n->label.letter());
  }
  for (const auto& c : prob.semantic) note_line_labels(c, b.line_labels);

  const auto vars = clause::assign_problem_variables(prob.semantic, prob.problem_text);
  auto var_for = [&](const VariableSource& src) {
    for (const auto& v : vars) {
      if (v.source == src) return v.index;
    }
    return -1;
  };

  for (const auto& c : prob.structural) b.add(clause::serialize_clause(c), SectionTag::S, std::string::npos);
  for (std::size_t i = 0; i < prob.semantic.size(); ++i) {
    const auto& c = prob.semantic[i];
    const std::string s = clause::serialize_clause(c);
    const auto* value = clause::value_of(c);
    const std::size_t value_from = value && *value ? s.size() - (*value)->size() : std::string::npos;
    const auto numbers = b.add(s, SectionTag::C, value_from);
    const int k = var_for({VariableSource::Section::Semantic, static_cast<int>(i), 0});
    if (k >= 0 && !numbers.empty()) b.out[numbers.front()].problem_variable = k;
  }
  std::vector<std::pair<std::size_t, std::size_t>> text_numbers;
  b.add(prob.problem_text, SectionTag::T, std::string::npos, &text_numbers);
  for (const auto& [offset, pos] : text_numbers) {
    b.out[pos].problem_variable = var_for({VariableSource::Section::Text, -1, offset});
  }
  return std::move(b.out);
}

std::size_t mask_count(std::size_t n, double ratio) {
  return static_cast<std::size_t>(std::lround(ratio * static_cast<double>(n)));
}

std::vector<MaskedSample> make_masked_samples(const std::vector<TaggedToken>& tokens, double ratio,
                                              std::uint64_t seed, std::size_t k, std::string_view id) {
  std::vector<MaskedSample> out;
  const std::size_t n = tokens.size();
  const std::size_t m = std::min(n, mask_count(n, ratio));
  for (std::size_t s = 0; s < k; ++s) {
    Rng rng = Rng::keyed(seed, id, std::to_string(s));
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    // Partial Fisher-Yates: the first m slots end up a uniform m-subset.
    for (std::size_t i = 0; i < m; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
    idx.resize(m);
    std::sort(idx.begin(), idx.end());

    MaskedSample sample{std::string(id), s, tokens, idx, {}};
    for (auto p : idx) {
      sample.targets.push_back(tokens[p].text);
      sample.tokens[p].text = std::string(kMask);
    }
    out.push_back(std::move(sample));
  }
  return out;
}

SentinelPair to_sentinel_format(const MaskedSample& s) {
  SentinelPair out;
  for (const auto& t : s.tokens) out.input += (out.input.empty() ? "" : " ") + t.text;
  for (const auto& t : s.targets) out.target += (out.target.empty() ? "" : " ") + t;
  return out;
}

std::string to_jsonl(const MaskedSample& s) {
  nlohmann::json j;
  j["id"] = s.id;
  j["sample"] = s.sample;
  auto& tokens = j["tokens"] = nlohmann::json::array();
  auto& classes = j["class_tags"] = nlohmann::json::array();
  auto& sections = j["section_tags"] = nlohmann::json::array();
  for (const auto& t : s.tokens) {
    tokens.push_back(t.text);
    classes.push_back(name(t.class_tag));
    sections.push_back(name(t.section_tag));
  }
  j["masks"] = s.masks;
  j["targets"] = s.targets;
  return j.dump();
}

program::CandidateVocab candidate_vocab(const std::vector<TaggedToken>& tokens) {
  program::CandidateVocab v;
  for (const auto& t : tokens) {
    if (t.problem_variable >= 0) v.problem_indices.insert(t.problem_variable);
    if (t.class_tag == ClassTag::ARG) v.arguments.insert(t.text[0]);
  }
  return v;
}

program::CandidateVocab candidate_vocab(const GeometryProblem& prob) { return candidate_vocab(tokenize_and_tag(prob)); }

CopyLocations copy_locations(const std::vector<TaggedToken>& tokens) {
  CopyLocations out;
  std::map<std::string, int> literal_count;
  for (const auto& t : tokens) {
    if (t.problem_variable < 0 && t.class_tag != ClassTag::ARG) continue;
    out.first.try_emplace(operand_key(t), t.position);
    if (++literal_count[t.text] == 2) out.duplicates.push_back(t.text);
  }
  return out;
}

CopyLocations copy_locations(const GeometryProblem& prob) { return copy_locations(tokenize_and_tag(prob)); }

}  // namespace geoprog::corpus
