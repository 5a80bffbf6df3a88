#pragma once

// Tagged token stream of a problem (structural clauses, semantic clauses,
// problem text) and the masked-token pre-training samples built from it.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "geoprog/problem.hpp"
#include "geoprog/program.hpp"

namespace geoprog::corpus {

enum class ClassTag { G, N, ARG, P, ANGID };
enum class SectionTag { S, C, T };

std::string_view name(ClassTag t);
std::string_view name(SectionTag t);

struct TaggedToken {
  std::string text;
  ClassTag class_tag = ClassTag::G;
  SectionTag section_tag = SectionTag::S;
  std::size_t position = 0;
  /// Index k when this token is where N<k> is located, else -1.
  int problem_variable = -1;
  bool operator==(const TaggedToken&) const = default;
};

/// Point runs become one P token per letter; a numeric literal is a single
/// token. N<k> is located at the first N-tagged token of its expression.
std::vector<TaggedToken> tokenize_and_tag(const GeometryProblem& prob);

inline constexpr std::string_view kMask = "[M]";

struct MaskedSample {
  std::string id;
  std::size_t sample = 0;
  std::vector<TaggedToken> tokens;   // masked positions carry kMask, tags kept
  std::vector<std::size_t> masks;    // ascending
  std::vector<std::string> targets;  // original tokens, same order as masks
  bool operator==(const MaskedSample&) const = default;
};

/// Number of masked positions for n tokens: ratio * n rounded half away from zero.
std::size_t mask_count(std::size_t n, double ratio);

/// k samples, each masking mask_count(n, ratio) uniformly chosen positions.
/// Sample i draws from the stream keyed by (seed, id, i).
std::vector<MaskedSample> make_masked_samples(const std::vector<TaggedToken>& tokens, double ratio,
                                              std::uint64_t seed, std::size_t k, std::string_view id = "");

/// Generation-style pair: the masked input and the recovered tokens, both
/// space-joined.
struct SentinelPair {
  std::string input;
  std::string target;
};
SentinelPair to_sentinel_format(const MaskedSample& s);

/// One JSON object per line with fields id, sample, tokens, class_tags,
/// section_tags, masks, targets.
std::string to_jsonl(const MaskedSample& s);

program::CandidateVocab candidate_vocab(const std::vector<TaggedToken>& tokens);
program::CandidateVocab candidate_vocab(const GeometryProblem& prob);

struct CopyLocations {
  /// "N0", "x", ... -> first position in the stream.
  std::map<std::string, std::size_t> first;
  /// Tokens whose literal occurs more than once; resolved to the first.
  std::vector<std::string> duplicates;
};
CopyLocations copy_locations(const std::vector<TaggedToken>& tokens);
CopyLocations copy_locations(const GeometryProblem& prob);

}  // namespace geoprog::corpus
