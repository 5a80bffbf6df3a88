#pragma once

// Text-level augmentation: token replacement, connection rotation,
// representation transposition and clause shuffling. Every strategy keeps
// the program's answer unchanged; shuffling rewrites N operands to follow
// the renumbered problem variables.

#include <array>
#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

#include "geoprog/problem.hpp"
#include "geoprog/rng.hpp"

namespace geoprog::augment {

struct AugmentConfig {
  double p = 0.5;
  std::uint64_t seed = 0;

  static AugmentConfig training(std::uint64_t seed) { return {0.5, seed}; }
  static AugmentConfig pretraining(std::uint64_t seed) { return {0.7, seed}; }
};

enum class Strategy { TokenReplace, ConnectionRotate, ReprTranspose, ClauseShuffle };
inline constexpr std::array<Strategy, 4> kStrategyOrder = {Strategy::TokenReplace, Strategy::ConnectionRotate,
                                                           Strategy::ReprTranspose, Strategy::ClauseShuffle};
std::string_view name(Strategy s);

/// Bijections applied by token replacement. Letters or ids not in a map
/// are left alone.
struct Renaming {
  std::map<char, char> points;
  std::map<int, int> angle_ids;
  std::map<char, char> arguments;

  Renaming inverse() const;
};

GeometryProblem apply_renaming(const GeometryProblem& prob, const Renaming& r);
/// Samples injective maps for the points, angle ids and arguments present
/// in the problem.
Renaming sample_renaming(const GeometryProblem& prob, Rng& rng);

GeometryProblem token_replace(const GeometryProblem& prob, Rng& rng);
GeometryProblem connection_rotate(const GeometryProblem& prob, Rng& rng);
GeometryProblem repr_transpose(const GeometryProblem& prob, Rng& rng);
GeometryProblem clause_shuffle(const GeometryProblem& prob, Rng& rng);

/// Reorders semantic clauses: new clause i is old clause order[i]. N operands
/// in the program follow their values to the new indices.
GeometryProblem shuffle_clauses(const GeometryProblem& prob, const std::vector<std::size_t>& order);

GeometryProblem apply(Strategy s, const GeometryProblem& prob, Rng& rng);

/// Random stream of one strategy for one problem.
Rng strategy_stream(const GeometryProblem& prob, std::uint64_t seed, Strategy s);

struct PipelineResult {
  GeometryProblem problem;
  std::array<bool, 4> fired{};  // indexed like kStrategyOrder
};

/// Each strategy fires independently with probability cfg.p, in the order
/// replace, rotate, transpose, shuffle. Deterministic in (prob.id, cfg.seed).
PipelineResult augment_pipeline_traced(const GeometryProblem& prob, const AugmentConfig& cfg);
GeometryProblem augment_pipeline(const GeometryProblem& prob, const AugmentConfig& cfg);

}  // namespace geoprog::augment
