#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "conceptmap/corpus.hpp"
#include "conceptmap/types.hpp"

// Seeded generators for scale and redundancy testing. Output depends only on
// the arguments.
namespace conceptmap::synth {

/// Report-style documents built from name and verb tables, 3 to 8 sentences
/// each, with pronoun references and prepositional tails.
Corpus generate_corpus(std::size_t documents, std::uint64_t seed);

/// Mix of redundancy clusters for pruning: standalone triples plus groups
/// that collapse under one rule each (longer object, longer relation, longer
/// subject, nested prepositional variant) and three-member chains.
/// Exactly `records` triples; every cluster lives in its own sentence.
std::vector<Triple> generate_stress_triples(std::size_t records, std::uint64_t seed);

inline constexpr std::size_t kStressRecords = 8603;
inline constexpr std::uint64_t kStressSeed = 20180407;

}  // namespace conceptmap::synth
