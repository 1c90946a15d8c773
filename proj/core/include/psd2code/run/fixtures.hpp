#pragma once

#include <cstdint>
#include <filesystem>
#include <random>

#include "psd2code/psd/types.hpp"

namespace psd2code::run {

// Random layer tree exercising the full reader feature set: nested groups,
// text layers with content, hidden layers, fractional opacity, CJK names.
// Depth <= 6, at most max_layers nodes.
psd::RawDesignInput random_round_trip_tree(std::mt19937_64& rng, std::size_t max_layers = 20);

// Well-behaved tree for end-to-end fixtures: visible grid-placed layers with
// unique asset-friendly names, optionally one non-folding group.
psd::RawDesignInput random_document_tree(std::mt19937_64& rng);

struct FixtureOptions {
  std::uint64_t seed = 1;
  int count = 10;
};

// Writes a synthetic corpus: per sample a design.psd, matching assets/,
// ground-truth jsx/scss from the template generator, a screenshot.png rendered
// from that truth, and a replay fixture under <dir>/.replay keyed by the
// default-config prompt digest.
void write_fixture_corpus(const std::filesystem::path& dir, const FixtureOptions& options);

}  // namespace psd2code::run
