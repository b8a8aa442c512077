#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "triside/market.hpp"
#include "triside/rational.hpp"

namespace triside {

// Built-in market families. The three fixed markets are small hand-picked
// examples exercising distinct behaviours (tips strictly helping, no tip-free
// equilibrium, unavoidable inefficiency); the random families draw from an
// integer grid and the structured ones are decomposable by construction.
enum class Family {
  Fig1,
  Fig2,
  Fig3,
  RandomUnstructured,
  RandomCourierStore,
  RandomCourierBuyer,
  RandomSingleMinded,
  From3dm,
};

const char* family_tag(Family family);
std::optional<Family> family_from_tag(std::string_view tag);
std::vector<std::string> all_family_tags();

// Integer grid the random draws come from: numerators are uniform on
// 0..max_numerator, then divided by denominator. Keeps rationals small.
struct ValueGrid {
  long max_numerator = 20;
  long denominator = 1;
};

struct InstanceSpec {
  Family family = Family::RandomUnstructured;
  std::uint64_t seed = 0;
  int buyers = 2;
  int stores = 2;
  int couriers = 2;
  ValueGrid grid;
  // Fig3 scales four delivery costs by this constant; must exceed 2.
  std::optional<Rat> kappa;
  // From3dm: explicit (buyer, store, courier) triples with cheap delivery.
  // Left empty, the triples are drawn from the seed instead (each of the
  // side^3 candidates kept with probability 1/2, scanned lexicographically).
  std::vector<std::array<int, 3>> triples;
};

// Builds the market a spec describes. Deterministic in the spec: the fixed
// families ignore seed and dims, and the random families commit to a draw
// order (valuations row-major by buyer then store, then costs courier-major;
// structured families draw the shared grid first, then each courier's part).
// Structured and single-minded families re-draw their cost tensors a bounded
// number of times when an accidental extra structure would make the detector
// report a different kind; degenerate dimensions may keep the final draw.
// Throws InputError on bad dims, a missing or out-of-range kappa, or
// out-of-range triples.
Market generate(const InstanceSpec& spec);

// Parses a spec from JSON text with keys: family (required tag), seed,
// dims ([m,n,l]), grid ({max_numerator, denominator}), kappa (rational
// string or integer), triples ([[b,s,d], ...]). Throws InputError on
// malformed input or unknown keys.
InstanceSpec instance_spec_from_json(const std::string& text);

}  // namespace triside
