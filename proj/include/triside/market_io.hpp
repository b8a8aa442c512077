#pragma once

#include <string>

#include "triside/market.hpp"

namespace triside {

// Reads a market from its JSON text form. The document carries the agent id
// lists plus dense entry lists for valuations and delivery costs (and an
// optional store-cost list); every missing, duplicate, negative, or
// non-exact entry is reported with the field path and the agent ids
// involved. Throws InputError.
Market load_market(const std::string& text);

// Canonical JSON text for a market: two-space indentation, entries sorted by
// agent declaration order, store costs omitted when all zero. Loading the
// result reproduces the market exactly, and saving a loaded canonical
// document reproduces it byte for byte.
std::string save_market(const Market& market);

}  // namespace triside
