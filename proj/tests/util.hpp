#pragma once

// Shared fixtures for the test suites.

#include <cstdint>

#include "triside/instances.hpp"
#include "triside/market.hpp"

namespace triside::fixtures {

inline Market fig1() {
  InstanceSpec spec;
  spec.family = Family::Fig1;
  return generate(spec);
}

inline Market fig2() {
  InstanceSpec spec;
  spec.family = Family::Fig2;
  return generate(spec);
}

inline Market fig3(const Rat& kappa) {
  InstanceSpec spec;
  spec.family = Family::Fig3;
  spec.kappa = kappa;
  return generate(spec);
}

inline Market random_market(std::uint64_t seed, int buyers, int stores, int couriers,
                            Family family = Family::RandomUnstructured,
                            long max_numerator = 20, long denominator = 1) {
  InstanceSpec spec;
  spec.family = family;
  spec.seed = seed;
  spec.buyers = buyers;
  spec.stores = stores;
  spec.couriers = couriers;
  spec.grid.max_numerator = max_numerator;
  spec.grid.denominator = denominator;
  return generate(spec);
}

}  // namespace triside::fixtures
