#pragma once

#include <string>

#include "triside/equilibrium.hpp"
#include "triside/market.hpp"

namespace triside {

// Reads a certificate from JSON text, resolving agent ids against the given
// market. Price and compensation lists must be dense; the tip list may be
// omitted (meaning all-zero). Structural problems (bad mode tag, unknown
// ids, missing or duplicate entries, negative values) throw InputError;
// whether the certificate actually verifies is a separate question for the
// verifier.
EquilibriumCertificate load_certificate(const std::string& text, const Market& market);

// Canonical JSON text: two-space indentation, entries in agent declaration
// order, tips omitted when all zero, allocation sorted. Round-trips exactly
// against load_certificate.
std::string save_certificate(const EquilibriumCertificate& certificate,
                             const Market& market);

}  // namespace triside
