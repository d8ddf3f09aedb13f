#pragma once

#include <string>

namespace cohmms {

/// Shortest decimal representation that round-trips, used for JSON payloads.
std::string format_double(double x);

/// Deterministic CSV formatting: shortest round-trip capped at 12 significant
/// digits, trailing zeros trimmed. Reproducible artifacts depend on this.
std::string format_sig12(double x);

} // namespace cohmms
