#pragma once
// Text interchange format for packet traces: one "time length" record per
// line, '#' comment lines skipped.  The unit of the length column is
// declared per file, never guessed.

#include <optional>
#include <string>

#include "lrd/queue.hpp"

namespace lrd {

enum class TraceFormat {
    SecondsBits,
    SecondsBytes,  // lengths multiplied by 8 on load, divided by 8 on save
};

// Loads a trace; fails with the offending line number on malformed input,
// decreasing timestamps or an empty file.  first_n keeps only the first N
// packets.
PacketTrace load_trace(const std::string& path, TraceFormat format,
                       std::optional<std::size_t> first_n = std::nullopt);

// One record per line, time printed with 9 decimal places, deterministic
// byte-for-byte.  Exporting a non-byte-multiple length as bytes is an
// error rather than a silent rounding.
void save_trace(const PacketTrace& trace, const std::string& path, TraceFormat format);

}  // namespace lrd
