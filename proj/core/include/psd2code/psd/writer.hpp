#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "psd2code/psd/types.hpp"

namespace psd2code::psd {

// Emits a minimal conformant PSD binary (version 1, RGB, 8-bit) such that
// read_psd reproduces the input's header, names, bounds, kinds, visibility,
// opacity and nesting. Used as the fixture generator for round-trip tests.
std::vector<std::uint8_t> write_synthetic_psd_bytes(const RawDesignInput& input);
void write_synthetic_psd(const RawDesignInput& input, const std::filesystem::path& path);

}  // namespace psd2code::psd
