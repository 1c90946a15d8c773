#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "psd2code/psd/types.hpp"

namespace psd2code::psd {

// Reads the layer-record subset of a PSD binary: header, layer tree with
// bounds/opacity/flags/names, section dividers (groups) and type-tool markers
// (text layers). Channel pixel data and unknown info blocks are skipped and
// recorded in the parse notes. Throws PsdError.
RawDesignInput read_psd(const std::filesystem::path& path);
RawDesignInput read_psd_bytes(const std::vector<std::uint8_t>& bytes, const std::string& source_path);

// Test-friendly plain-text equivalent. Format:
//   page W H
//   kind name top left bottom right opacity visible [text="..."]
// one node per line, two spaces of indentation per nesting level; names with
// spaces are double-quoted. Throws PsdError with line/column on bad input.
RawDesignInput read_layer_dump(const std::filesystem::path& path);
RawDesignInput read_layer_dump_text(const std::string& text, const std::string& source_path);

// Serializes a tree to the layer-dump format (round-trips through
// read_layer_dump_text).
std::string write_layer_dump_text(const RawDesignInput& input);

}  // namespace psd2code::psd
