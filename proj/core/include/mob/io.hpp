// Copyright (C) 2026 The MoB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mob/covering.hpp"
#include "mob/embedding.hpp"

namespace mob::io {

// MOBE binary layout, all little-endian:
//   offset 0   char[4]  magic "MOBE"
//   offset 4   uint16   version (1)
//   offset 6   uint8    dtype (0 = float32, 1 = float64)
//   offset 7   uint8    reserved (0)
//   offset 8   uint64   n
//   offset 16  uint64   d
//   offset 24  n * d scalars, row-major

inline constexpr std::uint16_t kMobeVersion = 1;
inline constexpr std::size_t kMobeHeaderSize = 24;

enum class DType : std::uint8_t { Float32 = 0, Float64 = 1 };

std::size_t dtype_size(DType dtype) noexcept;
/// "f32" or "f64".
DType parse_dtype(std::string_view name);

struct MobeHeader {
    std::uint16_t version = kMobeVersion;
    DType dtype = DType::Float64;
    std::uint64_t rows = 0;
    std::uint64_t dim = 0;
};

/// Serializes header and payload. Float32 output rounds each value to nearest.
std::vector<std::uint8_t> encode_mobe(const EmbeddingSet& set, DType dtype);
/// Parses a whole MOBE buffer. Throws BadMagic, UnsupportedVersion, TruncatedPayload, NonFiniteValue.
EmbeddingSet decode_mobe(const std::vector<std::uint8_t>& bytes, MobeHeader* header = nullptr);

void write_mobe(const EmbeddingSet& set, DType dtype, const std::filesystem::path& path);
EmbeddingSet read_mobe(const std::filesystem::path& path, MobeHeader* header = nullptr);

/// Plain-text embeddings: one token per line, d comma-separated columns, an
/// optional non-numeric header line.
EmbeddingSet read_csv_embeddings(const std::filesystem::path& path);
void write_csv_embeddings(const EmbeddingSet& set, const std::filesystem::path& path);

/// Dispatches on extension: ".csv" is text, anything else is MOBE.
EmbeddingSet load_embeddings(const std::filesystem::path& path);

/// %.17g, with "inf"/"-inf"/"nan" for non-finite values.
std::string format_double(double value);

/// Selection document (JSON) with exactly the keys indices_prompt,
/// indices_visual, eps_p_directed, eps_p_symmetric, eps_v, eta,
/// shortfall_reassigned and config. Reals carry 17 significant digits;
/// infinite radii are written as the string "inf".
std::string selection_to_json(const SelectionResult& result);
SelectionResult selection_from_json(const std::string& text);

void write_selection(const SelectionResult& result, const std::filesystem::path& path);
SelectionResult read_selection(const std::filesystem::path& path);

/// Writes `text` to `path`, replacing any existing file. Throws IoFailure.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace mob::io
