// Copyright (C) 2026 The MoB Authors
// SPDX-License-Identifier: Apache-2.0

#include "mob/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace mob::io {

namespace {

void put_le(std::vector<std::uint8_t>& out, std::uint64_t value, std::size_t bytes) {
    for (std::size_t i = 0; i < bytes; ++i) {
        out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
    }
}

std::uint64_t get_le(const std::uint8_t* p, std::size_t bytes) {
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < bytes; ++i) {
        value |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    }
    return value;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool parse_number(const std::string& token, double& out) {
    const std::string t = trim(token);
    if (t.empty()) return false;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    if (*begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

std::size_t dtype_size(DType dtype) noexcept { return dtype == DType::Float32 ? 4 : 8; }

DType parse_dtype(std::string_view name) {
    if (name == "f32") return DType::Float32;
    if (name == "f64") return DType::Float64;
    throw Error(ErrorCode::InvalidArgument, "unknown dtype '" + std::string(name) + "' (expected f32|f64)");
}

std::vector<std::uint8_t> encode_mobe(const EmbeddingSet& set, DType dtype) {
    std::vector<std::uint8_t> out;
    out.reserve(kMobeHeaderSize + set.data().size() * dtype_size(dtype));
    for (char c : {'M', 'O', 'B', 'E'}) out.push_back(static_cast<std::uint8_t>(c));
    put_le(out, kMobeVersion, 2);
    put_le(out, static_cast<std::uint8_t>(dtype), 1);
    put_le(out, 0, 1);
    put_le(out, set.rows(), 8);
    put_le(out, set.dim(), 8);
    for (double v : set.data()) {
        if (dtype == DType::Float32) {
            put_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)), 4);
        } else {
            put_le(out, std::bit_cast<std::uint64_t>(v), 8);
        }
    }
    return out;
}

EmbeddingSet decode_mobe(const std::vector<std::uint8_t>& bytes, MobeHeader* header) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), "MOBE", 4) != 0) {
        throw Error(ErrorCode::BadMagic, "not a MOBE file");
    }
    if (bytes.size() < kMobeHeaderSize) {
        throw Error(ErrorCode::TruncatedPayload, "header is shorter than 24 bytes");
    }
    MobeHeader h;
    h.version = static_cast<std::uint16_t>(get_le(bytes.data() + 4, 2));
    if (h.version != kMobeVersion) {
        throw Error(ErrorCode::UnsupportedVersion, "MOBE version " + std::to_string(h.version));
    }
    const auto dtype_byte = bytes[6];
    if (dtype_byte > 1) {
        throw Error(ErrorCode::ParseError, "unknown dtype code " + std::to_string(dtype_byte));
    }
    if (bytes[7] != 0) {
        throw Error(ErrorCode::ParseError, "reserved header byte must be zero");
    }
    h.dtype = static_cast<DType>(dtype_byte);
    h.rows = get_le(bytes.data() + 8, 8);
    h.dim = get_le(bytes.data() + 16, 8);

    const std::size_t width = dtype_size(h.dtype);
    const std::uint64_t payload = bytes.size() - kMobeHeaderSize;
    if (h.dim != 0 && h.rows > std::numeric_limits<std::uint64_t>::max() / h.dim / width) {
        throw Error(ErrorCode::ParseError, "n * d overflows");
    }
    const std::uint64_t count = h.rows * h.dim;
    if (payload < count * width) {
        throw Error(ErrorCode::TruncatedPayload, "payload has " + std::to_string(payload) + " bytes, expected " +
                                                     std::to_string(count * width));
    }
    if (payload > count * width) {
        throw Error(ErrorCode::ParseError, "trailing bytes after payload");
    }

    std::vector<double> data(count);
    const std::uint8_t* p = bytes.data() + kMobeHeaderSize;
    for (std::uint64_t i = 0; i < count; ++i, p += width) {
        data[i] = h.dtype == DType::Float32
                      ? static_cast<double>(std::bit_cast<float>(static_cast<std::uint32_t>(get_le(p, 4))))
                      : std::bit_cast<double>(get_le(p, 8));
        if (!std::isfinite(data[i])) {
            throw Error(ErrorCode::NonFiniteValue, "non-finite scalar at position " + std::to_string(i));
        }
    }
    if (header) *header = h;
    return EmbeddingSet(h.rows, h.dim, std::move(data));
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    }
    out << text;
    if (!out) {
        throw Error(ErrorCode::IoFailure, "write to " + path.string() + " failed");
    }
}

void write_mobe(const EmbeddingSet& set, DType dtype, const std::filesystem::path& path) {
    const auto bytes = encode_mobe(set, dtype);
    write_text(path, std::string(bytes.begin(), bytes.end()));
}

EmbeddingSet read_mobe(const std::filesystem::path& path, MobeHeader* header) {
    const std::string raw = read_text(path);
    return decode_mobe(std::vector<std::uint8_t>(raw.begin(), raw.end()), header);
}

EmbeddingSet read_csv_embeddings(const std::filesystem::path& path) {
    std::istringstream in(read_text(path));
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_commas(line);
        std::vector<double> row;
        row.reserve(cells.size());
        bool numeric = true;
        for (const auto& c : cells) {
            double v = 0.0;
            if (!parse_number(c, v)) {
                numeric = false;
                break;
            }
            row.push_back(v);
        }
        if (!numeric) {
            if (rows.empty() && line_no == 1) continue;  // header
            throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": non-numeric cell");
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": expected " +
                                                   std::to_string(rows.front().size()) + " columns");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw Error(ErrorCode::ParseError, path.string() + ": no data rows");
    }
    return EmbeddingSet::from_rows(rows);
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_csv_embeddings(const EmbeddingSet& set, const std::filesystem::path& path) {
    std::string text;
    for (std::size_t i = 0; i < set.rows(); ++i) {
        const auto r = set.row(i);
        for (std::size_t t = 0; t < r.size(); ++t) {
            if (t) text += ',';
            text += format_double(r[t]);
        }
        text += '\n';
    }
    write_text(path, text);
}

EmbeddingSet load_embeddings(const std::filesystem::path& path) {
    return path.extension() == ".csv" ? read_csv_embeddings(path) : read_mobe(path);
}

namespace {

std::string json_real(double value) {
    if (std::isinf(value) && value > 0) return "\"inf\"";
    if (!std::isfinite(value)) {
        throw Error(ErrorCode::InvalidArgument, "cannot serialize " + format_double(value));
    }
    return format_double(value);
}

std::string json_indices(const IndexList& idx) {
    std::string s = "[";
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(idx[i]);
    }
    return s + "]";
}

double real_from_json(const nlohmann::json& j, const char* key) {
    const auto& v = j.at(key);
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        throw Error(ErrorCode::ParseError, std::string("bad value for ") + key);
    }
    return v.get<double>();
}

}  // namespace

std::string selection_to_json(const SelectionResult& r) {
    std::string heuristic = "\"manual\"";
    if (r.config.eta_prior) {
        heuristic = "{\"eta_prior\": \"" + std::string(to_string(r.config.eta_prior->coupling)) + "\", \"tier\": \"" +
                    std::string(to_string(r.config.eta_prior->tier)) + "\"}";
    }
    std::string s = "{\n";
    s += "  \"indices_prompt\": " + json_indices(r.prompt_centers) + ",\n";
    s += "  \"indices_visual\": " + json_indices(r.visual_centers) + ",\n";
    s += "  \"eps_p_directed\": " + json_real(r.eps_p_directed) + ",\n";
    s += "  \"eps_p_symmetric\": " + json_real(r.eps_p_symmetric) + ",\n";
    s += "  \"eps_v\": " + json_real(r.eps_v) + ",\n";
    s += "  \"eta\": " + json_real(r.eta) + ",\n";
    s += "  \"shortfall_reassigned\": " + std::to_string(r.shortfall_reassigned) + ",\n";
    s += "  \"config\": {\"budget_K\": " + std::to_string(r.config.budget_K) +
         ", \"budget_Kp\": " + std::to_string(r.config.budget_Kp) + ", \"fold_k\": " + std::to_string(r.config.fold_k) +
         ", \"heuristic\": " + heuristic + "}\n";
    s += "}\n";
    return s;
}

SelectionResult selection_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        SelectionResult r;
        r.prompt_centers = j.at("indices_prompt").get<IndexList>();
        r.visual_centers = j.at("indices_visual").get<IndexList>();
        r.eps_p_directed = real_from_json(j, "eps_p_directed");
        r.eps_p_symmetric = real_from_json(j, "eps_p_symmetric");
        r.eps_v = real_from_json(j, "eps_v");
        r.eta = real_from_json(j, "eta");
        r.shortfall_reassigned = j.at("shortfall_reassigned").get<std::size_t>();
        const auto& c = j.at("config");
        r.config.budget_K = c.at("budget_K").get<std::size_t>();
        r.config.budget_Kp = c.at("budget_Kp").get<std::size_t>();
        r.config.fold_k = c.at("fold_k").get<std::size_t>();
        const auto& h = c.at("heuristic");
        if (h.is_object()) {
            r.config.eta_prior = EtaPrior{parse_coupling_class(h.at("eta_prior").get<std::string>()),
                                          parse_tier(h.at("tier").get<std::string>())};
        } else if (h.get<std::string>() != "manual") {
            throw Error(ErrorCode::ParseError, "unknown heuristic tag");
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("selection document: ") + e.what());
    }
}

void write_selection(const SelectionResult& result, const std::filesystem::path& path) {
    write_text(path, selection_to_json(result));
}

SelectionResult read_selection(const std::filesystem::path& path) { return selection_from_json(read_text(path)); }

}  // namespace mob::io
