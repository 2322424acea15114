#pragma once

// JSON file formats for matrices and sampled signals.
//
//   matrix: { "n": int, "re": [[n x n]], "im": [[n x n]] }
//   signal: { "T": real, "N": int, "dim": int, "re": [[N x dim]], "im": [[N x dim]] }
//
// Malformed documents raise FormatError with the offending field named.

#include <filesystem>
#include <string>
#include <string_view>

#include "maxregkit/numlin.hpp"
#include "maxregkit/signal.hpp"

namespace maxregkit {

CMatrix parse_matrix(std::string_view text);
std::string format_matrix(const CMatrix& m);
CMatrix read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const CMatrix& m);

Signal parse_signal(std::string_view text);
std::string format_signal(const Signal& f);
Signal read_signal(const std::filesystem::path& path);
void write_signal(const std::filesystem::path& path, const Signal& f);

}  // namespace maxregkit
