#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "rateless/gain_matrix.hpp"
#include "rateless/power_alloc.hpp"
#include "rateless/simulator.hpp"

namespace rateless {

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

nlohmann::json gain_to_json(const GainMatrix& g);
GainMatrix gain_from_json(const nlohmann::json& j);

nlohmann::json allocation_to_json(const PowerAllocation& alloc);
PowerAllocation allocation_from_json(const nlohmann::json& j);

nlohmann::json sim_report_to_json(const SimReport& report);

/// Table layout used throughout: rows are layers, columns are blocks.
/// `decimals < 0` writes full precision.
std::string shortfall_to_csv(const ShortfallReport& report, int decimals = -1);
std::string allocation_to_csv(const PowerAllocation& alloc, int decimals = -1);
std::string sim_report_to_csv(const SimReport& report);

std::string format_double(double v, int decimals = -1);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

/// FNV-1a 64-bit digest of a byte string, hex encoded.
std::string digest_hex(const std::string& bytes);

}  // namespace rateless
