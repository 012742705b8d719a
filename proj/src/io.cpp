#include "rateless/io.hpp"

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace rateless {

using nlohmann::json;

std::string format_double(double v, int decimals) {
  char buf[64];
  if (decimals < 0) {
    std::snprintf(buf, sizeof(buf), "%.12g", v);
  } else {
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  }
  return buf;
}

json gain_to_json(const GainMatrix& g) {
  json entries = json::array();
  for (int m = 0; m < g.rows(); ++m) {
    json row = json::array();
    for (int l = 0; l < g.cols(); ++l) {
      const auto& e = g.entries()(m, l);
      row.push_back({{"mag", std::abs(e)}, {"phase_rad", std::arg(e)}});
    }
    entries.push_back(std::move(row));
  }
  return json{{"rows", g.rows()},
              {"cols", g.cols()},
              {"power", g.power()},
              {"entries", std::move(entries)}};
}

GainMatrix gain_from_json(const json& j) {
  try {
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    const double power = j.at("power").get<double>();
    const auto& entries = j.at("entries");
    if (static_cast<int>(entries.size()) != rows) {
      throw ParseError("gain matrix: row count mismatch");
    }
    Eigen::MatrixXcd g(rows, cols);
    for (int m = 0; m < rows; ++m) {
      const auto& row = entries.at(m);
      if (static_cast<int>(row.size()) != cols) {
        throw ParseError("gain matrix: column count mismatch");
      }
      for (int l = 0; l < cols; ++l) {
        g(m, l) = std::polar(row.at(l).at("mag").get<double>(),
                             row.at(l).at("phase_rad").get<double>());
      }
    }
    return GainMatrix(std::move(g), power);
  } catch (const json::exception& e) {
    throw ParseError(std::string("gain matrix JSON: ") + e.what());
  }
}

namespace {
json spec_to_json(const CodeSpec& spec) {
  return json{{"ceiling_rate", spec.ceiling_rate},
              {"layers", spec.layers},
              {"blocks", spec.blocks},
              {"power", spec.power},
              {"noise_var", spec.noise_var}};
}

CodeSpec spec_from_json(const json& j) {
  CodeSpec spec;
  spec.ceiling_rate = j.at("ceiling_rate").get<double>();
  spec.layers = j.at("layers").get<int>();
  spec.blocks = j.at("blocks").get<int>();
  spec.power = j.at("power").get<double>();
  spec.noise_var = j.at("noise_var").get<double>();
  return spec;
}
}  // namespace

json allocation_to_json(const PowerAllocation& alloc) {
  json grid = json::array();
  for (int m = 0; m < alloc.powers.rows(); ++m) {
    json row = json::array();
    for (int l = 0; l < alloc.powers.cols(); ++l) row.push_back(alloc.powers(m, l));
    grid.push_back(std::move(row));
  }
  return json{{"spec", spec_to_json(alloc.spec)},
              {"per_layer_rate", alloc.per_layer_rate},
              {"threshold_gains_sq", alloc.thresholds.gains_sq},
              {"powers", std::move(grid)}};
}

PowerAllocation allocation_from_json(const json& j) {
  try {
    PowerAllocation alloc;
    alloc.spec = spec_from_json(j.at("spec"));
    alloc.per_layer_rate = j.at("per_layer_rate").get<double>();
    alloc.thresholds.rule = ThresholdRule::Ideal;
    alloc.thresholds.gains_sq =
        j.at("threshold_gains_sq").get<std::vector<double>>();
    const auto& grid = j.at("powers");
    alloc.powers.setZero(alloc.spec.blocks, alloc.spec.layers);
    if (static_cast<int>(grid.size()) != alloc.spec.blocks) {
      throw ParseError("allocation: block count mismatch");
    }
    for (int m = 0; m < alloc.spec.blocks; ++m) {
      const auto& row = grid.at(m);
      if (static_cast<int>(row.size()) != alloc.spec.layers) {
        throw ParseError("allocation: layer count mismatch");
      }
      for (int l = 0; l < alloc.spec.layers; ++l) {
        alloc.powers(m, l) = row.at(l).get<double>();
      }
    }
    return alloc;
  } catch (const json::exception& e) {
    throw ParseError(std::string("allocation JSON: ") + e.what());
  }
}

json sim_report_to_json(const SimReport& report) {
  auto grid = [](const Eigen::MatrixXd& m) {
    json out = json::array();
    for (int r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      out.push_back(std::move(row));
    }
    return out;
  };
  return json{{"empirical_sinr", grid(report.empirical_sinr)},
              {"analytic_sinr", grid(report.analytic_sinr)},
              {"standard_error", grid(report.standard_error)},
              {"max_offdiag_corr", report.max_offdiag_corr},
              {"seed", report.seed_used}};
}

std::string shortfall_to_csv(const ShortfallReport& report, int decimals) {
  std::ostringstream out;
  const int blocks = static_cast<int>(report.percent.rows());
  const int layers = static_cast<int>(report.percent.cols());
  out << "l";
  for (int m = 1; m <= blocks; ++m) out << ",m=" << m;
  out << "\n";
  for (int l = 0; l < layers; ++l) {
    out << "l=" << (l + 1);
    for (int m = 0; m < blocks; ++m) {
      out << "," << format_double(report.percent(m, l), decimals);
    }
    out << "\n";
  }
  return out.str();
}

std::string allocation_to_csv(const PowerAllocation& alloc, int decimals) {
  std::ostringstream out;
  const int blocks = static_cast<int>(alloc.powers.rows());
  const int layers = static_cast<int>(alloc.powers.cols());
  out << "gain_db";
  for (int m = 0; m < blocks; ++m) {
    out << ","
        << format_double(10.0 * std::log10(alloc.thresholds.gains_sq[m]),
                         decimals);
  }
  out << "\n";
  for (int l = 0; l < layers; ++l) {
    out << "l=" << (l + 1);
    for (int m = 0; m < blocks; ++m) {
      out << "," << format_double(alloc.powers(m, l), decimals);
    }
    out << "\n";
  }
  return out.str();
}

std::string sim_report_to_csv(const SimReport& report) {
  std::ostringstream out;
  const int blocks = static_cast<int>(report.empirical_sinr.rows());
  const int layers = static_cast<int>(report.empirical_sinr.cols());
  auto emit = [&](const char* name, const Eigen::MatrixXd& grid) {
    out << name;
    for (int m = 1; m <= blocks; ++m) out << ",m=" << m;
    out << "\n";
    for (int l = 0; l < layers; ++l) {
      out << "l=" << (l + 1);
      for (int m = 0; m < blocks; ++m) {
        out << "," << format_double(grid(m, l));
      }
      out << "\n";
    }
  };
  emit("empirical_sinr", report.empirical_sinr);
  emit("analytic_sinr", report.analytic_sinr);
  out << "max_offdiag_corr," << format_double(report.max_offdiag_corr) << "\n";
  return out.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << contents;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string digest_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rateless
