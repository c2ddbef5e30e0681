#include "placesim/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "placesim/rng.hpp"

namespace placesim {

std::string to_string(const ContainerConfig& config) {
  return config.is_edge() ? "edge" : std::to_string(config.memory_mb);
}

ContainerConfig parse_config(const std::string& text) {
  if (text == "edge") return ContainerConfig::edge();
  size_t pos = 0;
  int mb = 0;
  try {
    mb = std::stoi(text, &pos);
  } catch (const std::exception&) {
    throw ParseError("invalid config value: '" + text + "'");
  }
  if (pos != text.size()) throw ParseError("invalid config value: '" + text + "'");
  return ContainerConfig::cloud(mb);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::optional<double> parse_optional_ms(const std::string& cell, const char* column,
                                        std::size_t line_no) {
  if (cell.empty()) return std::nullopt;
  double value = 0.0;
  try {
    value = std::stod(cell);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": bad value for " + column + ": '" +
                     cell + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError("line " + std::to_string(line_no) + ": non-finite " + column);
  }
  return value;
}

double parse_required_ms(const std::string& cell, const char* column, std::size_t line_no) {
  auto value = parse_optional_ms(cell, column, line_no);
  if (!value) {
    throw ParseError("line " + std::to_string(line_no) + ": missing " + column);
  }
  return *value;
}

void require_nonnegative(double value, const char* column, std::size_t line_no) {
  if (value < 0.0) {
    throw ParseError("line " + std::to_string(line_no) + ": negative " + column + ": " +
                     std::to_string(value));
  }
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

std::vector<TraceRow> load_trace(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw ParseError(path + ": empty trace file");
  const std::string expected_header =
      "input_id,config,upld_ms,start_ms,start_type,comp_ms,iotup_ms,store_ms";
  if (lines[0] != expected_header) {
    throw ParseError(path + ": line 1: expected header '" + expected_header + "'");
  }

  std::vector<TraceRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (lines[i].empty()) continue;
    const auto cells = split_csv_line(lines[i]);
    if (cells.size() != 8) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 8 columns, got " +
                       std::to_string(cells.size()));
    }
    TraceRow row;
    row.input_id = cells[0];
    if (row.input_id.empty()) {
      throw ParseError("line " + std::to_string(line_no) + ": empty input_id");
    }
    try {
      row.config = parse_config(cells[1]);
    } catch (const std::exception& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
    row.upld_ms = parse_optional_ms(cells[2], "upld_ms", line_no);
    row.start_ms = parse_required_ms(cells[3], "start_ms", line_no);
    if (cells[4] == "warm") {
      row.start_type = StartType::Warm;
    } else if (cells[4] == "cold") {
      row.start_type = StartType::Cold;
    } else {
      throw ParseError("line " + std::to_string(line_no) + ": bad start_type: '" + cells[4] + "'");
    }
    row.comp_ms = parse_required_ms(cells[5], "comp_ms", line_no);
    row.iotup_ms = parse_optional_ms(cells[6], "iotup_ms", line_no);
    row.store_ms = parse_required_ms(cells[7], "store_ms", line_no);

    if (row.config.is_edge() && row.upld_ms) {
      throw ParseError("line " + std::to_string(line_no) + ": edge row must not have upld_ms");
    }
    if (row.config.is_cloud() && row.iotup_ms) {
      throw ParseError("line " + std::to_string(line_no) + ": cloud row must not have iotup_ms");
    }
    if (row.config.is_cloud() && !row.upld_ms) {
      throw ParseError("line " + std::to_string(line_no) + ": cloud row requires upld_ms");
    }
    if (row.upld_ms) require_nonnegative(*row.upld_ms, "upld_ms", line_no);
    require_nonnegative(row.start_ms, "start_ms", line_no);
    require_nonnegative(row.comp_ms, "comp_ms", line_no);
    if (row.iotup_ms) require_nonnegative(*row.iotup_ms, "iotup_ms", line_no);
    require_nonnegative(row.store_ms, "store_ms", line_no);
    rows.push_back(std::move(row));
  }
  return rows;
}

Workload load_workload(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw ParseError(path + ": empty workload file");
  bool has_arrival = false;
  if (lines[0] == "input_id,size,arrival_time_ms") {
    has_arrival = true;
  } else if (lines[0] != "input_id,size") {
    throw ParseError(path + ": line 1: expected header 'input_id,size[,arrival_time_ms]'");
  }

  Workload workload;
  double prev_arrival = 0.0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (lines[i].empty()) continue;
    const auto cells = split_csv_line(lines[i]);
    const std::size_t expected = has_arrival ? 3 : 2;
    if (cells.size() != expected) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(expected) + " columns, got " + std::to_string(cells.size()));
    }
    InputItem item;
    item.id = cells[0];
    if (item.id.empty()) {
      throw ParseError("line " + std::to_string(line_no) + ": empty input_id");
    }
    item.size = parse_required_ms(cells[1], "size", line_no);
    require_nonnegative(item.size, "size", line_no);
    if (has_arrival) {
      item.arrival_time_ms = parse_required_ms(cells[2], "arrival_time_ms", line_no);
      require_nonnegative(item.arrival_time_ms, "arrival_time_ms", line_no);
      if (item.arrival_time_ms < prev_arrival) {
        throw ParseError("line " + std::to_string(line_no) + ": arrival times must be nondecreasing");
      }
      prev_arrival = item.arrival_time_ms;
    }
    workload.items.push_back(std::move(item));
  }
  return workload;
}

std::vector<double> generate_arrivals(std::size_t n, ArrivalMode mode, double rate_per_s,
                                      std::uint64_t seed) {
  if (!(rate_per_s > 0.0)) {
    throw std::invalid_argument("rate_per_s must be positive");
  }
  const double mean_gap_ms = 1000.0 / rate_per_s;
  std::vector<double> times;
  times.reserve(n);
  if (mode == ArrivalMode::Fixed) {
    for (std::size_t k = 0; k < n; ++k) times.push_back(static_cast<double>(k) * mean_gap_ms);
    return times;
  }
  Rng rng(seed);
  double t = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    times.push_back(t);
    t += rng.exponential(mean_gap_ms);
  }
  return times;
}

}  // namespace placesim
