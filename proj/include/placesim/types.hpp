#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace placesim {

// Placement target: the single edge executor or a cloud container memory size.
struct ContainerConfig {
  enum class Kind { Edge, Cloud };

  Kind kind = Kind::Edge;
  int memory_mb = 0;  // meaningful for Cloud only

  static ContainerConfig edge() { return {Kind::Edge, 0}; }
  static ContainerConfig cloud(int memory_mb) {
    if (memory_mb < 256 || memory_mb > 3008) {
      throw std::invalid_argument("cloud memory_mb out of range [256, 3008]: " +
                                  std::to_string(memory_mb));
    }
    return {Kind::Cloud, memory_mb};
  }

  bool is_edge() const { return kind == Kind::Edge; }
  bool is_cloud() const { return kind == Kind::Cloud; }

  friend bool operator==(const ContainerConfig&, const ContainerConfig&) = default;
  friend auto operator<=>(const ContainerConfig&, const ContainerConfig&) = default;
};

std::string to_string(const ContainerConfig& config);

// Parses "edge" or an integer MB value.
ContainerConfig parse_config(const std::string& text);

enum class StartType { Warm, Cold };

inline const char* to_string(StartType s) { return s == StartType::Warm ? "warm" : "cold"; }

// One task's feature record.
struct InputItem {
  std::string id;
  double size = 0.0;            // application-defined units (pixels, bytes)
  double arrival_time_ms = 0.0; // since simulation start
};

struct Workload {
  std::vector<InputItem> items;  // ordered by arrival_time_ms
  std::string app_label;
};

// One measured execution. Edge rows have no upld_ms; cloud rows have no
// iotup_ms. An absent iotup_ms on an edge row is legal and counts as 0.
struct TraceRow {
  std::string input_id;
  ContainerConfig config;
  std::optional<double> upld_ms;
  double start_ms = 0.0;
  StartType start_type = StartType::Warm;
  double comp_ms = 0.0;
  std::optional<double> iotup_ms;
  double store_ms = 0.0;
};

}  // namespace placesim
