#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "placesim/types.hpp"

namespace placesim {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ArrivalMode { Fixed, Poisson };

// Loads a trace CSV with header
//   input_id,config,upld_ms,start_ms,start_type,comp_ms,iotup_ms,store_ms
// Empty cells mean "not applicable". Every row is validated; errors name the
// offending line.
std::vector<TraceRow> load_trace(const std::string& path);

// Loads a workload CSV with header input_id,size[,arrival_time_ms].
// Returns items in file order; arrival times of 0 when the column is absent.
Workload load_workload(const std::string& path);

// Arrival times in ms. Fixed mode: k * 1000/rate. Poisson mode: i.i.d.
// exponential gaps with mean 1000/rate, deterministic given seed.
std::vector<double> generate_arrivals(std::size_t n, ArrivalMode mode, double rate_per_s,
                                      std::uint64_t seed);

}  // namespace placesim
