#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "placesim/workload.hpp"

using namespace placesim;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path;
}

const char* kHeader = "input_id,config,upld_ms,start_ms,start_type,comp_ms,iotup_ms,store_ms\n";

}  // namespace

TEST_CASE("load_trace parses a single cloud row verbatim") {
  const auto path = write_temp("placesim_one_row.csv",
                               std::string(kHeader) + "a1,1024,180,163,warm,500.5,,584\n");
  const auto rows = load_trace(path.string());
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].input_id == "a1");
  CHECK(rows[0].config == ContainerConfig::cloud(1024));
  CHECK(*rows[0].upld_ms == 180.0);
  CHECK(rows[0].start_ms == 163.0);
  CHECK(rows[0].start_type == StartType::Warm);
  CHECK(rows[0].comp_ms == 500.5);
  CHECK_FALSE(rows[0].iotup_ms.has_value());
  CHECK(rows[0].store_ms == 584.0);
}

TEST_CASE("load_trace rejects a negative duration, naming the line") {
  const auto path = write_temp("placesim_bad_row.csv",
                               std::string(kHeader) + "a1,1024,180,163,warm,500,,584\n" +
                                   "a2,1024,180,163,warm,-5,,584\n");
  try {
    load_trace(path.string());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    CHECK(std::string(e.what()).find("comp_ms") != std::string::npos);
  }
}

TEST_CASE("load_trace validates row shape") {
  CHECK_THROWS_AS(load_trace((std::filesystem::temp_directory_path() / "nope.csv").string()),
                  ParseError);
  // edge row with upld_ms
  auto path = write_temp("placesim_edge_upld.csv",
                         std::string(kHeader) + "a1,edge,12,0,warm,500,25,583\n");
  CHECK_THROWS_AS(load_trace(path.string()), ParseError);
  // cloud row with iotup_ms
  path = write_temp("placesim_cloud_iotup.csv",
                    std::string(kHeader) + "a1,1024,180,163,warm,500,25,584\n");
  CHECK_THROWS_AS(load_trace(path.string()), ParseError);
  // missing iotup on edge rows is legal (IR exception)
  path = write_temp("placesim_edge_ok.csv", std::string(kHeader) + "a1,edge,,0,warm,500,,583\n");
  CHECK(load_trace(path.string()).size() == 1);
}

// Column sums of the bundled 20-row fixture, frozen from an independent
// text-processing pass over the CSV (split on commas, sum numeric cells).
TEST_CASE("bundled fixture matches its per-column checksums") {
  const std::string path = std::string(PLACESIM_DATA_DIR) + "/fd_trace.csv";

  // Independent parse: raw line splitting, no TraceRow machinery.
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);  // header
  double sums[5] = {0, 0, 0, 0, 0};  // upld, start, comp, iotup, store
  int n_rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++n_rows;
    std::stringstream ss(line);
    std::string cell;
    int col = 0;
    while (std::getline(ss, cell, ',')) {
      const int slot = col == 2 ? 0 : col == 3 ? 1 : col == 5 ? 2 : col == 6 ? 3 : col == 7 ? 4 : -1;
      if (slot >= 0 && !cell.empty()) sums[slot] += std::stod(cell);
      ++col;
    }
  }
  CHECK(n_rows == 20);
  CHECK(sums[0] == doctest::Approx(3000.0).epsilon(1e-12));
  CHECK(sums[1] == doctest::Approx(6456.0).epsilon(1e-12));
  CHECK(sums[2] == doctest::Approx(20869.76).epsilon(1e-12));
  CHECK(sums[3] == doctest::Approx(125.0).epsilon(1e-12));
  CHECK(sums[4] == doctest::Approx(11675.0).epsilon(1e-12));

  // The structured loader agrees with the raw pass.
  const auto rows = load_trace(path);
  REQUIRE(rows.size() == 20);
  double upld = 0, start = 0, comp = 0, iotup = 0, store = 0;
  for (const auto& row : rows) {
    upld += row.upld_ms.value_or(0.0);
    start += row.start_ms;
    comp += row.comp_ms;
    iotup += row.iotup_ms.value_or(0.0);
    store += row.store_ms;
  }
  CHECK(upld == doctest::Approx(sums[0]).epsilon(1e-12));
  CHECK(start == doctest::Approx(sums[1]).epsilon(1e-12));
  CHECK(comp == doctest::Approx(sums[2]).epsilon(1e-12));
  CHECK(iotup == doctest::Approx(sums[3]).epsilon(1e-12));
  CHECK(store == doctest::Approx(sums[4]).epsilon(1e-12));
}

TEST_CASE("load_workload reads ids, sizes and optional arrivals") {
  auto path = write_temp("placesim_wl.csv", "input_id,size,arrival_time_ms\na,10,0\nb,20,250\n");
  const auto wl = load_workload(path.string());
  REQUIRE(wl.items.size() == 2);
  CHECK(wl.items[1].arrival_time_ms == 250.0);

  path = write_temp("placesim_wl_noarrival.csv", "input_id,size\na,10\nb,20\n");
  CHECK(load_workload(path.string()).items.size() == 2);

  path = write_temp("placesim_wl_decreasing.csv",
                    "input_id,size,arrival_time_ms\na,10,100\nb,20,50\n");
  CHECK_THROWS_AS(load_workload(path.string()), ParseError);
}

TEST_CASE("fixed arrivals at four per second") {
  const auto times = generate_arrivals(3, ArrivalMode::Fixed, 4.0, 0);
  REQUIRE(times.size() == 3);
  CHECK(times[0] == 0.0);
  CHECK(times[1] == 250.0);
  CHECK(times[2] == 500.0);
}

TEST_CASE("arrival edge cases") {
  CHECK(generate_arrivals(0, ArrivalMode::Poisson, 4.0, 1).empty());
  CHECK_THROWS_AS(generate_arrivals(3, ArrivalMode::Fixed, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_arrivals(3, ArrivalMode::Poisson, -1.0, 1), std::invalid_argument);
}

TEST_CASE("poisson arrivals are seeded, nondecreasing, and mean-correct") {
  const auto a = generate_arrivals(10000, ArrivalMode::Poisson, 4.0, 7);
  const auto b = generate_arrivals(10000, ArrivalMode::Poisson, 4.0, 7);
  CHECK(a == b);
  CHECK(generate_arrivals(10000, ArrivalMode::Poisson, 4.0, 8) != a);
  CHECK(std::is_sorted(a.begin(), a.end()));

  std::vector<double> gaps;
  for (std::size_t i = 1; i < a.size(); ++i) gaps.push_back(a[i] - a[i - 1]);
  const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / gaps.size();
  CHECK(std::abs(mean - 250.0) / 250.0 < 0.05);
}

TEST_CASE("poisson gaps pass a KS test against the exponential") {
  const auto a = generate_arrivals(10001, ArrivalMode::Poisson, 4.0, 42);
  std::vector<double> gaps;
  for (std::size_t i = 1; i < a.size(); ++i) gaps.push_back(a[i] - a[i - 1]);
  std::sort(gaps.begin(), gaps.end());
  const double n = static_cast<double>(gaps.size());
  double d = 0.0;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const double cdf = 1.0 - std::exp(-gaps[i] / 250.0);
    d = std::max(d, std::abs(cdf - static_cast<double>(i + 1) / n));
    d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
  }
  // 1% critical value for the KS statistic: 1.63 / sqrt(n).
  CHECK(d < 1.63 / std::sqrt(n));
}
