#pragma once

#include "placesim/types.hpp"

namespace placesim {

// Quantized GB-second pricing. Edge executions cost nothing.
struct PricingPolicy {
  double usd_per_gb_s = 1.667e-6;
  int quantum_ms = 100;
  double per_request_usd = 0.0;
  int gb_divisor_mb = 1024;
};

// Billable duration: round to the nearest ms, then up to the next quantum.
// 0 ms bills one full quantum.
double billed_ms(double comp_ms, const PricingPolicy& policy);

double cost(double comp_ms, const ContainerConfig& config, const PricingPolicy& policy);

}  // namespace placesim
