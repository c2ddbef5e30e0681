#include "placesim/pricing.hpp"

#include <cmath>
#include <stdexcept>

namespace placesim {

double billed_ms(double comp_ms, const PricingPolicy& policy) {
  if (!(comp_ms >= 0.0) || !std::isfinite(comp_ms)) {
    throw std::invalid_argument("comp_ms must be finite and >= 0");
  }
  const long long rounded = std::llround(comp_ms);
  const long long quantum = policy.quantum_ms;
  const long long quanta = (rounded + quantum - 1) / quantum;
  return static_cast<double>(quanta < 1 ? quantum : quanta * quantum);
}

double cost(double comp_ms, const ContainerConfig& config, const PricingPolicy& policy) {
  if (!(comp_ms >= 0.0) || !std::isfinite(comp_ms)) {
    throw std::invalid_argument("comp_ms must be finite and >= 0");
  }
  if (config.is_edge()) return 0.0;
  const double gb = static_cast<double>(config.memory_mb) / policy.gb_divisor_mb;
  return (billed_ms(comp_ms, policy) / 1000.0) * gb * policy.usd_per_gb_s + policy.per_request_usd;
}

}  // namespace placesim
