from _placesim import (  # noqa: F401
    ContainerConfig,
    GBRTModel,
    LinearModel,
    PerfModelBundle,
    PricingPolicy,
    billed_ms,
    cost,
    default_config_universe,
    fit_gbrt,
    fit_linear,
    fit_mean,
    generate_arrivals,
    mape,
    simulate,
    train,
)

__all__ = [
    "ContainerConfig",
    "GBRTModel",
    "LinearModel",
    "PerfModelBundle",
    "PricingPolicy",
    "billed_ms",
    "cost",
    "default_config_universe",
    "fit_gbrt",
    "fit_linear",
    "fit_mean",
    "generate_arrivals",
    "mape",
    "simulate",
    "train",
]
