"""Cost-oracle factories for spare-parts inventory and shift scheduling."""

from .inventory import (
    DemandTraceError,
    InventoryCost,
    InventoryModel,
    geometric_demands,
    inventory_cost,
    inventory_oracle,
    inventory_stream,
    load_demand_trace,
    uniform_demands,
)
from .scheduling import (
    PrefixDifferenceCost,
    SchedulingCost,
    SchedulingModel,
    ServiceLevel,
    erlang_b,
    erlang_c,
    erlang_service_level,
    from_prefix_sums,
    multimodular_to_lnatural,
    prefix_sum_domain,
    random_scheduling_model,
    scheduling_cost,
    scheduling_oracle,
    scheduling_stream,
    staffing,
    to_prefix_sums,
)

__all__ = [
    "DemandTraceError",
    "InventoryCost",
    "InventoryModel",
    "PrefixDifferenceCost",
    "SchedulingCost",
    "SchedulingModel",
    "ServiceLevel",
    "erlang_b",
    "erlang_c",
    "erlang_service_level",
    "from_prefix_sums",
    "geometric_demands",
    "inventory_cost",
    "inventory_oracle",
    "inventory_stream",
    "load_demand_trace",
    "multimodular_to_lnatural",
    "prefix_sum_domain",
    "random_scheduling_model",
    "scheduling_cost",
    "scheduling_oracle",
    "scheduling_stream",
    "staffing",
    "to_prefix_sums",
    "uniform_demands",
]
