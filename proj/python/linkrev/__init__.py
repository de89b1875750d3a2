"""Link reversal routing simulator and verifier."""

from ._linkrev import (
    LinkrevError,
    Scenario,
    ScenarioSyntaxError,
    all_connected_topologies,
    enumerate,
    hand_picked_scenarios,
    parse_scenario,
    random_partition_scenario,
    random_void_scenario,
    run,
    running_example,
    scheme_names,
    verify,
)

__all__ = [
    "LinkrevError",
    "Scenario",
    "ScenarioSyntaxError",
    "all_connected_topologies",
    "enumerate",
    "hand_picked_scenarios",
    "load_scenario",
    "parse_scenario",
    "random_partition_scenario",
    "random_void_scenario",
    "run",
    "running_example",
    "scheme_names",
    "verify",
]


def load_scenario(path):
    with open(path, encoding="utf-8") as f:
        return parse_scenario(f.read())
