"""Exact wiretap-protocol toolkit: finite fields, exact distributions, seeded
and affine extractors, wiretap protocols with an exhaustive verifier, outer
channel codes and network-coding simulation."""

from ._core import (
    DEFAULT_CAP,
    Code,
    Dist,
    Field,
    Graph,
    LinearExtractor,
    Network,
    Protocol,
    WalkExtractor,
    WtkError,
    compose,
    one_time_pad,
    protocol_from_config,
    rank,
    run_cli,
    sfext_error_bound,
    statistical_distance,
    verify,
)

__all__ = [
    "DEFAULT_CAP",
    "Code",
    "Dist",
    "Field",
    "Graph",
    "LinearExtractor",
    "Network",
    "Protocol",
    "WalkExtractor",
    "WtkError",
    "compose",
    "one_time_pad",
    "protocol_from_config",
    "rank",
    "run_cli",
    "sfext_error_bound",
    "statistical_distance",
    "verify",
]
