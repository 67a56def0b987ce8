from __future__ import annotations


class DigraphError(ValueError):
    """Base class for every domain error raised by digext."""

    kind = "domain-error"


class InputError(DigraphError):
    kind = "input-error"


class UnsupportedSizeError(DigraphError):
    kind = "unsupported-size"


class ShardRequiredError(DigraphError):
    """Raised when an enumeration is too large to run without sharding."""

    kind = "shard-required"

    def __init__(self, message: str, required_shards: int):
        super().__init__(message)
        self.required_shards = required_shards


class InfeasiblePartitionError(DigraphError):
    kind = "infeasible-partition"


class PlanError(DigraphError):
    kind = "plan-error"
