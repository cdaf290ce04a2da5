"""Exception types shared across the package."""


class ZoneMpcError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(ZoneMpcError, ValueError):
    """A physical parameter or numeric argument is out of its valid domain."""


class ModelConfigError(ZoneMpcError, ValueError):
    """A building description is internally inconsistent (e.g. missing adjacency)."""


class ComponentNotFoundError(ZoneMpcError, KeyError):
    """Requested door/window/heater component does not exist."""


class IntegrationDivergenceError(ZoneMpcError, RuntimeError):
    """Time integration produced a non-finite temperature."""

    def __init__(self, zone_index: int, t: float):
        self.zone_index = zone_index
        self.t = t
        super().__init__(
            f"integration diverged: non-finite temperature in zone index "
            f"{zone_index} at t={t:.6g} s"
        )


class InvalidPartitionError(ZoneMpcError, ValueError):
    """Subsystem partition does not cover the state indices disjointly."""


class InvalidConfigError(ZoneMpcError, ValueError):
    """Controller or run configuration violates its invariants."""


class IllPosedWeightsError(ZoneMpcError, ValueError):
    """Weight matrices make the optimization Hessian singular."""


class CoordinationError(ZoneMpcError, RuntimeError):
    """A local controller is missing required neighbor information."""


class SolverFailureError(ZoneMpcError, RuntimeError):
    """A controller solve failed mid-run; carries the step index."""

    def __init__(self, step: int, message: str):
        self.step = step
        super().__init__(f"solver failure at step {step}: {message}")


class UnstableMatrixError(ZoneMpcError, ValueError):
    """Matrix has spectral radius >= 1 where a stable one is required."""


class InvalidRecordError(ZoneMpcError, ValueError):
    """Simulation record is empty or malformed."""
