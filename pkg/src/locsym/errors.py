"""Exception types shared across the package."""


class LocsymError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(LocsymError):
    """Malformed or schema-violating run configuration."""


class PhysicsError(LocsymError):
    """Input violates a physical precondition (e.g. non-propagating asymptotics)."""


class ZeroCurrentError(LocsymError):
    """Field carries no probability current, the invariant mapping collapses.

    Raised when |J| is below the current floor. Zero-current states (e.g.
    symmetric two-sided illumination) are exactly the regime where the
    amplitude mapping A(x_bar) = (q_tilde A - q A*) / J degenerates to 0/0.
    """
