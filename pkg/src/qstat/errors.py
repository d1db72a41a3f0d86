"""Exception types raised by the engine."""


class QstatError(Exception):
    """Base class for domain errors (inconsistent or unsupported queries)."""


class FermionOverfill(QstatError):
    """More fermions than levels: Pauli exclusion leaves no allowed state."""


class StateSpaceTooLarge(QstatError):
    """The requested support exceeds the configured enumeration cap."""


class EmptyConditioning(QstatError):
    """No support vector satisfies a presence condition."""


class ZeroProbabilityDraw(QstatError):
    """Conditioning on a draw (or draw record) that has probability zero."""


class NoAcceptedTrials(QstatError):
    """Rejection sampling never produced the requested condition."""
