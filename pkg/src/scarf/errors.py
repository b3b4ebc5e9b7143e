"""Exception types shared across the package."""


class ScarfError(Exception):
    """Base class for all package-specific errors."""


class SingularityError(ScarfError):
    """Evaluation requested at (or too close to) a lattice point x = k*a."""


class RegimeError(ScarfError):
    """Operation invoked for a coupling regime it does not support."""


class DegenerateRegimeError(RegimeError):
    """s = 1/2: the potential vanishes and the residue branches coincide."""


class ConsistencyError(ScarfError):
    """Inputs that must describe the same physical state disagree."""


class ConstructionError(ScarfError):
    """Polynomial recurrence broke down (zero pivot)."""


class JacobiDegeneracyError(ScarfError):
    """Jacobi three-term recurrence degenerated for exceptional parameters."""


class RootFindingError(ScarfError):
    """Root finder failed to converge or produced an inconsistent result."""


class BracketError(ScarfError):
    """Matching function does not change sign on the supplied bracket."""


class ContourError(ScarfError):
    """Contour placement or sampling is inadequate for the requested residue."""


class NumericError(ScarfError):
    """A numerical procedure failed its own convergence or sanity check."""
