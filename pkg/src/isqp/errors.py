"""Exception types shared across the solver and the benchmark tools."""


class SolverError(Exception):
    """Base class for every failure raised by this package."""


class SingularMatrixError(SolverError):
    """A pivot fell below the floor during LU elimination."""


class NotPositiveDefiniteError(SolverError):
    """Cholesky factorization hit a pivot at or below its floor."""


class EvaluationFailure(SolverError):
    """A problem callback returned a non-finite value."""


class DegenerateConstraints(SolverError):
    """Active constraint gradients are linearly dependent at the current point."""


class MaxQpIterationsError(SolverError):
    """The active-set loop hit its iteration cap without certifying optimality."""


class NumericalBreakdown(SolverError):
    """A factorization or optimality check failed beyond recoverable tolerance."""


class CertificateViolation(SolverError):
    """A computed solution failed the inequality its derivation guarantees."""


class LineSearchStall(SolverError):
    """The step acceptance loop exhausted its trial budget."""


class UnknownProblemError(SolverError):
    """Requested benchmark problem is not in the registry."""


class GradientMismatch(SolverError):
    """Analytic gradients disagree with finite differences."""


class InconsistentRecordsError(SolverError):
    """Benchmark record sets do not cover identical problem/start pairs."""
