"""Exception hierarchy for the postselect package."""


class PostselectError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidWitness(PostselectError):
    """A witness fails its structural checks (norms, projector algebra, Kraus completeness)."""


class DegeneratePostselection(PostselectError):
    """Success probability is (numerically) zero: the postselected ensemble is empty."""


class PolygonViolation(PostselectError):
    """Requested magnitudes violate the polygon inequalities."""


class ClosureFailure(PostselectError):
    """Internal polygon-closure construction missed tolerance on valid input (bug signal)."""


class NormViolation(PostselectError):
    """Sum of amplitude magnitudes exceeds 1, so no unit-vector factorization exists."""


class InfeasibleScenario(PostselectError):
    """Scenario fails the projective feasibility inequalities."""


class RegionViolation(PostselectError):
    """(T, S, n) lies outside the achievable region."""


class SingularSystem(PostselectError):
    """Cone decomposition linear system is degenerate (n = 2: the extreme rays coincide)."""


class SearchBudgetExhausted(PostselectError):
    """Random search produced no sample satisfying its constraints."""
