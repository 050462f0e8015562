"""Exception and warning types shared across the toolkit."""


class PatchlabError(Exception):
    """Base class for all toolkit-specific failures."""


class NonSimpleCurve(PatchlabError):
    """The sampled boundary self-intersects, degenerates, or is about to.

    Raised when the discrete metric vanishes, the arc-chord ratio exceeds
    the configured cap, or the tangent winding differs from one full turn.
    """


class GridTooCoarse(PatchlabError):
    """Position samples carry too much energy in the top of the spectrum."""


class DegenerateCurve(PatchlabError):
    """Two distinct nodes nearly coincide; pairwise ratios are meaningless."""


class ClosureViolated(PatchlabError):
    """Intrinsic data (g, kappa) does not describe a closed curve."""


class ClosureSolveFailed(PatchlabError):
    """The Newton iteration for the closure correction did not converge."""


class FeatureUnresolved(PatchlabError):
    """The requested curvature feature is too narrow for the grid."""


class MissingHistory(PatchlabError):
    """A diagnostic needs per-snapshot data the trajectory did not record."""


class MalformedFile(PatchlabError):
    """A snapshot or config file could not be parsed or fails validation."""


class ConfigError(PatchlabError):
    """An experiment configuration is structurally invalid."""


class RoughCurvature(UserWarning):
    """Curvature has a heavy spectral tail; quadrature accuracy degrades."""
