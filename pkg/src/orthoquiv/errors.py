"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`OrthoQuivError`, which is itself a :class:`ValueError` so callers that
only care about "bad input" can catch that.
"""


class OrthoQuivError(ValueError):
    pass


class QuiverError(OrthoQuivError):
    pass


class DuplicateArrowId(QuiverError):
    pass


class UnknownVertex(QuiverError):
    pass


class UnknownVertexKind(QuiverError):
    pass


class UnpairedDualVertex(QuiverError):
    pass


class NotComposable(QuiverError):
    pass


class InvalidDecomposition(OrthoQuivError):
    pass


class GenusTooSmall(OrthoQuivError):
    pass


class InconsistentH0(OrthoQuivError):
    pass


class ShapeMismatch(OrthoQuivError):
    pass


class MissingForm(OrthoQuivError):
    pass


class SingularCayley(OrthoQuivError):
    pass


class InsufficientSamples(OrthoQuivError):
    pass


class UnsupportedRank(OrthoQuivError):
    pass


class TypeMismatch(OrthoQuivError):
    pass
