"""Exception hierarchy.

Input problems derive from :class:`GeometryError`; failures of a runtime
certificate (which indicate an arithmetic or implementation bug rather than
bad input) derive from :class:`CertificateError`.
"""


class GeometryError(Exception):
    pass


class CertificateError(GeometryError):
    pass


class SingularMatrix(GeometryError):
    pass


class ConvergenceFailure(GeometryError):
    pass


class NotPositiveDefinite(GeometryError):
    pass


class OriginNotInterior(GeometryError):
    pass


class Unbounded(GeometryError):
    pass


class EnumerationTooLarge(GeometryError):
    pass


class CenterNotInterior(GeometryError):
    pass


class DegenerateBody(GeometryError):
    pass


class DegenerateInput(GeometryError):
    pass


class NotMember(GeometryError):
    pass


class InputLacksUnitBall(GeometryError):
    pass


class SpanFailure(GeometryError):
    pass


class GenerationFailed(GeometryError):
    pass


class InclusionPreconditionFailed(GeometryError):
    pass


class CertificateViolated(CertificateError):
    pass


class CenterVerificationFailed(CertificateError):
    pass


class PropositionViolated(CertificateError):
    pass
