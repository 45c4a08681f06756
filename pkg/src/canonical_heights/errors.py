from typing import ClassVar, Literal

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_RESOURCE = 3
EXIT_IO = 4


class HeightError(Exception):
    """Base class for every failure the height computations report to a caller.

    ``category`` decides how a front end surfaces the failure: ``"domain"`` errors are
    problems with the input (singular curve, point off the curve, ...), ``"resource"``
    errors mean a computation ran out of some budget (precision, iterations, factoring).
    ``detail`` is the user-facing message.
    """

    category: ClassVar[Literal["domain", "resource"]] = "domain"

    def __init__(self, detail: str):
        self.detail = detail
        super().__init__(detail)

    @property
    def exit_code(self) -> int:
        return EXIT_DOMAIN if self.category == "domain" else EXIT_RESOURCE

    @property
    def kind(self) -> str:
        return type(self).__name__


class SingularCurve(HeightError):
    pass


class PointNotOnCurve(HeightError):
    pass


class PointAtInfinity(HeightError):
    pass


class TwoTorsion(HeightError):
    """The duplication denominator vanished, so 2P is the point at infinity."""


class TorsionCollapse(HeightError):
    pass


class NonIntegralModel(HeightError):
    pass


class NoAdmissibleShift(HeightError):
    pass


class PadicDivisionByZero(HeightError, ZeroDivisionError):
    pass


class InvalidJob(HeightError):
    pass


class PrecisionExhausted(HeightError):
    category = "resource"


class FactorizationOverflow(HeightError):
    category = "resource"


class RootIsolationFailure(HeightError):
    category = "resource"


class ZVanished(HeightError):
    """|Z| underflowed to zero: the shift is not admissible or the point left the subgroup."""

    category = "resource"
