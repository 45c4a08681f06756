from __future__ import annotations

import math
from enum import StrEnum
from fractions import Fraction
from typing import Any, Literal

import sympy
from pydantic import BaseModel, ConfigDict, Field, field_validator

from canonical_heights.core.curve import AffinePoint, WeierstrassCurve, as_rational, format_rational, new_curve

# --- 1. Certificates ---


class GammaKind(StrEnum):
    FULL_GROUP_B6_NEGATIVE = "FullGroupB6Negative"
    IDENTITY_COMPONENT = "IdentityComponent"
    SHIFTED_FULL_GROUP = "ShiftedFullGroup"


class GammaCertificate(BaseModel):
    """Which subgroup of E(R) keeps x away from 0, and the shift that makes it so."""

    model_config = ConfigDict(frozen=True)

    kind: GammaKind
    shift: int = 0
    witness: float


class ShiftCertificate(BaseModel):
    """Shift r with F(-r) certifying that no point over the place has x = -r.

    ``place`` is ``"real"`` or the prime p. Over R the witness is negative; over Q_p it is a
    nonzero non-square.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    r: int
    place: Literal["real"] | int
    witness: Fraction
    reason: str


# --- 2. Iteration traces ---


class TraceStep(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    t: float
    W: float
    Z: float
    log_abs_Z: float


class IterationTrace(BaseModel):
    model_config = ConfigDict(frozen=True)

    steps: list[TraceStep] = []
    observed_log_bound: float = 0.0
    observed_t_bound: float = 0.0


# --- 3. Local and global results ---


class LocalHeightResult(BaseModel):
    """Archimedean local height: lambda = 1/2 log|x'(P)| + mu/8 on the shifted model."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lambda_: float = Field(alias="lambda")
    mu: float
    iterations: int = Field(ge=1)
    truncation_error_bound: float = Field(ge=0)
    certificate: GammaCertificate
    shift: ShiftCertificate
    trace: IterationTrace | None = None


class PadicHeightResult(BaseModel):
    """p-adic local height as ``coefficient * log p``."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    prime: int
    coefficient: Fraction
    mu_coefficient: Fraction
    exact: bool
    tail_bound_coefficient: Fraction
    iterations: int = Field(ge=1)
    certificate: ShiftCertificate | None = None
    valuation_trace: list[int] = []
    termination: Literal["formal_group", "good_reduction"] | None = None
    precision_k: int

    @property
    def value(self) -> float:
        return float(self.coefficient) * math.log(self.prime)


class GlobalHeightResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    total: float
    archimedean: float
    finite_parts: dict[int, Fraction] = {}
    error_bound: float = Field(0.0, ge=0)
    exact_primes: list[int] = []
    torsion_order: int | None = None
    real: LocalHeightResult | None = None
    padic: dict[int, PadicHeightResult] = {}


# --- 4. Jobs ---


def _parse_rational_list(value: Any, size: int, what: str) -> tuple[str, ...]:
    if isinstance(value, str):
        value = value.split(",")
    if not isinstance(value, (list, tuple)) or len(value) != size:
        raise ValueError(f"{what} needs exactly {size} rationals")
    items = []
    for item in value:
        if isinstance(item, float) or isinstance(item, bool):
            raise ValueError(f"{what} entries must be integers or strings like '3/4', got {item!r}")
        text = str(item).strip()
        as_rational(text)
        items.append(text)
    return tuple(items)


class JobSpec(BaseModel):
    """One height computation: curve, point, place and iteration controls."""

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    curve: tuple[str, str, str, str, str]
    point: tuple[str, str]
    place: str = "global"
    tol: float | None = Field(None, gt=0)
    n_max: int | None = Field(None, ge=1, alias="max_iter")
    trace: bool = False

    @field_validator("curve", mode="before")
    @classmethod
    def _curve(cls, value: Any) -> tuple[str, ...]:
        return _parse_rational_list(value, 5, "curve")

    @field_validator("point", mode="before")
    @classmethod
    def _point(cls, value: Any) -> tuple[str, ...]:
        return _parse_rational_list(value, 2, "point")

    @field_validator("place")
    @classmethod
    def _place(cls, value: str) -> str:
        value = value.strip().lower()
        if value in ("real", "global"):
            return value
        if value.startswith("p:"):
            digits = value[2:]
            if digits.isdigit() and sympy.isprime(int(digits)):
                return f"p:{int(digits)}"
            raise ValueError(f"place {value!r} does not name a prime")
        raise ValueError("place must be real, global or p:<prime>")

    @property
    def prime(self) -> int | None:
        return int(self.place[2:]) if self.place.startswith("p:") else None

    def build_curve(self) -> WeierstrassCurve:
        return new_curve(*self.curve)

    def build_point(self) -> AffinePoint:
        return AffinePoint(as_rational(self.point[0]), as_rational(self.point[1]))


class CertificateDocument(BaseModel):
    r: int
    reason: str
    witness: str


class JobResult(BaseModel):
    """Wire document emitted for a successful job. Rationals are strings "n" or "n/d"."""

    model_config = ConfigDict(populate_by_name=True)

    status: Literal["ok"] = "ok"
    line: int | None = None
    place: str
    lambda_: float | None = Field(None, alias="lambda")
    coefficient: str | None = None
    log_p: float | None = None
    total: float | None = None
    archimedean: float | None = None
    finite_parts: dict[str, str] | None = None
    torsion_order: int | None = None
    exact: bool
    iterations: int
    error_bound: float
    certificate: CertificateDocument | None = None
    trace: list[dict[str, Any]] | None = None


class JobError(BaseModel):
    status: Literal["error"] = "error"
    line: int | None = None
    kind: str
    error: str
    exit_code: int


def certificate_document(certificate: ShiftCertificate) -> CertificateDocument:
    return CertificateDocument(
        r=certificate.r, reason=certificate.reason, witness=format_rational(certificate.witness)
    )
