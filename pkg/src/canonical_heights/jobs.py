"""Dispatch of JobSpecs to the height computations and their JSON result documents."""

import json
import logging
import math
from collections.abc import Iterable, Iterator
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from canonical_heights.config import get_settings
from canonical_heights.core.curve import format_rational
from canonical_heights.errors import HeightError, InvalidJob
from canonical_heights.heights.global_height import canonical_height
from canonical_heights.heights.padic_place import lambda_padic
from canonical_heights.heights.real_place import lambda_real
from canonical_heights.models import JobError, JobResult, JobSpec, certificate_document

logger = logging.getLogger(__name__)


def _validation_message(e: ValidationError) -> str:
    return "; ".join(f"{'.'.join(str(part) for part in err['loc']) or 'job'}: {err['msg']}" for err in e.errors())


def parse_job(payload: dict[str, Any]) -> JobSpec:
    try:
        return JobSpec.model_validate(payload)
    except ValidationError as e:
        raise InvalidJob(_validation_message(e)) from e


def run_job(spec: JobSpec) -> JobResult:
    """Run one job; HeightError subclasses propagate to the caller."""
    curve = spec.build_curve()
    P = spec.build_point()
    tol = spec.tol if spec.tol is not None else get_settings().tol

    if spec.place == "real":
        result = lambda_real(curve, P, tol, spec.n_max, trace=spec.trace)
        trace = [step.model_dump() for step in result.trace.steps] if result.trace else None
        return JobResult(
            place="real",
            lambda_=result.lambda_,
            exact=False,
            iterations=result.iterations,
            error_bound=result.truncation_error_bound,
            certificate=certificate_document(result.shift),
            trace=trace,
        )

    if spec.prime is not None:
        p = spec.prime
        result = lambda_padic(curve, P, p, spec.n_max)
        trace = [{"n": n, "v_Z": v} for n, v in enumerate(result.valuation_trace)] if spec.trace else None
        return JobResult(
            place=spec.place,
            coefficient=format_rational(result.coefficient),
            log_p=math.log(p),
            exact=result.exact,
            iterations=result.iterations,
            error_bound=float(result.tail_bound_coefficient) * math.log(p),
            certificate=certificate_document(result.certificate) if result.certificate else None,
            trace=trace,
        )

    result = canonical_height(curve, P, tol, real_max_iter=spec.n_max, padic_max_iter=spec.n_max)
    return JobResult(
        place="global",
        lambda_=result.total,
        total=result.total,
        archimedean=result.archimedean,
        finite_parts={str(p): format_rational(c) for p, c in result.finite_parts.items()},
        torsion_order=result.torsion_order,
        exact=result.torsion_order is not None or len(result.exact_primes) == len(result.padic),
        iterations=result.real.iterations if result.real else 1,
        error_bound=result.error_bound,
        certificate=certificate_document(result.real.shift) if result.real else None,
    )


def error_document(e: HeightError, line: int | None = None) -> JobError:
    return JobError(line=line, kind=e.kind, error=e.detail, exit_code=e.exit_code)


def dump(document: JobResult | JobError) -> str:
    return json.dumps(document.model_dump(by_alias=True, exclude_none=True), separators=(",", ":"))


def run_lines(lines: Iterable[str]) -> Iterator[JobResult | JobError]:
    """One result or error document per non-blank input line, in order."""
    for number, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        try:
            try:
                payload = json.loads(raw)
            except json.JSONDecodeError as e:
                raise InvalidJob(f"malformed JSON: {e.msg}") from e
            if not isinstance(payload, dict):
                raise InvalidJob("each line must be a JSON object")
            yield run_job(parse_job(payload)).model_copy(update={"line": number})
        except HeightError as e:
            logger.warning("Batch line %s failed: %s", number, e.detail)
            yield error_document(e, line=number)


def run_batch(path: Path | str) -> Iterator[JobResult | JobError]:
    """Stream results for a JSONL file of JobSpecs. OSError propagates (exit 4 in the CLI)."""
    with open(path, encoding="utf-8") as handle:
        yield from run_lines(handle)
