from typing import Any

from canonical_heights.app import mcp
from canonical_heights.core.curve import AffinePoint, WeierstrassCurve, require_on_curve
from canonical_heights.heights.global_height import naive_height_limit, order_check
from canonical_heights.jobs import parse_job, run_job


def _curve_and_point(curve: list[str], point: list[str]) -> tuple[WeierstrassCurve, AffinePoint]:
    spec = parse_job({"curve": curve, "point": point, "place": "global"})
    E, P = spec.build_curve(), spec.build_point()
    require_on_curve(E, P)
    return E, P


def _run(payload: dict[str, Any]) -> dict[str, Any]:
    payload = {key: value for key, value in payload.items() if value is not None}
    return run_job(parse_job(payload)).model_dump(by_alias=True, exclude_none=True)


@mcp.tool()
async def local_height_real(
    curve: list[str],
    point: list[str],
    tol: float | None = None,
    max_iter: int | None = None,
    trace: bool = False,
) -> dict[str, Any]:
    """
    Archimedean local height of a point, by the duplication series.

    :param curve: The five coefficients [a1, a2, a3, a4, a6] as strings ("3", "-7/4").
    :param point: The affine point [x, y] as strings.
    :param tol: Truncation tolerance (default from CANONICAL_HEIGHTS_TOL, 1e-12).
    :param max_iter: Iteration cap for the series (default 64).
    :param trace: Include (n, t, W, Z, log|Z|) for every step.
    :return: Result document with lambda, iterations, error_bound and the shift certificate.
    """
    return _run({"curve": curve, "point": point, "place": "real", "tol": tol, "n_max": max_iter, "trace": trace})


@mcp.tool()
async def local_height_padic(
    curve: list[str],
    point: list[str],
    prime: int,
    max_iter: int | None = None,
    trace: bool = False,
) -> dict[str, Any]:
    """
    p-adic local height of a point as an exact rational multiple of log p.

    The curve must have integer coefficients.

    :param curve: The five coefficients [a1, a2, a3, a4, a6] as integer strings.
    :param point: The affine point [x, y] as strings.
    :param prime: The prime p.
    :param max_iter: Iteration cap for the series (default 40).
    :param trace: Include the valuations v_p(Z_n).
    :return: Result document with coefficient ("n/d"), log_p, exact and the shift certificate.
    """
    return _run({"curve": curve, "point": point, "place": f"p:{prime}", "n_max": max_iter, "trace": trace})


@mcp.tool()
async def global_height(
    curve: list[str],
    point: list[str],
    tol: float | None = None,
    max_iter: int | None = None,
) -> dict[str, Any]:
    """
    Canonical height over Q: the archimedean height plus every contributing p-adic height.

    :param curve: The five coefficients [a1, a2, a3, a4, a6] as integer strings.
    :param point: The affine point [x, y] as strings.
    :param tol: Truncation tolerance for the real series.
    :param max_iter: Iteration cap applied to every place.
    :return: Result document with total, archimedean, finite_parts (prime -> coefficient of log p)
        and torsion_order for torsion points (height 0).
    """
    return _run({"curve": curve, "point": point, "place": "global", "tol": tol, "n_max": max_iter})


@mcp.tool()
async def naive_height(curve: list[str], point: list[str], doublings: int = 8) -> dict[str, Any]:
    """
    Naive-height approximation 4^-n * 1/2 * log H(x(2^n P)), computed with exact doubling.

    :param curve: The five coefficients [a1, a2, a3, a4, a6] as strings.
    :param point: The affine point [x, y] as strings.
    :param doublings: n, between 0 and 10.
    :return: {"doublings": n, "value": approximation}.
    """
    E, P = _curve_and_point(curve, point)
    return {"doublings": doublings, "value": naive_height_limit(E, P, doublings)}


@mcp.tool()
async def point_order(curve: list[str], point: list[str], max_order: int = 16) -> dict[str, Any]:
    """
    Order of a point if it is torsion of order at most max_order.

    :param curve: The five coefficients [a1, a2, a3, a4, a6] as strings.
    :param point: The affine point [x, y] as strings.
    :param max_order: Largest order tried.
    :return: {"order": n} or {"order": null} when no multiple up to max_order is the identity.
    """
    E, P = _curve_and_point(curve, point)
    return {"order": order_check(E, P, max_order)}
