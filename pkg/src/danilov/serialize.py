"""Versioned structured documents (JSON text) and their parsers.

Every command writes one document ``{"format_version", "command", "r", "a",
"payload"}`` with sorted keys and two-space indentation.  Rationals are
always strings ``"num/den"`` (``"3/1"`` for integers) so nothing passes
through a float.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Sequence

from .divisor import Divisor, divisor_DXYZ, phi_table, tables, tau_table, xi_table
from .lattice import Cone, Context, Fan, ScaledPoint
from .stability import StabilityReport, Theta

FORMAT_VERSION = 1
RAY_NAMES_HEAD = ("E1",)


class FormatError(ValueError):
    pass


def rat(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(s: str) -> Fraction:
    if not isinstance(s, str) or s.count("/") != 1:
        raise FormatError(f"expected 'num/den', got {s!r}")
    num, den = s.split("/")
    try:
        value = Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational {s!r}") from exc
    if rat(value) != s:
        raise FormatError(f"rational {s!r} is not in lowest terms")
    return value


def rats(xs: Sequence) -> list[str]:
    return [rat(x) for x in xs]


def parse_rats(xs: Sequence[str]) -> tuple[Fraction, ...]:
    return tuple(parse_rat(x) for x in xs)


def ray_names(r: int) -> list[str]:
    return list(RAY_NAMES_HEAD) + [f"D{k}" for k in range(r + 1)]


def document(command: str, ctx: Context | None, payload: dict[str, Any]) -> str:
    doc = {
        "format_version": FORMAT_VERSION,
        "command": command,
        "r": ctx.r if ctx else None,
        "a": ctx.a if ctx else None,
        "payload": payload,
    }
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def read_document(text: str, command: str) -> tuple[Context | None, dict[str, Any]]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not a structured document: {exc}") from exc
    if doc.get("format_version") != FORMAT_VERSION:
        raise FormatError(f"unsupported format version {doc.get('format_version')!r}")
    if doc.get("command") != command:
        raise FormatError(f"expected a {command!r} document, got {doc.get('command')!r}")
    ctx = Context(doc["r"], doc["a"]) if doc.get("r") is not None else None
    return ctx, doc["payload"]


# fans


def fan_payload(fan: Fan) -> dict[str, Any]:
    return {
        "denominator": fan.ctx.r,
        "ray_names": ray_names(fan.ctx.r),
        "rays": [list(p) for p in fan.rays],
        "cones": sorted(sorted(fan.cone_rays(c)) for c in fan.cones),
    }


def dump_fan(fan: Fan) -> str:
    return document("fan", fan.ctx, fan_payload(fan))


def parse_fan(text: str) -> Fan:
    ctx, p = read_document(text, "fan")
    if p["denominator"] != ctx.r:
        raise FormatError("denominator does not match r")
    rays = tuple(ScaledPoint(*ray) for ray in p["rays"])
    cones = [Cone(tuple(rays[k] for k in triple)) for triple in p["cones"]]
    cones.sort(key=lambda c: c.generators)
    return Fan(ctx, rays, tuple(cones))


# divisors


def divisor_summary(ctx: Context) -> dict[str, Any]:
    """tau/xi/phi and every divisor family as exact :class:`Divisor` values."""
    t = tables(ctx)
    dx, dy, dz = divisor_DXYZ(ctx)
    out: dict[str, Any] = {
        "tau": tau_table(ctx),
        "xi": xi_table(ctx),
        "phi": phi_table(ctx),
    }
    for kind in "XYZR":
        out[kind] = tuple(t.divisor(kind, i) for i in range(ctx.r))
    out.update(DX=dx, DY=dy, DZ=dz)
    return out


def divisors_payload(ctx: Context) -> dict[str, Any]:
    s = divisor_summary(ctx)
    p: dict[str, Any] = {k: list(s[k]) for k in ("tau", "xi", "phi")}
    p["ray_names"] = ray_names(ctx.r)
    for kind in "XYZR":
        p[kind] = [rats(d.coeffs) for d in s[kind]]
    for kind in ("DX", "DY", "DZ"):
        p[kind] = rats(s[kind].coeffs)
    return p


def dump_divisors(ctx: Context) -> str:
    return document("divisors", ctx, divisors_payload(ctx))


def parse_divisors(text: str) -> tuple[Context, dict[str, Any]]:
    ctx, p = read_document(text, "divisors")
    out: dict[str, Any] = {k: tuple(p[k]) for k in ("tau", "xi", "phi")}
    for kind in "XYZR":
        out[kind] = tuple(Divisor(parse_rats(row)) for row in p[kind])
    for kind in ("DX", "DY", "DZ"):
        out[kind] = Divisor(parse_rats(p[kind]))
    return ctx, out


# theta


def theta_payload(ctx: Context, n: Sequence[Fraction], theta: Theta, phi: Sequence[int]) -> dict:
    return {
        "phi": list(phi),
        "chain": chain_text(phi),
        "n": rats(n),
        "theta": rats(theta.weights),
    }


def chain_text(phi: Sequence[int], strict: bool = True) -> str:
    sep = " < " if strict else " <= "
    return sep.join(f"n_{p}" for p in phi)


def dump_theta(ctx: Context, n: Sequence[Fraction], theta: Theta, phi: Sequence[int]) -> str:
    return document("theta", ctx, theta_payload(ctx, n, theta, phi))


def parse_theta(text: str) -> tuple[Context, tuple[Fraction, ...], Theta]:
    ctx, p = read_document(text, "theta")
    return ctx, parse_rats(p["n"]), Theta(parse_rats(p["theta"]))


# stability reports


def report_payload(rep: StabilityReport) -> dict[str, Any]:
    return {
        "verdict": rep.verdict,
        "witness": list(rep.witness) if rep.witness is not None else None,
        "value": rat(rep.value) if rep.value is not None else None,
    }


def parse_report(p: dict[str, Any]) -> StabilityReport:
    witness = tuple(p["witness"]) if p["witness"] is not None else None
    value = parse_rat(p["value"]) if p["value"] is not None else None
    return StabilityReport(p["verdict"], witness, value)
