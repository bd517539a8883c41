"""Human-readable text, DOT and SVG renderings.  All output is deterministic."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence
from xml.sax.saxutils import escape

from .divisor import Divisor, tables
from .lattice import Context, Fan
from .quiver import mckay_quiver
from .serialize import chain_text, divisor_summary, ray_names
from .stability import Theta


def fmt(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_vec(xs: Sequence, brackets: str = "()") -> str:
    return brackets[0] + ", ".join(fmt(x) for x in xs) + brackets[1]


def fan_text(fan: Fan) -> str:
    r = fan.ctx.r
    names = ray_names(r)
    lines = [
        f"fan of 1/{r}(1,{fan.ctx.a},{r - fan.ctx.a}): {len(fan.rays)} rays, {len(fan.cones)} cones",
        f"rays (coordinates over {r}):",
    ]
    width = max(map(len, names))
    lines += [f"  {name:<{width}}  {fmt_vec(p)}" for name, p in zip(names, fan.rays)]
    lines.append("cones:")
    triples = sorted(sorted(fan.cone_rays(c)) for c in fan.cones)
    lines += ["  " + " ".join(names[k] for k in t) for t in triples]
    return "\n".join(lines) + "\n"


def divisors_text(ctx: Context, checks: Sequence[tuple[str, bool]]) -> str:
    s = divisor_summary(ctx)
    lines = [
        f"tau = {fmt_vec(s['tau'], '[]')}",
        f"xi  = {fmt_vec(s['xi'], '[]')}",
        f"phi = {fmt_vec(s['phi'], '[]')}",
        "rays: " + " ".join(ray_names(ctx.r)),
    ]
    for kind in "XYZR":
        lines += [f"{kind}_{i} = {fmt_vec(d.coeffs, '[]')}" for i, d in enumerate(s[kind])]
    for kind in ("DX", "DY", "DZ"):
        lines.append(f"D_{kind[1]} = {fmt_vec(s[kind].coeffs, '[]')}")
    lines += [f"{name} check {'passed' if ok else 'FAILED'}" for name, ok in checks]
    return "\n".join(lines) + "\n"


def theta_text(ctx: Context, n: Sequence[Fraction], theta: Theta, phi: Sequence[int], interior: bool, boundary: bool) -> str:
    where = "interior" if interior else "boundary" if boundary else "outside"
    return "\n".join(
        [
            f"phi = {fmt_vec(phi)}",
            f"chamber: {chain_text(phi)}",
            f"n = {fmt_vec(n)}",
            f"theta = {fmt_vec(theta.weights)}",
            f"n lies in the chamber: {where}",
        ]
    ) + "\n"


def quiver_dot(ctx: Context, annotate: bool = False) -> str:
    q = mckay_quiver(ctx)
    lines = [f"digraph mckay_{ctx.r}_{ctx.a} {{", "  node [shape=circle];"]
    lines += [f"  {v};" for v in range(ctx.r)]
    t = tables(ctx) if annotate else None
    for arrow in q.arrows:
        label = arrow.label
        if t is not None:
            d: Divisor = t.divisor(arrow.kind.upper(), arrow.index)
            label += f": {d}"
        lines.append(f'  {arrow.tail} -> {arrow.head} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def quiver_text(ctx: Context) -> str:
    q = mckay_quiver(ctx)
    lines = [f"McKay quiver of 1/{ctx.r}(1,{ctx.a},{ctx.r - ctx.a}): {ctx.r} vertices, {len(q.arrows)} arrows"]
    lines += [f"  {a.label}: {a.tail} -> {a.head}" for a in q.arrows]
    lines.append("relations:")
    for (p1, p0), (q1, q0) in q.relations():
        lines.append(
            f"  {q.arrows[p1].label} {q.arrows[p0].label} = {q.arrows[q1].label} {q.arrows[q0].label}"
        )
    return "\n".join(lines) + "\n"


# triangle corners for e1, e2, e3
_SIZE = 400
_CORNERS = ((Fraction(200), Fraction(30)), (Fraction(30), Fraction(324)), (Fraction(370), Fraction(324)))


def _project(p: Sequence[int]) -> tuple[Fraction, Fraction]:
    total = sum(p)
    x = sum(Fraction(c, total) * corner[0] for c, corner in zip(p, _CORNERS))
    y = sum(Fraction(c, total) * corner[1] for c, corner in zip(p, _CORNERS))
    return x, y


def _num(x: Fraction) -> str:
    return f"{float(x):.3f}"


def fan_svg(fan: Fan) -> str:
    """Each ray point u is drawn at u / (u_1 + u_2 + u_3) inside the e1 e2 e3 triangle."""
    names = ray_names(fan.ctx.r)
    pos = [_project(p) for p in fan.rays]
    edges = sorted(
        {tuple(sorted((s, t))) for c in fan.cones for s, t in _pairs(fan.cone_rays(c))}
    )
    ctx = fan.ctx
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_SIZE}" height="{_SIZE}" '
        f'viewBox="0 0 {_SIZE} {_SIZE}">',
        f"  <title>fan of 1/{ctx.r}(1,{ctx.a},{ctx.r - ctx.a})</title>",
        '  <g class="edges" stroke="black" stroke-width="1">',
    ]
    for s, t in edges:
        (x1, y1), (x2, y2) = pos[s], pos[t]
        out.append(f'    <line x1="{_num(x1)}" y1="{_num(y1)}" x2="{_num(x2)}" y2="{_num(y2)}"/>')
    out.append("  </g>")
    out.append('  <g class="rays" fill="black">')
    for name, (x, y) in zip(names, pos):
        out.append(
            f'    <circle class="ray" cx="{_num(x)}" cy="{_num(y)}" r="3"><title>{escape(name)}</title></circle>'
        )
    out.append("  </g>")
    out.append('  <g class="labels" font-family="sans-serif" font-size="10">')
    for name, (x, y) in zip(names, pos):
        out.append(f'    <text x="{_num(x + 5)}" y="{_num(y - 5)}">{escape(name)}</text>')
    out.append("  </g>")
    legend = (
        "projection: ray point u drawn at u / (u1 + u2 + u3),",
        "barycentric in the e1 e2 e3 triangle (not a hyperplane slice)",
    )
    for k, line in enumerate(legend):
        out.append(
            f'  <text class="legend" x="10" y="{370 + 14 * k}" font-family="sans-serif" '
            f'font-size="10">{escape(line)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _pairs(triple: Sequence[int]):
    a, b, c = triple
    return ((a, b), (a, c), (b, c))
