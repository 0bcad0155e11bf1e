"""Deformable complex integration contours.

A contour is a polyline q(u) in the complex plane sampled at nodes with a real
parameter u in [-U, U].  Every integral of the package runs along one of these,
truncated at |u| = U; integrands are expected to be negligible at the two ends.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

DEFAULT_MARGIN = np.pi / 36
MAX_TILT = np.pi / 4


class NonDecayError(ValueError):
    """Integrand is not negligible at a contour endpoint."""


class ContourError(ValueError):
    pass


@dataclass(frozen=True)
class QuadratureRule:
    scheme: str = "gauss-legendre"
    points_per_segment: int = 8
    U: float | None = None

    def __post_init__(self):
        if self.scheme not in ("gauss-legendre", "trapezoid"):
            raise ValueError(f"unknown quadrature scheme {self.scheme!r}")
        if self.points_per_segment < 2:
            raise ValueError("points_per_segment must be >= 2")
        if self.U is not None and self.U <= 0:
            raise ValueError("U must be positive")


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    worst_tilt: float
    tilt_ok: bool
    monotone: bool
    endpoints_ok: bool


@dataclass(frozen=True, eq=False)
class Contour:
    """Polyline contour.

    ``nodes`` are the complex sample points, ``u`` the matching real parameter
    values (strictly increasing).  ``asymptotic_real`` declares that the ends
    have returned to the real axis, which :func:`validate` then checks.
    """

    nodes: np.ndarray
    u: np.ndarray
    asymptotic_real: bool = False
    endpoint_tol: float = 1e-8
    label: str = ""

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=complex)
        u = np.array(self.u, dtype=float)
        if nodes.ndim != 1 or nodes.shape != u.shape:
            raise ContourError("nodes and u must be 1-d arrays of equal length")
        if nodes.size < 2:
            raise ContourError("a contour needs at least two nodes")
        if np.any(np.diff(u) <= 0):
            raise ContourError("parameter u must be strictly increasing")
        nodes.setflags(write=False)
        u.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "u", u)

    @property
    def U(self) -> float:
        return float(max(abs(self.u[0]), abs(self.u[-1])))

    @property
    def tangents(self) -> np.ndarray:
        """dq/du on each segment."""
        return np.diff(self.nodes) / np.diff(self.u)

    def __len__(self):
        return self.nodes.size

    def at(self, u) -> np.ndarray:
        """Piecewise-linear evaluation q(u)."""
        u = np.asarray(u, dtype=float)
        re = np.interp(u, self.u, self.nodes.real)
        im = np.interp(u, self.u, self.nodes.imag)
        return re + 1j * im

    def closest_parameter(self, point: complex) -> float:
        """Parameter value of the point of the polyline nearest to ``point``."""
        a, b = self.nodes[:-1], self.nodes[1:]
        d = b - a
        t = np.clip(((point - a) * d.conj()).real / np.abs(d) ** 2, 0.0, 1.0)
        dist = np.abs(a + t * d - point)
        k = int(np.argmin(dist))
        return float(self.u[k] + t[k] * (self.u[k + 1] - self.u[k]))

    def subpath(self, u0: float, u1: float, n: int) -> "Contour":
        """Uniformly resampled piece of the contour between u0 and u1.

        Nodes of the original polyline inside the window are kept so the
        corners of a bent contour survive resampling.
        """
        u0, u1 = max(u0, self.u[0]), min(u1, self.u[-1])
        if u1 <= u0:
            raise ContourError("empty sub-path")
        uu = np.linspace(u0, u1, n)
        inner = self.u[(self.u > u0) & (self.u < u1)]
        uu = np.unique(np.concatenate([uu, inner]))
        return Contour(self.at(uu), uu, asymptotic_real=False,
                       endpoint_tol=self.endpoint_tol, label=self.label)

    def to_json(self, rule: QuadratureRule | None = None) -> str:
        rule = rule or QuadratureRule()
        return json.dumps({
            "nodes": [[float(z.real), float(z.imag)] for z in self.nodes],
            "u": [float(x) for x in self.u],
            "U": self.U,
            "scheme": rule.scheme,
            "points_per_segment": rule.points_per_segment,
            "asymptotic_real": self.asymptotic_real,
        })

    @classmethod
    def from_json(cls, text: str) -> tuple["Contour", QuadratureRule]:
        data = json.loads(text)
        nodes = np.array([complex(re, im) for re, im in data["nodes"]])
        u = data.get("u")
        if u is None:
            U = float(data["U"])
            u = np.linspace(-U, U, nodes.size)
        rule = QuadratureRule(data.get("scheme", "gauss-legendre"),
                              int(data.get("points_per_segment", 8)))
        return cls(nodes, u, asymptotic_real=bool(data.get("asymptotic_real", False))), rule


def make_tilted_line(angle: float, offset: complex = 0.0, U: float = 10.0,
                     n: int = 201, *, delta_wedge: bool = True) -> Contour:
    """Straight contour q(u) = offset + u e^{i angle}, u in [-U, U].

    With ``delta_wedge`` (default) the tilt must stay strictly inside
    |angle| < pi/4 so that the tamed delta function is defined along the line.
    Auxiliary contours, such as the Fresnel-rotated momentum line, pass
    ``delta_wedge=False``.
    """
    if delta_wedge and abs(angle) >= MAX_TILT:
        raise ContourError(f"tilt {angle:.4f} rad leaves the delta-function wedge |angle| < pi/4")
    if abs(angle) >= np.pi / 2:
        raise ContourError("a contour must run from left to right")
    u = np.linspace(-U, U, n)
    return Contour(offset + u * np.exp(1j * angle), u, label=f"line({angle:.4g})")


def make_polyline(points, n_per_segment: int = 50, *, asymptotic_real: bool = False) -> Contour:
    """Contour through the given corner points, parameterised by Re q.

    Requires strictly increasing real parts.
    """
    pts = np.asarray(points, dtype=complex)
    if np.any(np.diff(pts.real) <= 0):
        raise ContourError("corner points must have increasing real part")
    pieces = [np.linspace(a, b, n_per_segment, endpoint=False) for a, b in zip(pts[:-1], pts[1:])]
    nodes = np.concatenate(pieces + [pts[-1:]])
    return Contour(nodes, nodes.real.copy(), asymptotic_real=asymptotic_real, label="polyline")


def make_bump(height: float, center: float = 0.0, half_width: float = 2.0, U: float = 10.0,
              n_per_segment: int = 100) -> Contour:
    """Real axis with a trapezoidal excursion of the given height around ``center``.

    Ramps rise at 35 degrees, inside the default 40 degree tilt bound, so the result
    is a valid, asymptotically real contour.
    """
    slope = np.tan(MAX_TILT - 2 * DEFAULT_MARGIN)
    rise = abs(height) / slope
    pts = [-U + center, center - half_width - rise, center - half_width + 1j * height,
           center + half_width + 1j * height, center + half_width + rise, U + center]
    return make_polyline(pts, n_per_segment, asymptotic_real=True)


def validate(c: Contour, margin: float = DEFAULT_MARGIN) -> ValidationReport:
    """Check tilt bound, monotone real part and (if declared) real endpoints."""
    d = np.diff(c.nodes)
    tilts = np.abs(np.angle(d))
    worst = float(tilts.max()) if tilts.size else 0.0
    tilt_ok = bool(worst <= MAX_TILT - margin)
    monotone = bool(np.all(d.real > 0))
    endpoints_ok = True
    if c.asymptotic_real:
        endpoints_ok = bool(abs(c.nodes[0].imag) <= c.endpoint_tol and abs(c.nodes[-1].imag) <= c.endpoint_tol)
    return ValidationReport(tilt_ok and monotone and endpoints_ok, worst, tilt_ok, monotone, endpoints_ok)


def _gauss_nodes(c: Contour, p: int):
    x, w = np.polynomial.legendre.leggauss(p)
    a, b = c.nodes[:-1, None], c.nodes[1:, None]
    half = (b - a) / 2
    q = (a + b) / 2 + half * x[None, :]
    weights = half * w[None, :]
    return q.ravel(), weights.ravel()


def _trapezoid_nodes(c: Contour, p: int):
    # p - 1 equal sub-intervals per segment
    t = np.linspace(0.0, 1.0, p)
    a, b = c.nodes[:-1, None], c.nodes[1:, None]
    q = a + (b - a) * t[None, :]
    w = np.full(p, 1.0 / (p - 1))
    w[0] = w[-1] = 0.5 / (p - 1)
    weights = (b - a) * w[None, :]
    return q.ravel(), weights.ravel()


def quadrature_nodes(c: Contour, rule: QuadratureRule | None = None):
    """Points and complex weights (dq included) realising ``rule`` on ``c``."""
    rule = rule or QuadratureRule()
    if rule.U is not None and rule.U < c.U:
        c = c.subpath(-rule.U, rule.U, len(c))
    if rule.scheme == "trapezoid":
        return _trapezoid_nodes(c, rule.points_per_segment)
    return _gauss_nodes(c, rule.points_per_segment)


def _evaluate(f, q):
    if hasattr(f, "evaluate"):
        names = f.parameters
        if len(names) > 1:
            raise ValueError("integrand must depend on a single parameter")
        return np.asarray(f.evaluate(**{names[0]: q}) if names else f.evaluate() * np.ones_like(q))
    return np.asarray(f(q), dtype=complex)


def quad(f, c: Contour, rule: QuadratureRule | None = None, *,
         decay_tol: float = 1e-10, check_decay: bool = True) -> complex:
    """Integrate ``f`` along ``c``.

    ``f`` is a vectorised callable of complex q or a one-parameter
    :class:`~complexaction.conjugation.AnalyticFunction`.  Raises
    :class:`NonDecayError` when |f| at an endpoint exceeds ``decay_tol`` times
    the largest sampled magnitude.
    """
    q, w = quadrature_nodes(c, rule)
    vals = _evaluate(f, q)
    if check_decay:
        ends = _evaluate(f, np.array([c.nodes[0], c.nodes[-1]]))
        scale = max(float(np.max(np.abs(vals))), np.finfo(float).tiny)
        if not np.all(np.isfinite(vals)) or np.max(np.abs(ends)) > decay_tol * scale:
            raise NonDecayError(
                f"integrand does not decay at the contour ends (|f| = {np.max(np.abs(ends)):.3e}, "
                f"peak {scale:.3e})")
    return complex(np.sum(vals * w))


def trapezoid_on_nodes(values, c: Contour) -> complex:
    """Trapezoid sum of samples given on the contour's own nodes."""
    values = np.asarray(values)
    dq = np.diff(c.nodes)
    return complex(np.sum(0.5 * (values[1:] + values[:-1]) * dq))


def node_weights(c: Contour) -> np.ndarray:
    """Trapezoid weights (dq included) attached to each node."""
    dq = np.diff(c.nodes)
    w = np.zeros(len(c), dtype=complex)
    w[:-1] += dq / 2
    w[1:] += dq / 2
    return w
