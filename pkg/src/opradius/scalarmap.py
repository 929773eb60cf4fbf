"""Scalar maps f: [0, inf) -> [0, inf) with analytic property flags.

A ScalarMap packages the function, its inverse (closed-form when known,
numeric bisection otherwise) and a set of declared flags (increasing,
convex, geometrically convex, ...).  Flags are declared at construction
and certified empirically by `certify_flags`; the inequality catalog
uses them to gate which bounds a map may legally enter.
"""

from dataclasses import dataclass, field

import numpy as np

VALID_FLAGS = frozenset(
    {
        "increasing",
        "zero_at_zero",
        "convex",
        "concave",
        "geometrically_convex",
        "multiplicative",
        "supermultiplicative",
    }
)


@dataclass(frozen=True)
class ScalarMap:
    """A continuous map on [0, inf) with declared analytic properties.

    eval must accept floats; numpy arrays are supported by all builtins
    and exploited by the optimizers (eval_array falls back to a scalar
    loop for closures that cannot broadcast).  inverse may be None, in
    which case invert_numeric provides f^-1.  domain_hint is the bracket
    growth factor used during numeric inversion.
    """

    name: str
    eval: callable
    inverse: callable = None
    flags: frozenset = field(default_factory=frozenset)
    domain_hint: float = 2.0

    def __post_init__(self):
        unknown = set(self.flags) - VALID_FLAGS
        if unknown:
            raise ValueError(f"unknown scalar-map flags: {sorted(unknown)}")
        object.__setattr__(self, "flags", frozenset(self.flags))

    def eval_array(self, x):
        """Vectorized evaluation; tolerates scalar-only closures."""
        x = np.asarray(x, dtype=float)
        try:
            y = np.asarray(self.eval(x), dtype=float)
            if y.shape == x.shape:
                return y
        except (TypeError, ValueError):
            pass
        return np.vectorize(self.eval, otypes=[float])(x)

    def invert(self, y):
        """f^-1(y), closed form when available, else bisection."""
        if self.inverse is not None:
            return float(self.inverse(y))
        return invert_numeric(self, y)


_POWER_GE1_FLAGS = frozenset(
    {
        "increasing",
        "zero_at_zero",
        "convex",
        "geometrically_convex",
        "multiplicative",
        "supermultiplicative",
    }
)
_POWER_LT1_FLAGS = frozenset(
    {"increasing", "zero_at_zero", "concave", "geometrically_convex", "multiplicative"}
)


def builtin(name, params=()):
    """Construct a builtin map: power (q > 0), exp_minus_one, log1p, identity."""
    if name == "power":
        if len(params) != 1:
            raise ValueError("power requires exactly one parameter q")
        q = float(params[0])
        if q <= 0.0:
            raise ValueError(f"power exponent must be positive, got {q}")
        flags = _POWER_GE1_FLAGS if q >= 1.0 else _POWER_LT1_FLAGS
        return ScalarMap(
            name=f"power:{q:g}",
            eval=lambda t, q=q: t**q,
            inverse=lambda y, q=q: y ** (1.0 / q),
            flags=flags,
        )
    if params:
        raise ValueError(f"map {name!r} takes no parameters")
    if name == "exp_minus_one":
        return ScalarMap(
            name="expm1",
            eval=np.expm1,
            inverse=np.log1p,
            flags=frozenset({"increasing", "zero_at_zero", "convex"}),
        )
    if name == "log1p":
        return ScalarMap(
            name="log1p",
            eval=np.log1p,
            inverse=np.expm1,
            flags=frozenset({"increasing", "zero_at_zero", "concave"}),
        )
    if name == "identity":
        return ScalarMap(
            name="id",
            eval=lambda t: t,
            inverse=lambda y: y,
            flags=_POWER_GE1_FLAGS,
        )
    raise ValueError(f"unknown builtin scalar map {name!r}")


def from_spec(spec):
    """Parse a map spec string: power:q, expm1, log1p, id."""
    spec = spec.strip()
    if spec.startswith("power:"):
        return builtin("power", [float(spec.split(":", 1)[1])])
    if spec == "expm1":
        return builtin("exp_minus_one")
    if spec == "log1p":
        return builtin("log1p")
    if spec == "id":
        return builtin("identity")
    raise ValueError(f"unknown map spec {spec!r} (expected power:q, expm1, log1p or id)")


def invert_numeric(m, y, tol_rel=1e-12, max_bisect=200):
    """Solve eval(t) = y for increasing m by bracket doubling + bisection.

    Returns t with |eval(t) - y| <= 1e-12 * max(1, y).  Raises when the
    bracket cannot be grown to reach y (map not surjective onto [0, y]).
    """
    if "increasing" not in m.flags:
        raise ValueError("numeric inversion requires an increasing map")
    y = float(y)
    if y < 0.0:
        raise ValueError(f"cannot invert at negative value {y}")
    if y == 0.0:
        return 0.0
    tol = tol_rel * max(1.0, y)
    growth = max(1.5, float(m.domain_hint))
    hi = 1.0
    while float(m.eval(hi)) < y:
        hi *= growth
        if hi > 2.0**64:
            raise ValueError(f"map {m.name} does not reach {y} within bracket growth 2^64")
    lo = 0.0
    for _ in range(max_bisect):
        mid = 0.5 * (lo + hi)
        fm = float(m.eval(mid))
        if abs(fm - y) <= tol:
            return mid
        if fm < y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _rel_violation(lhs, rhs):
    """How far lhs <= rhs fails, relative to the scale of the two sides.

    Follows IEEE semantics at the top of the range: an infinite rhs
    satisfies any lhs (violation 0), an infinite lhs against a finite rhs
    is an infinite violation, and inf-vs-inf comparisons contribute 0.
    """
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    with np.errstate(invalid="ignore"):
        viol = (lhs - rhs) / scale
    finite = np.isfinite(lhs) & np.isfinite(rhs)
    if not np.all(finite):
        viol = np.where(finite, viol, 0.0)
        viol = np.where(np.isinf(lhs) & np.isfinite(rhs), np.inf, viol)
    return viol


def certify_flags(m, samples=10000, seed=0, pass_tol=1e-9):
    """Empirically test every declared flag of `m` on random pairs.

    Pairs (a, b) are drawn log-uniform in [1e-3, 1e3].  For each flag the
    defining inequality is checked; the report maps flag -> worst relative
    violation, and also covers the derived superadditivity (convex and
    zero_at_zero) / subadditivity (concave) used by the inequality catalog.
    Returns {"map": name, "checks": {flag: {"worst_violation": v, "pass": bool}},
    "pass": overall}.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    a = 10.0 ** rng.uniform(-3.0, 3.0, size=samples)
    b = 10.0 ** rng.uniform(-3.0, 3.0, size=samples)
    lam = rng.uniform(0.0, 1.0, size=samples)

    checks = {}

    def record(flag, worst):
        checks[flag] = {"worst_violation": float(worst), "pass": bool(worst <= pass_tol)}

    # fast-growing maps overflow to inf at the top of the sampling range;
    # _rel_violation gives those comparisons their IEEE meaning
    with np.errstate(over="ignore", invalid="ignore"):
        fa = m.eval_array(a)
        fb = m.eval_array(b)
        for flag in sorted(m.flags):
            if flag == "increasing":
                lo = np.minimum(a, b)
                hi = np.maximum(a, b)
                worst = np.max(_rel_violation(m.eval_array(lo), m.eval_array(hi)))
            elif flag == "zero_at_zero":
                worst = abs(float(m.eval(0.0)))
            elif flag == "convex":
                mix = m.eval_array(lam * a + (1.0 - lam) * b)
                worst = np.max(_rel_violation(mix, lam * fa + (1.0 - lam) * fb))
            elif flag == "concave":
                mix = m.eval_array(lam * a + (1.0 - lam) * b)
                worst = np.max(_rel_violation(lam * fa + (1.0 - lam) * fb, mix))
            elif flag == "geometrically_convex":
                worst = np.max(
                    _rel_violation(m.eval_array(np.sqrt(a * b)), np.sqrt(fa * fb))
                )
            elif flag == "multiplicative":
                prod = m.eval_array(a * b)
                err = np.abs(prod - fa * fb) / np.maximum(1.0, np.abs(fa * fb))
                worst = np.max(np.where(np.isfinite(err), err, 0.0))
            elif flag == "supermultiplicative":
                worst = np.max(_rel_violation(fa * fb, m.eval_array(a * b)))
            record(flag, worst)

        if {"convex", "zero_at_zero"} <= m.flags:
            worst = np.max(_rel_violation(fa + fb, m.eval_array(a + b)))
            record("superadditive", worst)
        if "concave" in m.flags and "zero_at_zero" in m.flags:
            worst = np.max(_rel_violation(m.eval_array(a + b), fa + fb))
            record("subadditive", worst)

    return {
        "map": m.name,
        "samples": int(samples),
        "checks": checks,
        "pass": all(c["pass"] for c in checks.values()),
    }
