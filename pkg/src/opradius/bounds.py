"""Executable catalog of radius inequalities with hypothesis gating.

Each catalog entry computes a left- and right-hand side from an operator
tuple, a scalar map and a parameter record, and compares them under a
tolerance policy that knows which sides come from optimization:

* exact-vs-exact sides use 1e-8 absolute + 1e-9 relative tolerance
  (theta-sweep numerical radii count as exact: the sweep is accurate to
  machine precision);
* an optimized f-radius on the LHS of an upper bound is conservative --
  an underestimate cannot cause a false failure -- so the exact
  tolerance applies;
* an optimized f-radius on the RHS of a lower bound relaxes tolerance
  to 1e-6, and a failure triggers an automatic oracle re-check at
  dim <= 3 before being recorded;
* the triangle inequality has optimization error on both sides and uses
  1e-5.

A bound is only evaluated when the scalar map declares every flag the
bound's hypotheses require; otherwise the result is marked skipped.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from .linalg import as_operator, cartesian, hermitian_eig, polar_decompose
from .radius import (
    OptimizerOptions,
    as_operator_tuple,
    build_starts,
    f_radius,
    numerical_radius,
    oracle_radius,
    _lam_max,
    _theta_sweep_batch,
)

ABS_TOL = 1e-8
REL_TOL = 1e-9
OPT_LOWER_TOL = 1e-6
TRIANGLE_TOL = 1e-5
FURUTA_TOL = 1e-10
ORACLE_RECHECK_SAMPLES = 200000
TORUS_SAMPLES = 64
SIGN_PATTERN_LIMIT = 6  # enumerate all sign patterns up to this tuple size


@dataclass(frozen=True)
class BoundSpec:
    """One inequality: required map flags, arity, side kinds and evaluator."""

    id: str
    description: str
    flags: frozenset
    arity: str  # 'tuple' or 'single' (single uses the first operator)
    lhs_kind: str
    rhs_kind: str
    uses_map: bool
    evaluator: callable


@dataclass
class Component:
    """One lhs <= rhs comparison inside a bound; escalate() may sharpen rhs."""

    label: str
    lhs: float
    rhs: float
    lhs_kind: str = "exact"
    rhs_kind: str = "exact"
    escalate: callable = None


@dataclass
class BoundCheckResult:
    """Outcome of one bound on one instance.

    lhs/rhs/slack/tolerance_used describe the tightest (or first failing)
    component; components lists every comparison made.  `passed`
    serializes as "pass".
    """

    id: str
    lhs: float
    rhs: float
    slack: float
    passed: bool
    tolerance_used: float
    fingerprint: dict = field(default_factory=dict)
    skipped: bool = False
    skip_reason: str = ""
    components: list = field(default_factory=list)
    escalations: list = field(default_factory=list)

    def to_json(self):
        out = {
            "id": self.id,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "pass": self.passed,
            "tolerance_used": self.tolerance_used,
            "fingerprint": self.fingerprint,
        }
        if self.skipped:
            out["skipped"] = True
            out["skip_reason"] = self.skip_reason
        if self.escalations:
            out["escalations"] = self.escalations
        return out


def _tolerance(lhs, rhs, lhs_kind, rhs_kind):
    scale = max(1.0, abs(lhs), abs(rhs))
    if lhs_kind == "optimized" and rhs_kind == "optimized":
        return TRIANGLE_TOL * scale
    if rhs_kind == "optimized":
        return OPT_LOWER_TOL * scale
    return ABS_TOL + REL_TOL * scale


class InstanceContext:
    """Memoized per-instance quantities shared across bounds and maps.

    Holds the operator tuple plus caches for numerical radii, norms,
    eigendecompositions of T*T / TT* / Cartesian parts, polar pieces and
    multistart f-radius values keyed by (derived-tuple tag, map name).
    The harness pre-populates the f-radius cache in batches; standalone
    use computes everything lazily with identical algorithms.
    """

    def __init__(self, ops, opts=None):
        self.ts = as_operator_tuple(ops)
        self.n, self.d, _ = self.ts.shape
        self.opts = opts if opts is not None else OptimizerOptions()
        self._c = {}

    def _memo(self, key, fn):
        if key not in self._c:
            self._c[key] = fn()
        return self._c[key]

    # --- single-operator quantities -------------------------------------

    def omega_est(self, j):
        return self._memo(("w", j), lambda: numerical_radius(self.ts[j]))

    def omega(self, j):
        return self.omega_est(j).value

    def norm(self, j):
        return self._memo(
            ("norm", j), lambda: float(np.sqrt(max(0.0, self.gram_eig(j)[0][-1])))
        )

    def omega_of(self, tag, mat=None):
        """Numerical radius of a derived matrix, cached under `tag`."""
        if ("wof", tag) not in self._c:
            self._c[("wof", tag)] = numerical_radius(mat)
        return self._c[("wof", tag)].value

    def gram_eig(self, j):
        """eigh of T_j* T_j -> (eigenvalues ascending, vectors)."""

        def build():
            t = self.ts[j]
            dec = hermitian_eig(t.conj().T @ t)
            return np.clip(dec.eigenvalues, 0.0, None), dec.vectors

        return self._memo(("gram", j), build)

    def cogram_eig(self, j):
        """eigh of T_j T_j* (drives |T_j*| powers)."""

        def build():
            t = self.ts[j]
            dec = hermitian_eig(t @ t.conj().T)
            return np.clip(dec.eigenvalues, 0.0, None), dec.vectors

        return self._memo(("cogram", j), build)

    def mean_square_eig(self, j):
        """eigh of (T_j*T_j + T_jT_j*)/2."""

        def build():
            t = self.ts[j]
            dec = hermitian_eig((t.conj().T @ t + t @ t.conj().T) / 2.0)
            return np.clip(dec.eigenvalues, 0.0, None), dec.vectors

        return self._memo(("msq", j), build)

    def cart(self, j):
        return self._memo(("cart", j), lambda: cartesian(self.ts[j]))

    def polar(self, j):
        return self._memo(("polar", j), lambda: polar_decompose(self.ts[j]))

    def aluthge(self, j):
        def build():
            lam, v = self.gram_eig(j)
            root = (v * lam**0.25) @ v.conj().T  # |T|^(1/2)
            return root @ self.polar(j).isometry @ root

        return self._memo(("aluthge", j), build)

    # --- derived tuples for f-radius evaluations ------------------------

    def derived_tuple(self, tag, params=None):
        def build():
            t0 = self.ts[0]
            if tag == "plain":
                return self.ts
            if tag == "dw":
                return np.stack([t0, t0.conj().T @ t0])
            if tag == "cart":
                b, c = self.cart(0)
                return np.stack([b, c])
            if tag == "copies":
                return np.stack([t0] * self.n)
            if tag == "weighted":
                w = np.asarray(params["weights"], dtype=float)
                return w[:, None, None] * self.ts
            if tag == "furuta":
                gamma = params["alpha_f"] + params["beta_f"] - 1.0
                mats = []
                for j in range(self.n):
                    lam, v = self.gram_eig(j)
                    # |T|^gamma: sigma^gamma = lam^(gamma/2), with 0^0 := 1
                    powered = (v * lam ** (gamma / 2.0)) @ v.conj().T
                    mats.append(self.ts[j] @ powered)
                return np.stack(mats)
            if tag == "prime":
                return as_operator_tuple(params["ops_prime"])
            if tag == "sum_prime":
                return self.ts + as_operator_tuple(params["ops_prime"])
            raise ValueError(f"unknown derived tuple tag {tag!r}")

        if tag == "copies" and self.n == 1:
            tag = "plain"
        elif tag == "weighted" and self.n == 1:
            tag = "plain"
        return tag, self._memo(("dt", tag), build)

    def tuple_witnesses(self, tag, params=None):
        tag, mats = self.derived_tuple(tag, params)
        if tag == "plain":
            return tag, [self.omega_est(j).witness for j in range(self.n)]
        if tag == "copies":
            return tag, [self.omega_est(0).witness] * self.n

        def build():
            return [numerical_radius(m).witness for m in mats]

        return tag, self._memo(("dtw", tag), build)

    def wf(self, tag, f, params=None):
        """Multistart f-radius of a derived tuple, cached per (tag, map)."""
        tag, mats = self.derived_tuple(tag, params)
        key = ("wf", tag, f.name)

        def build():
            _, wits = self.tuple_witnesses(tag, params)
            est = f_radius(mats, f, self.opts, _witnesses=wits)
            return est.value

        return self._memo(key, build)

    def wf_oracle(self, tag, f, params=None):
        """Oracle re-check value for the same derived tuple (escalation)."""
        tag, mats = self.derived_tuple(tag, params)
        est = oracle_radius(
            mats, f, samples=ORACLE_RECHECK_SAMPLES, seed=self.opts.seed + 1
        )
        return est.value

    def lam_batch(self, params):
        """B9 machinery: radii and norms of sum(lambda_j T_j / n) over samples.

        The sample set is 64 random torus points (|lambda_j| = 1) plus all
        sign patterns for n <= 6, per the catalog's sampling rule; any
        sampled lambda yields a valid lower bound for w_f.
        Returns (omegas, norms, lams) aligned by row; sign rows come last.
        """

        def build():
            lams = [np.asarray(params["lambda_phases"], dtype=complex)]
            if self.n <= SIGN_PATTERN_LIMIT:
                signs = np.array(
                    list(itertools.product((1.0, -1.0), repeat=self.n)), dtype=complex
                )
                lams.append(signs)
            lam = np.concatenate(lams, axis=0)
            mats = np.einsum("kn,nij->kij", lam / self.n, self.ts)
            _, omegas = _theta_sweep_batch(mats)
            grams = np.einsum("kji,kjl->kil", mats.conj(), mats)
            norms = np.sqrt(np.clip(_lam_max(grams), 0.0, None))
            return omegas, norms, lam

        return self._memo(("lam_batch",), build)


def _psd_apply(lam, v, vals):
    """V diag(vals) V* from a cached eigensystem."""
    return (v * vals) @ v.conj().T


def _finv_of_psd_norm(f, m):
    """||f^-1(M)|| for PSD M and increasing f, via the spectral identity
    ||f^-1(M)|| = f^-1(lam_max(M)); the identity itself is covered by tests."""
    top = max(0.0, float(_lam_max(m[None])[0]))
    return float(f.invert(top))


def _wf_lower_component(ctx, label, lhs, tag, f, params):
    """Lower bound lhs <= w_f(tag tuple): optimized rhs with oracle escalation."""
    rhs = ctx.wf(tag, f, params)

    def escalate():
        return ctx.wf_oracle(tag, f, params)

    return Component(label, float(lhs), float(rhs), "exact", "optimized", escalate)


# --- evaluators ---------------------------------------------------------------


def _eval_b1(ctx, f, params):
    t0n = ctx.norm(0)
    w = ctx.omega(0)
    return [
        Component("half_norm_le_w", 0.5 * t0n, w),
        Component("w_le_norm", w, t0n),
    ]


def _eval_b2(ctx, f, params):
    lam_g, vg = ctx.gram_eig(0)
    lam_c, vc = ctx.cogram_eig(0)
    abs_t = _psd_apply(lam_g, vg, np.sqrt(lam_g))
    abs_ts = _psd_apply(lam_c, vc, np.sqrt(lam_c))
    rhs = 0.5 * float(_lam_max((abs_t + abs_ts)[None])[0])
    return [Component("w_le_half_abs_sum", ctx.omega(0), rhs)]


def _eval_b3(ctx, f, params):
    t = ctx.ts[0]
    rhs = 0.5 * float(_lam_max((t.conj().T @ t + t @ t.conj().T)[None])[0])
    return [Component("w2_le_half_sq_sum", ctx.omega(0) ** 2, rhs)]


def _eval_b4(ctx, f, params):
    t2 = ctx.ts[0] @ ctx.ts[0]
    sq_norm = float(np.sqrt(max(0.0, _lam_max((t2.conj().T @ t2)[None])[0])))
    rhs = 0.5 * (ctx.norm(0) + np.sqrt(sq_norm))
    return [Component("w_le_half_norm_plus_sqrt", ctx.omega(0), rhs)]


def _eval_b5(ctx, f, params):
    from .scalarmap import builtin

    p2 = builtin("power", [2])
    dw = ctx.wf("dw", p2, params)
    w = ctx.omega(0)
    nrm = ctx.norm(0)
    upper = float(np.sqrt(w**2 + nrm**4))

    def escalate():
        return ctx.wf_oracle("dw", p2, params)

    return [
        Component("w_le_dw", w, dw, "exact", "optimized", escalate),
        Component("norm2_le_dw", nrm**2, dw, "exact", "optimized", escalate),
        Component("dw_le_sqrt", dw, upper, "optimized", "exact"),
    ]


def _eval_b6(ctx, f, params):
    rhs = 0.5 * (ctx.norm(0) + ctx.omega_of("aluthge0", ctx.aluthge(0)))
    return [Component("w_le_half_norm_plus_w_aluthge", ctx.omega(0), rhs)]


def _eval_b7(ctx, f, params):
    wf = ctx.wf("plain", f, params)
    omegas = [ctx.omega(j) for j in range(ctx.n)]
    mid = float(f.invert(float(np.sum(f.eval_array(np.array(omegas))))))
    return [
        Component("wf_le_finv_sum", wf, mid, "optimized", "exact"),
        Component("finv_sum_le_sum_w", mid, float(np.sum(omegas))),
    ]


def _eval_b8(ctx, f, params):
    s = ctx.ts.sum(axis=0)
    ws = ctx.omega_of("opsum", s)
    nrm = float(np.sqrt(max(0.0, _lam_max((s.conj().T @ s)[None])[0])))
    return [
        Component("half_norm_sum_le_w_sum", 0.5 * nrm, ws),
        _wf_lower_component(ctx, "w_sum_le_wf", ws, "plain", f, params),
    ]


def _eval_b9(ctx, f, params):
    omegas, norms, _ = ctx.lam_batch(params)
    sup_w = float(np.max(omegas))
    sup_n = float(np.max(norms))
    return [
        _wf_lower_component(ctx, "sup_lam_w_le_wf", sup_w, "plain", f, params),
        Component("half_sup_norm_le_sup_w", 0.5 * sup_n, sup_w),
    ]


def _eval_b10(ctx, f, params):
    max_w = max(ctx.omega(j) for j in range(ctx.n))
    max_n = max(ctx.norm(j) for j in range(ctx.n))
    return [
        _wf_lower_component(
            ctx, "max_w_over_n_le_wf", max_w / ctx.n, "plain", f, params
        ),
        Component("max_norm_le_2max_w", max_n / (2.0 * ctx.n), max_w / ctx.n),
    ]


def _eval_b11(ctx, f, params):
    omegas, norms, lam = ctx.lam_batch(params)
    sign_rows = np.flatnonzero(np.all(np.abs(lam.imag) == 0.0, axis=1))
    # rows of lam_batch hold sum(s_j T_j / n); scaling by n recovers sum(s_j T_j)
    sup_w = float(np.max(omegas[sign_rows]))  # = (1/n) max_s w(sum s_j T_j)
    sup_n = float(np.max(norms[sign_rows]))
    return [
        _wf_lower_component(ctx, "max_sign_w_le_wf", sup_w, "plain", f, params),
        Component("half_max_sign_norm_le_max_sign_w", 0.5 * sup_n, sup_w),
    ]


def _eval_b12(ctx, f, params):
    return [
        _wf_lower_component(
            ctx, "half_w_le_wf_cart", 0.5 * ctx.omega(0), "cart", f, params
        )
    ]


def _eval_b13(ctx, f, params):
    w = ctx.omega(0)
    wf = ctx.wf("copies", f, params)

    def escalate():
        return ctx.wf_oracle("copies", f, params)

    return [
        Component("w_le_wf_copies", w, wf, "exact", "optimized", escalate),
        Component("wf_copies_le_nw", wf, ctx.n * w, "optimized", "exact"),
    ]


def _dw_gap_terms(ctx):
    t = ctx.ts[0]
    k = t.conj().T @ t
    b, _ = ctx.cart(0)
    re_plus = float(_lam_max((b + k)[None])[0])
    # ||Re T + T*T|| is the largest |eigenvalue|; the matrix may be indefinite
    low = float(np.linalg.eigvalsh(b + k)[0])
    nrm = max(abs(low), abs(re_plus))
    w_plus = ctx.omega_of("t_plus_k", t + k)
    w_star = ctx.omega_of("tstar_plus_k", t.conj().T + k)
    return nrm, w_plus, w_star


def _eval_b14(ctx, f, params):
    nrm, w_plus, w_star = _dw_gap_terms(ctx)
    lhs = nrm + 0.5 * abs(w_plus - w_star)
    return [_wf_lower_component(ctx, "re_plus_gap_le_dwf", lhs, "dw", f, params)]


def _eval_b15(ctx, f, params):
    nrm, w_plus, w_star = _dw_gap_terms(ctx)
    half_max = 0.5 * max(ctx.omega(0), ctx.norm(0) ** 2)
    lhs_b = 0.5 * nrm + 0.25 * abs(w_plus - w_star)
    return [
        _wf_lower_component(ctx, "half_max_le_dwf", half_max, "dw", f, params),
        _wf_lower_component(ctx, "half_re_gap_le_dwf", lhs_b, "dw", f, params),
    ]


def _eval_b16(ctx, f, params):
    alpha = params["alpha_f"]
    beta = params["beta_f"]
    p = params["p_holder"]
    q = p / (p - 1.0)
    lhs = ctx.wf("furuta", f, params)
    total = np.zeros((ctx.d, ctx.d), dtype=complex)
    for j in range(ctx.n):
        lam_g, vg = ctx.gram_eig(j)
        lam_c, vc = ctx.cogram_eig(j)
        # f^{p/2}(|T|^{2 alpha}) via scalar composition on the eigenvalues
        vals_g = f.eval_array(lam_g**alpha) ** (p / 2.0)
        vals_c = f.eval_array(lam_c**beta) ** (q / 2.0)
        total += (1.0 / p) * _psd_apply(lam_g, vg, vals_g)
        total += (1.0 / q) * _psd_apply(lam_c, vc, vals_c)
    rhs = _finv_of_psd_norm(f, total)
    return [Component("wf_furuta_le_holder_mix", lhs, rhs, "optimized", "exact")]


def _b17_mapped_sum(ctx, f, alpha, weights=None):
    total = np.zeros((ctx.d, ctx.d), dtype=complex)
    for j in range(ctx.n):
        w = 1.0 if weights is None else weights[j]
        lam_g, vg = ctx.gram_eig(j)
        lam_c, vc = ctx.cogram_eig(j)
        vals_g = f.eval_array(lam_g**alpha)
        vals_c = f.eval_array(lam_c ** (1.0 - alpha))
        total += (w / 2.0) * (_psd_apply(lam_g, vg, vals_g) + _psd_apply(lam_c, vc, vals_c))
    return total


def _eval_b17(ctx, f, params):
    lhs = ctx.wf("plain", f, params)
    rhs = _finv_of_psd_norm(f, _b17_mapped_sum(ctx, f, params["alpha"]))
    return [Component("wf_le_interp_mean", lhs, rhs, "optimized", "exact")]


def _eval_b18(ctx, f, params):
    weights = params["weights"]
    lhs = ctx.wf("weighted", f, params)
    rhs = _finv_of_psd_norm(f, _b17_mapped_sum(ctx, f, params["alpha"], weights))
    return [Component("wf_weighted_le_interp_mean", lhs, rhs, "optimized", "exact")]


def _eval_b19(ctx, f, params):
    lhs = ctx.wf("plain", f, params)
    total = np.zeros((ctx.d, ctx.d), dtype=complex)
    for j in range(ctx.n):
        lam, v = ctx.mean_square_eig(j)
        total += _psd_apply(lam, v, f.eval_array(lam))
    top = max(0.0, float(_lam_max(total[None])[0]))
    rhs = float(f.invert(float(np.sqrt(ctx.n * top))))
    comps = [Component("wf_le_finv_sqrt_mean_squares", lhs, rhs, "optimized", "exact")]
    if f.name.startswith("power:"):
        # the power-map specialization: w_p^p <= sqrt(n)/2^{p/2} ||sum (T*T+TT*)^p||^{1/2}
        pw = float(f.name.split(":", 1)[1])
        if pw >= 1.0:
            tot_p = np.zeros((ctx.d, ctx.d), dtype=complex)
            for j in range(ctx.n):
                lam, v = ctx.mean_square_eig(j)
                tot_p += _psd_apply(lam, v, (2.0 * lam) ** pw)
            top_p = max(0.0, float(_lam_max(tot_p[None])[0]))
            rhs_p = np.sqrt(ctx.n) / 2.0 ** (pw / 2.0) * np.sqrt(top_p)
            comps.append(
                Component("wp_pow_p_le_kittaneh_form", lhs**pw, rhs_p, "optimized", "exact")
            )
    return comps


def _eval_b20(ctx, f, params):
    lhs = ctx.wf("plain", f, params)
    total = np.zeros((ctx.d, ctx.d), dtype=complex)
    for j in range(ctx.n):
        b, c = ctx.cart(j)
        db = hermitian_eig(b)
        dc = hermitian_eig(c)
        abs_b = (db.vectors * np.abs(db.eigenvalues)) @ db.vectors.conj().T
        abs_c = (dc.vectors * np.abs(dc.eigenvalues)) @ dc.vectors.conj().T
        ds = hermitian_eig(abs_b + abs_c)
        lam = np.clip(ds.eigenvalues, 0.0, None)
        total += _psd_apply(lam, ds.vectors, f.eval_array(lam))
    rhs = _finv_of_psd_norm(f, total)
    return [Component("wf_le_finv_cart_abs", lhs, rhs, "optimized", "exact")]


def _eval_b21(ctx, f, params):
    lhs = ctx.wf("plain", f, params)
    acc = 0.0
    for j in range(ctx.n):
        w_alu = ctx.omega_of(f"aluthge{j}", ctx.aluthge(j))
        acc += 0.5 * (float(f.eval(ctx.norm(j))) + float(f.eval(w_alu)))
    rhs = float(f.invert(acc))
    return [Component("wf_le_polar_mean", lhs, rhs, "optimized", "exact")]


def _eval_b22(ctx, f, params):
    lhs = ctx.wf("dw", f, params)
    t = ctx.ts[0]
    nrm = ctx.norm(0)
    w_alu = ctx.omega_of("aluthge0", ctx.aluthge(0))
    parts = ctx.polar(0)
    mid = parts.modulus @ parts.isometry @ parts.modulus
    w_mid = ctx.omega_of("mod_u_mod", mid)
    acc = (
        float(f.eval(nrm))
        + float(f.eval(w_alu))
        + float(f.eval(nrm**2))
        + float(f.eval(w_mid))
    ) / 2.0
    rhs = float(f.invert(acc))
    return [Component("dwf_le_polar_mean", lhs, rhs, "optimized", "exact")]


def _eval_bp3(ctx, f, params):
    if "ops_prime" not in params:
        raise ValueError("B-P3 requires params['ops_prime'] (the second tuple)")
    lhs = ctx.wf("sum_prime", f, params)
    rhs = ctx.wf("plain", f, params) + ctx.wf("prime", f, params)
    return [Component("wf_sum_le_sum_wf", lhs, rhs, "optimized", "optimized")]


_CONVEX = frozenset({"increasing", "convex"})
_CONVEX0 = frozenset({"increasing", "convex", "zero_at_zero"})
_CONCAVE0 = frozenset({"increasing", "concave", "zero_at_zero"})
_GEOM = frozenset({"increasing", "geometrically_convex", "zero_at_zero"})
_SUPERMULT = frozenset({"increasing", "convex", "supermultiplicative"})

_CATALOG = None


def catalog():
    """The immutable bound catalog, id -> BoundSpec."""
    global _CATALOG
    if _CATALOG is not None:
        return _CATALOG

    entries = [
        BoundSpec("B1", "norm sandwich: ||T||/2 <= w(T) <= ||T||",
                  frozenset(), "single", "exact", "exact", False, _eval_b1),
        BoundSpec("B2", "w(T) <= ||(|T|+|T*|)||/2",
                  frozenset(), "single", "exact", "exact", False, _eval_b2),
        BoundSpec("B3", "w(T)^2 <= ||(|T|^2+|T*|^2)||/2",
                  frozenset(), "single", "exact", "exact", False, _eval_b3),
        BoundSpec("B4", "w(T) <= (||T|| + ||T^2||^(1/2))/2",
                  frozenset(), "single", "exact", "exact", False, _eval_b4),
        BoundSpec("B5", "max{w(T), ||T||^2} <= dw(T) <= sqrt(w^2 + ||T||^4)",
                  frozenset(), "single", "exact", "optimized", False, _eval_b5),
        BoundSpec("B6", "w(T) <= (||T|| + w(Aluthge(T)))/2",
                  frozenset(), "single", "exact", "exact", False, _eval_b6),
        BoundSpec("B7", "w_f <= f^-1(sum f(w(T_j))) <= sum w(T_j)",
                  _CONVEX, "tuple", "optimized", "exact", True, _eval_b7),
        BoundSpec("B8", "||sum T_j||/2 <= w(sum T_j) <= w_f",
                  _CONCAVE0, "tuple", "exact", "optimized", True, _eval_b8),
        BoundSpec("B9", "sup_lam w(sum lam_j T_j / n) <= w_f, over |lam_j| <= 1",
                  _CONVEX, "tuple", "exact", "optimized", True, _eval_b9),
        BoundSpec("B10", "max_j w(T_j)/n <= w_f",
                  _CONVEX, "tuple", "exact", "optimized", True, _eval_b10),
        BoundSpec("B11", "max over signs of w(sum +-T_j)/n <= w_f",
                  _CONVEX, "tuple", "exact", "optimized", True, _eval_b11),
        BoundSpec("B12", "w(T)/2 <= w_f(B, C) for T = B + iC",
                  _CONVEX, "single", "exact", "optimized", True, _eval_b12),
        BoundSpec("B13", "w(T) <= w_f(T,...,T) <= n w(T)",
                  _CONVEX0, "tuple", "exact", "optimized", True, _eval_b13),
        BoundSpec("B14", "||Re T + T*T|| + |w(T+T*T)-w(T*+T*T)|/2 <= w_f(T, T*T)",
                  _CONCAVE0, "single", "exact", "optimized", True, _eval_b14),
        BoundSpec("B15", "max{w,||T||^2}/2 and ||Re T+T*T||/2 + gap/4 <= w_f(T, T*T)",
                  _CONVEX, "single", "exact", "optimized", True, _eval_b15),
        BoundSpec("B16", "w_f(T_j|T_j|^(a+b-1)) <= ||f^-1(sum f^(p/2)(|T_j|^2a)/p + f^(q/2)(|T_j*|^2b)/q)||",
                  _GEOM, "tuple", "optimized", "exact", True, _eval_b16),
        BoundSpec("B17", "w_f <= ||f^-1(sum (f(|T_j|^2a) + f(|T_j*|^2(1-a)))/2)||",
                  _CONVEX, "tuple", "optimized", "exact", True, _eval_b17),
        BoundSpec("B18", "w_f(p_j T_j) <= ||f^-1(sum p_j (...)/2)||, sum p_j = 1",
                  _CONVEX, "tuple", "optimized", "exact", True, _eval_b18),
        BoundSpec("B19", "w_f <= ||f^-1(sqrt(n sum f((T_j*T_j + T_jT_j*)/2)))||",
                  _SUPERMULT, "tuple", "optimized", "exact", True, _eval_b19),
        BoundSpec("B20", "w_f <= ||f^-1(sum f(|B_j| + |C_j|))||",
                  _CONVEX0, "tuple", "optimized", "exact", True, _eval_b20),
        BoundSpec("B21", "w_f <= f^-1(sum (f(||T_j||) + f(w(Aluthge(T_j))))/2)",
                  _CONVEX, "tuple", "optimized", "exact", True, _eval_b21),
        BoundSpec("B22", "w_f(T, T*T) <= f^-1((f(||T||)+f(w(T~))+f(||T||^2)+f(w(|T|U|T|)))/2)",
                  _CONVEX, "single", "optimized", "exact", True, _eval_b22),
        BoundSpec("B-P3", "triangle: w_f(T_j + T_j') <= w_f(T_j) + w_f(T_j')",
                  _GEOM, "tuple", "optimized", "optimized", True, _eval_bp3),
    ]
    _CATALOG = {spec.id: spec for spec in entries}
    return _CATALOG


def draw_params(n, d, rng):
    """Random admissible parameters for one instance.

    alpha uniform in [0,1]; (alpha_f, beta_f) uniform in [0,1]^2 subject to
    alpha_f + beta_f >= 1; Hoelder p uniform in [1.1, 4]; weights from a
    flat simplex draw; 64 torus points for the lambda sampling; a fresh
    Ginibre-like primed tuple for the triangle inequality.
    """
    alpha = float(rng.uniform(0.0, 1.0))
    while True:
        af, bf = rng.uniform(0.0, 1.0, size=2)
        if af + bf >= 1.0:
            break
    p = float(rng.uniform(1.1, 4.0))
    w = rng.exponential(size=n)
    w = w / w.sum()
    phases = np.exp(2j * np.pi * rng.uniform(0.0, 1.0, size=(TORUS_SAMPLES, n)))
    prime = (
        rng.normal(size=(n, d, d)) + 1j * rng.normal(size=(n, d, d))
    ) / np.sqrt(2.0)
    return {
        "alpha": alpha,
        "alpha_f": float(af),
        "beta_f": float(bf),
        "p_holder": p,
        "weights": w,
        "lambda_phases": phases,
        "ops_prime": prime,
    }


def evaluate_bound(bound_id, ops, f=None, params=None, ctx=None, opts=None):
    """Evaluate one catalog inequality on one instance.

    Returns a BoundCheckResult; when the scalar map does not declare a
    required hypothesis flag the result is a skip, not a failure.  ctx
    may carry a pre-populated InstanceContext (the harness shares one per
    instance across all bounds and maps).
    """
    cat = catalog()
    if bound_id not in cat:
        raise ValueError(f"unknown bound id {bound_id!r}")
    spec = cat[bound_id]
    if ctx is None:
        ctx = InstanceContext(ops, opts)
    if params is None:
        params = draw_params(ctx.n, ctx.d, np.random.default_rng(ctx.opts.seed))

    fingerprint = dict(params.get("fingerprint", {}))
    fingerprint.update({"dim": ctx.d, "n": ctx.n})
    echoed = {}
    for key in ("alpha", "alpha_f", "beta_f", "p_holder"):
        if key in params:
            echoed[key] = float(params[key])
    if "weights" in params:
        echoed["weights"] = [float(w) for w in np.asarray(params["weights"])]
    if echoed:
        fingerprint["params"] = echoed
    if spec.uses_map:
        if f is None:
            raise ValueError(f"bound {bound_id} requires a scalar map")
        fingerprint["map"] = f.name
        missing = spec.flags - f.flags
        if missing:
            return BoundCheckResult(
                id=bound_id, lhs=0.0, rhs=0.0, slack=0.0, passed=True,
                tolerance_used=0.0, fingerprint=fingerprint, skipped=True,
                skip_reason=f"hypothesis: map {f.name} lacks {sorted(missing)}",
            )
    else:
        fingerprint["map"] = None

    bad = _param_violation(params)
    if bad:
        return BoundCheckResult(
            id=bound_id, lhs=0.0, rhs=0.0, slack=0.0, passed=True,
            tolerance_used=0.0, fingerprint=fingerprint, skipped=True,
            skip_reason=f"hypothesis: {bad}",
        )
    comps = spec.evaluator(ctx, f, params)
    escalations = []
    results = []
    for comp in comps:
        tol = _tolerance(comp.lhs, comp.rhs, comp.lhs_kind, comp.rhs_kind)
        ok = comp.lhs <= comp.rhs + tol
        rhs = comp.rhs
        if not ok and comp.escalate is not None and ctx.d <= 3:
            sharpened = float(comp.escalate())
            record = {
                "component": comp.label,
                "rhs_before": rhs,
                "oracle_value": sharpened,
                "samples": ORACLE_RECHECK_SAMPLES,
            }
            rhs = max(rhs, sharpened)
            ok = comp.lhs <= rhs + tol
            record["resolved"] = bool(ok)
            escalations.append(record)
        results.append((comp.label, comp.lhs, rhs, rhs - comp.lhs, ok, tol))

    failing = [r for r in results if not r[4]]
    primary = failing[0] if failing else min(results, key=lambda r: r[3])
    _, lhs, rhs, slack, _, tol = primary
    return BoundCheckResult(
        id=bound_id,
        lhs=float(lhs),
        rhs=float(rhs),
        slack=float(slack),
        passed=not failing,
        tolerance_used=float(tol),
        fingerprint=fingerprint,
        components=[
            {"label": lab, "lhs": l, "rhs": r, "slack": s, "pass": ok}
            for (lab, l, r, s, ok, _) in results
        ],
        escalations=escalations,
    )


def _param_violation(params):
    """Reason string when a parameter leaves its admissible range, else None."""
    for key in ("alpha", "alpha_f", "beta_f"):
        if key in params and not 0.0 <= params[key] <= 1.0:
            return f"parameter {key} must lie in [0, 1]"
    if params.get("p_holder") is not None and not params["p_holder"] > 1.0:
        return "Hoelder exponent p must exceed 1"
    if "alpha_f" in params and "beta_f" in params:
        if params["alpha_f"] + params["beta_f"] < 1.0:
            return "alpha + beta must be >= 1"
    if "weights" in params:
        w = np.asarray(params["weights"], dtype=float)
        if np.any(w <= 0.0) or abs(float(w.sum()) - 1.0) > 1e-9:
            return "weights must be positive and sum to 1"
    return None


def radius_preload_plan(bound_ids, maps, ctx, params):
    """(tag, map) pairs the given bounds will request from ctx.wf.

    The harness uses this to batch all multistart ascents of one instance
    into shared-tuple groups before any bound is evaluated.
    """
    from .scalarmap import builtin

    cat = catalog()
    pairs = []
    seen = set()

    def add(tag, f):
        tag_resolved, _ = ctx.derived_tuple(tag, params)
        key = (tag_resolved, f.name)
        if key not in seen:
            seen.add(key)
            pairs.append((tag_resolved, f))

    for bid in bound_ids:
        spec = cat[bid]
        if not spec.uses_map:
            if bid == "B5":
                add("dw", builtin("power", [2]))
            continue
        for f in maps:
            if spec.flags - f.flags:
                continue
            if bid in ("B7", "B8", "B9", "B10", "B11", "B17", "B19", "B20", "B21"):
                add("plain", f)
            elif bid == "B12":
                add("cart", f)
            elif bid == "B13":
                add("copies", f)
            elif bid in ("B14", "B15", "B22"):
                add("dw", f)
            elif bid == "B16":
                add("furuta", f)
            elif bid == "B18":
                add("weighted", f)
            elif bid == "B-P3":
                add("plain", f)
                add("prime", f)
                add("sum_prime", f)
    return pairs


def preload_radii(ctx, pairs, params):
    """Run all requested (tag, map) ascents, grouped by shared tuple.

    Populates ctx's f-radius cache with values identical to what the lazy
    path would compute (same starts, same algorithm), but batched so that
    maps sharing a derived tuple also share the per-iteration linear
    algebra.
    """
    by_tag = {}
    for tag, f in pairs:
        by_tag.setdefault(tag, []).append(f)
    n_rand = (
        ctx.opts.restarts if ctx.opts.restarts is not None else max(20, 10 * ctx.d)
    )
    from .radius import _ascend_group

    for tag, fs in sorted(by_tag.items()):
        _, mats = ctx.derived_tuple(tag, params)
        _, wits = ctx.tuple_witnesses(tag, params)
        starts = build_starts(ctx.d, n_rand, ctx.opts.seed, wits)
        fvecs = [f.eval_array for f in fs]
        outs = _ascend_group(mats, fvecs, [starts] * len(fs), ctx.opts)
        for f, (h_best, _z, _conv, _it) in zip(fs, outs):
            ctx._c[("wf", tag, f.name)] = float(f.invert(h_best))


def check_furuta_pointwise(t, alpha, beta, trials=10000, seed=0):
    """Pointwise Cauchy-Schwarz-type test:

        |<T|T|^(a+b-1) x, y>|^2 <= <|T|^2a x, x> <|T*|^2b y, y>

    on `trials` random unit-vector pairs; alpha, beta in [0,1] with
    alpha + beta >= 1.  Returns a BoundCheckResult for the worst pair.
    """
    if not (0.0 <= alpha <= 1.0 and 0.0 <= beta <= 1.0):
        raise ValueError("alpha and beta must lie in [0, 1]")
    if alpha + beta < 1.0:
        raise ValueError("alpha + beta must be >= 1")
    t = as_operator(t)
    d = t.shape[0]
    dec_g = hermitian_eig(t.conj().T @ t)
    dec_c = hermitian_eig(t @ t.conj().T)
    lam_g = np.clip(dec_g.eigenvalues, 0.0, None)
    lam_c = np.clip(dec_c.eigenvalues, 0.0, None)
    vg, vc = dec_g.vectors, dec_c.vectors
    gamma = alpha + beta - 1.0
    t_mod = t @ ((vg * lam_g ** (gamma / 2.0)) @ vg.conj().T)
    m2a = (vg * lam_g**alpha) @ vg.conj().T
    m2b = (vc * lam_c**beta) @ vc.conj().T
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(trials, d)) + 1j * rng.normal(size=(trials, d))
    y = rng.normal(size=(trials, d)) + 1j * rng.normal(size=(trials, d))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    y /= np.linalg.norm(y, axis=1, keepdims=True)
    lhs = np.abs(np.einsum("ri,ij,rj->r", y.conj(), t_mod, x)) ** 2
    rx = np.einsum("ri,ij,rj->r", x.conj(), m2a, x).real
    ry = np.einsum("ri,ij,rj->r", y.conj(), m2b, y).real
    rhs = rx * ry
    scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    viol = (lhs - rhs) / scale
    worst = int(np.argmax(viol))
    tol = FURUTA_TOL
    passed = bool(viol[worst] <= tol)
    return BoundCheckResult(
        id="furuta",
        lhs=float(lhs[worst]),
        rhs=float(rhs[worst]),
        slack=float(rhs[worst] - lhs[worst]),
        passed=passed,
        tolerance_used=tol,
        fingerprint={"alpha": alpha, "beta": beta, "trials": trials, "seed": seed},
    )
