"""Dense complex-matrix arithmetic and operator-theoretic decompositions.

Everything downstream (radii, inequality checks, ensembles) works with
square complex matrices represented as numpy arrays of dtype complex128.
This module owns validation, Hermitian eigendecomposition, the operator
modulus |T| = (T*T)^(1/2), the polar and Aluthge decompositions, the
Cartesian split T = B + iC, and functional calculus on Hermitian matrices.

All functions are pure: inputs are never mutated and there is no module
state, so concurrent use on shared matrices is safe.
"""

from dataclasses import dataclass

import numpy as np


class ShapeError(ValueError):
    """Input is not a valid square complex matrix, or dimensions mismatch."""


class HermitianError(ValueError):
    """Matrix fails a required Hermitian-symmetry tolerance."""


class ConvergenceError(RuntimeError):
    """Iterative eigensolver exhausted its sweep budget."""


class SpectrumDomainError(ValueError):
    """Hermitian argument has an eigenvalue materially outside a map's domain."""


#: Relative asymmetry tolerated by hermitian_eig before raising.
HERMITIAN_RTOL = 1e-12

#: Negative eigenvalues above this relative size are clamped to zero
#: (round-off of a PSD computation); anything below raises.
CLAMP_RTOL = 1e-8


def as_operator(a):
    """Validate and return `a` as a d x d complex128 array, d >= 1.

    Accepts nested sequences or arrays.  Rejects non-square shapes and
    non-finite entries.
    """
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ShapeError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ShapeError("matrix entries must be finite (no NaN/Inf)")
    return m


def arithmetic(a, b=None, kind="add"):
    """Entrywise/matrix arithmetic dispatcher.

    kind is one of add, sub, mul, scale, adjoint.  `b` is a matrix for
    the binary kinds, a complex scalar for scale, and unused for adjoint.
    """
    a = as_operator(a)
    if kind == "adjoint":
        return a.conj().T
    if kind == "scale":
        return complex(b) * a
    b = as_operator(b)
    if a.shape != b.shape:
        raise ShapeError(f"dimension mismatch: {a.shape[0]}x{a.shape[0]} vs {b.shape[0]}x{b.shape[0]}")
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a @ b
    raise ValueError(f"unknown arithmetic kind {kind!r}")


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues and orthonormal eigenvector columns of a Hermitian matrix."""

    eigenvalues: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class PolarParts:
    """T = isometry @ modulus with `isometry` a partial isometry of rank(T), `modulus` = |T|."""

    isometry: np.ndarray
    modulus: np.ndarray


def hermitian_eig(h):
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    The input must be Hermitian to relative Frobenius tolerance 1e-12;
    it is symmetrized before factorization so that round-off asymmetry
    cannot leak into the eigenvectors.
    """
    h = as_operator(h)
    hnorm = np.linalg.norm(h)
    if np.linalg.norm(h - h.conj().T) > HERMITIAN_RTOL * hnorm:
        raise HermitianError(
            f"matrix is not Hermitian within {HERMITIAN_RTOL:g} relative tolerance"
        )
    w, v = np.linalg.eigh((h + h.conj().T) / 2.0)
    return EigenDecomposition(eigenvalues=w, vectors=v)


def jacobi_eigh(h, sweeps=100, rtol=1e-13):
    """Cyclic Jacobi eigensolver for complex Hermitian matrices.

    Reference implementation kept independent of LAPACK: each (p, q)
    plane is diagonalized exactly by the closed-form unitary of its
    2 x 2 Hermitian block, cycling until the off-diagonal Frobenius
    norm falls below rtol * ||H||_F.  Raises ConvergenceError with the
    remaining residual if the sweep cap is exhausted.
    """
    h = as_operator(h)
    hnorm = np.linalg.norm(h)
    if np.linalg.norm(h - h.conj().T) > HERMITIAN_RTOL * hnorm:
        raise HermitianError("jacobi_eigh requires a Hermitian matrix")
    d = h.shape[0]
    a = (h + h.conj().T) / 2.0
    v = np.eye(d, dtype=complex)
    if d == 1:
        return EigenDecomposition(eigenvalues=a.real.diagonal().copy(), vectors=v)
    a = a.copy()
    threshold = rtol * hnorm
    off_mask = ~np.eye(d, dtype=bool)
    for _ in range(sweeps):
        off = np.linalg.norm(a[off_mask])
        if off <= threshold:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                g = a[p, q]
                ag = abs(g)
                if ag <= 1e-300:
                    continue
                alpha = a[p, p].real
                beta = a[q, q].real
                # Diagonalize the block [[alpha, g], [conj(g), beta]] as a
                # phase times a real rotation; the half-angle form of t
                # avoids cancellation when |g| << |alpha - beta|.
                phi = np.conj(g) / ag
                theta = (beta - alpha) / (2.0 * ag)
                if theta == 0.0:
                    t = 1.0
                else:
                    t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot = np.array(
                    [[c, s], [-s * phi, c * phi]], dtype=complex
                )
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                a[p, p] = alpha - t * ag
                a[q, q] = beta + t * ag
                a[p, q] = 0.0
                a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ rot
    else:
        off = np.linalg.norm(a[off_mask])
        raise ConvergenceError(
            f"jacobi_eigh: off-diagonal residual {off:.3e} after {sweeps} sweeps"
        )
    w = np.diagonal(a).real.copy()
    order = np.argsort(w, kind="stable")
    return EigenDecomposition(eigenvalues=w[order], vectors=v[:, order])


def operator_norm(t):
    """Largest singular value, sqrt(lambda_max(T*T))."""
    t = as_operator(t)
    w = np.linalg.eigvalsh(t.conj().T @ t)
    return float(np.sqrt(max(0.0, w[-1])))


def abs_op(t):
    """Operator modulus |T| = (T*T)^(1/2), Hermitian PSD."""
    t = as_operator(t)
    dec = hermitian_eig(t.conj().T @ t)
    s = np.sqrt(np.clip(dec.eigenvalues, 0.0, None))
    v = dec.vectors
    m = (v * s) @ v.conj().T
    return (m + m.conj().T) / 2.0


def polar_decompose(t):
    """Polar decomposition T = U |T| with U the range-restricted partial isometry.

    U is built from the singular triplets of T obtained via the
    eigendecomposition of T*T: columns w_k = T v_k / sigma_k for every
    sigma_k above the rank threshold d * 2^-52 * sigma_max, giving
    rank(U) = rank(T).  The zero matrix yields (0, 0).
    """
    t = as_operator(t)
    d = t.shape[0]
    dec = hermitian_eig(t.conj().T @ t)
    sigma = np.sqrt(np.clip(dec.eigenvalues, 0.0, None))
    v = dec.vectors
    modulus = (v * sigma) @ v.conj().T
    modulus = (modulus + modulus.conj().T) / 2.0
    tau = d * np.finfo(float).eps / 2.0 * sigma[-1]  # d * 2^-52 * sigma_max
    u = np.zeros_like(t)
    for k in range(d):
        if sigma[k] > tau:
            w = t @ v[:, k] / sigma[k]
            nw = np.linalg.norm(w)
            if nw > 0.0:
                w = w / nw
            u += np.outer(w, v[:, k].conj())
    return PolarParts(isometry=u, modulus=modulus)


def aluthge(t):
    """Aluthge transform |T|^(1/2) U |T|^(1/2) from the polar decomposition."""
    t = as_operator(t)
    parts = polar_decompose(t)
    dec = hermitian_eig(parts.modulus)
    root = np.sqrt(np.clip(dec.eigenvalues, 0.0, None))
    half = (dec.vectors * root) @ dec.vectors.conj().T
    return half @ parts.isometry @ half


def cartesian(t):
    """Cartesian decomposition T = B + iC with B, C Hermitian.

    Returns (B, C) = ((T + T*)/2, (T - T*)/(2i)).
    """
    t = as_operator(t)
    th = t.conj().T
    b = (t + th) / 2.0
    c = (t - th) / 2.0j
    return b, c


def apply_map_hermitian(h, phi):
    """Functional calculus phi(H) = V diag(phi(lambda)) V* for Hermitian H.

    `phi` is a ScalarMap or any scalar callable defined on [0, inf).
    Small negative eigenvalues (round-off of PSD computations, within
    -1e-8 * ||h||) are clamped to zero; materially negative spectrum
    raises SpectrumDomainError.
    """
    fn = getattr(phi, "eval", phi)
    dec = hermitian_eig(h)
    w = dec.eigenvalues
    scale = max(abs(w[0]), abs(w[-1]))
    if w[0] < -CLAMP_RTOL * scale:
        raise SpectrumDomainError(
            f"eigenvalue {w[0]:.6e} below the domain [0, inf) of the scalar map"
        )
    w = np.clip(w, 0.0, None)
    vals = np.array([float(fn(x)) for x in w])
    v = dec.vectors
    m = (v * vals) @ v.conj().T
    return (m + m.conj().T) / 2.0


# --- shared JSON wire format ------------------------------------------------

def encode_matrix(t):
    """Encode a matrix as {"dim": d, "entries": [[re, im], ...]} row-major."""
    t = as_operator(t)
    d = t.shape[0]
    flat = t.reshape(-1)
    return {"dim": d, "entries": [[float(z.real), float(z.imag)] for z in flat]}


def decode_matrix(obj):
    """Decode the wire format produced by encode_matrix, with validation."""
    if not isinstance(obj, dict) or "dim" not in obj or "entries" not in obj:
        raise ShapeError("matrix JSON must be an object with 'dim' and 'entries'")
    d = obj["dim"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise ShapeError(f"'dim' must be a positive integer, got {d!r}")
    entries = obj["entries"]
    if len(entries) != d * d:
        raise ShapeError(f"expected {d * d} entries for dim {d}, got {len(entries)}")
    flat = np.empty(d * d, dtype=complex)
    for k, pair in enumerate(entries):
        if len(pair) != 2:
            raise ShapeError(f"entry {k} is not an [re, im] pair")
        flat[k] = complex(float(pair[0]), float(pair[1]))
    return as_operator(flat.reshape(d, d))
