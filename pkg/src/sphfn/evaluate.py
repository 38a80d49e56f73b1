"""Group-averaged plane waves on R^n and their functional identities.

The central object is

    phi_xi(x) = average over the group of exp(i b(x, k xi)),

where b is the complex-bilinear (not Hermitian) extension of the Euclidean
inner product and xi is a complex spectral vector.  Finite groups average
exactly, rotation tori integrate by trapezoid quadrature (spectrally
accurate on the circle), and everything else is Monte Carlo with Haar
samples.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    ConfigError,
    DegenerateBasis,
    DimensionMismatch,
    GridTooCoarse,
    OverflowRisk,
    ProbeAtZero,
    UnsupportedSampler,
)
from .groups import BLOCK_PRODUCT, GroupHandle
from .motions import MotionElement

METHOD_MONTE_CARLO = "monte_carlo"
METHOD_FINITE_SUM = "finite_sum"
METHOD_TORUS_QUADRATURE = "torus_quadrature"
METHOD_CLOSED_FORM = "closed_form"

TORUS_MAX_NODES = 1 << 16
TORUS_STABLE_TOL = 1e-12
TORUS_BATCH_CAP = 1 << 20

_PHI_SMALL = 1e-8  # below this the ratio estimate in eigen_check is unstable


@dataclass(frozen=True)
class SpectralParam:
    """Complex spectral vector xi; phi_xi is the associated averaged wave."""

    components: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.components, dtype=complex).reshape(-1)
        object.__setattr__(self, "components", c)

    @property
    def dim(self) -> int:
        return self.components.size

    def to_json(self) -> list:
        return [[float(z.real), float(z.imag)] for z in self.components]

    @classmethod
    def from_json(cls, data) -> "SpectralParam":
        vals = []
        for item in data:
            if isinstance(item, (list, tuple)):
                if len(item) != 2:
                    raise ConfigError("spectral components must be numbers or [re, im] pairs")
                vals.append(complex(item[0], item[1]))
            else:
                vals.append(complex(item))
        return cls(np.array(vals, dtype=complex))


@dataclass(frozen=True)
class EvalConfig:
    """Evaluation parameters; JSON shape {"samples", "seed", "quadrature_nodes", "tol"}."""

    samples: int = 4096
    seed: int = 0
    quadrature_nodes: int = 256
    tol: float = 1e-9

    def __post_init__(self):
        if self.samples < 1:
            raise ConfigError(f"samples must be >= 1, got {self.samples}")
        if self.quadrature_nodes < 4:
            raise ConfigError(f"quadrature_nodes must be >= 4, got {self.quadrature_nodes}")
        if self.tol <= 0:
            raise ConfigError(f"tol must be positive, got {self.tol}")

    def to_json(self) -> dict:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "quadrature_nodes": self.quadrature_nodes,
            "tol": self.tol,
        }

    @classmethod
    def from_json(cls, data: dict) -> "EvalConfig":
        if not isinstance(data, dict):
            raise ConfigError("eval config must be a JSON object")
        known = {"samples", "seed", "quadrature_nodes", "tol"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown eval config fields: {sorted(unknown)}")
        base = cls()
        try:
            return cls(
                samples=int(data.get("samples", base.samples)),
                seed=int(data.get("seed", base.seed)),
                quadrature_nodes=int(data.get("quadrature_nodes", base.quadrature_nodes)),
                tol=float(data.get("tol", base.tol)),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad eval config value: {exc}") from exc


@dataclass(frozen=True)
class EvalResult:
    value: complex
    stderr: float
    method: str


def as_spectral(xi, n: int) -> np.ndarray:
    """Normalize a spectral input (SpectralParam or array-like) to (n,) complex."""
    if isinstance(xi, SpectralParam):
        vec = xi.components
    else:
        vec = np.asarray(xi, dtype=complex).reshape(-1)
    if vec.shape != (n,):
        raise DimensionMismatch(f"spectral parameter has shape {vec.shape}, expected ({n},)")
    return vec


def as_point(x, n: int) -> np.ndarray:
    vec = np.asarray(x, dtype=float).reshape(-1)
    if vec.shape != (n,):
        raise DimensionMismatch(f"point has shape {vec.shape}, expected ({n},)")
    return vec


def bilinear_form(u, v) -> complex:
    """b(u, v) = sum_i u_i v_i, the complex-bilinear extension (no conjugation)."""
    u = np.asarray(u, dtype=complex).reshape(-1)
    v = np.asarray(v, dtype=complex).reshape(-1)
    if u.shape != v.shape:
        raise DimensionMismatch(f"bilinear form on shapes {u.shape} and {v.shape}")
    return complex(np.sum(u * v))


def spectral_scale(xi) -> complex:
    """lambda = sqrt(b(xi, xi)), principal branch (the averages are even in lambda)."""
    return cmath.sqrt(bilinear_form(xi, xi))


def quasicharacter(x, xi) -> complex:
    """exp(i b(x, xi)), the building block of every average."""
    z = bilinear_form(np.asarray(x, dtype=complex), xi)
    if abs(z.imag) > kernels.GROWTH_LIMIT:
        raise OverflowRisk(f"|Im b(x, xi)| = {abs(z.imag):.1f} exceeds {kernels.GROWTH_LIMIT:g}")
    return cmath.exp(1j * z)


# ---------------------------------------------------------------------
# batch evaluation
# ---------------------------------------------------------------------


def _is_exact(handle: GroupHandle) -> bool:
    if handle.elements is not None or handle.torus_blocks is not None:
        return True
    if handle.spec.kind == BLOCK_PRODUCT:
        return all(_is_exact(f) for f in handle.factor_handles)
    return False


def _torus_quad_batch(handle: GroupHandle, xi: np.ndarray, xs: np.ndarray,
                      config: EvalConfig) -> np.ndarray:
    """Exact-by-quadrature values for rotation tori (times finite cosets).

    Per 2x2 block the integrand is exp(i(A cos t + B sin t)) with
    A = b(x_b, xi_b), B = x_2 xi_1 - x_1 xi_2, so the torus integral
    factorizes block by block; the trapezoid rule on the circle converges
    geometrically, and nodes double until values stabilize at 1e-12.
    """
    k = handle.torus_blocks
    cosets = handle.torus_cosets
    npts = xs.shape[0]

    def value(q: int) -> np.ndarray:
        theta = np.arange(q) * (2.0 * math.pi / q)
        c, s = np.cos(theta), np.sin(theta)
        total = np.zeros(npts, dtype=complex)
        for rep in cosets:
            xic = rep @ xi
            prod = np.ones(npts, dtype=complex)
            for b in range(k):
                x1, x2 = xs[:, 2 * b], xs[:, 2 * b + 1]
                a_coef = x1 * xic[2 * b] + x2 * xic[2 * b + 1]
                b_coef = x2 * xic[2 * b] - x1 * xic[2 * b + 1]
                growth = np.max(np.abs(a_coef.imag) + np.abs(b_coef.imag))
                if growth > kernels.GROWTH_LIMIT:
                    raise OverflowRisk(
                        f"torus block exponent {growth:.1f} exceeds {kernels.GROWTH_LIMIT:g}"
                    )
                phases = np.exp(1j * (a_coef[:, None] * c + b_coef[:, None] * s))
                prod *= phases.mean(axis=1)
            total += prod
        return total / len(cosets)

    q = max(8, config.quadrature_nodes)
    prev = value(q)
    while q < TORUS_MAX_NODES:
        q *= 2
        cur = value(q)
        if np.max(np.abs(cur - prev)) <= TORUS_STABLE_TOL * max(1.0, float(np.max(np.abs(cur)))):
            return cur
        prev = cur
    raise GridTooCoarse(f"torus quadrature did not stabilize by {TORUS_MAX_NODES} nodes")


def _phi_batch(handle: GroupHandle, xi: np.ndarray, xs: np.ndarray,
               config: EvalConfig):
    """Values of phi_xi at probe rows xs with one shared sample set.

    Returns (values, stderrs, method).  Exact routes report stderr 0.
    """
    if handle.elements is not None:
        vals, _ = kernels.plane_wave_average(handle.elements, xi, xs)
        return vals, np.zeros(len(xs)), METHOD_FINITE_SUM

    if handle.torus_blocks is not None:
        vals = _torus_quad_batch(handle, xi, xs, config)
        return vals, np.zeros(len(xs)), METHOD_TORUS_QUADRATURE

    if handle.spec.kind == BLOCK_PRODUCT:
        return _phi_batch_product(handle, xi, xs, config)

    if handle.has_sampler:
        mats = handle.sample_matrices(config.seed, config.samples)
        vals, errs = kernels.plane_wave_average(mats, xi, xs)
        return vals, errs, METHOD_MONTE_CARLO

    raise UnsupportedSampler(
        f"group kind {handle.spec.kind!r} has neither an element list nor a sampler"
    )


def _phi_batch_product(handle: GroupHandle, xi: np.ndarray, xs: np.ndarray,
                       config: EvalConfig):
    """Factorized evaluation over a block product.

    Exact factors multiply in exactly; the remaining factors are sampled
    jointly (independent Haar per factor) and averaged in one Monte Carlo
    pass, so the product of the two parts is unbiased.
    """
    npts = xs.shape[0]
    offsets = []
    off = 0
    for fh in handle.factor_handles:
        offsets.append((fh, off, off + fh.n))
        off += fh.n

    exact_vals = np.ones(npts, dtype=complex)
    any_torus = False
    sampled = []
    for fh, lo, hi in offsets:
        if _is_exact(fh):
            v, _, m = _phi_batch(fh, xi[lo:hi], xs[:, lo:hi], config)
            exact_vals *= v
            any_torus = any_torus or m == METHOD_TORUS_QUADRATURE
        else:
            sampled.append((fh, lo, hi))

    if not sampled:
        method = METHOD_TORUS_QUADRATURE if any_torus else METHOD_FINITE_SUM
        return exact_vals, np.zeros(npts), method

    for fh, _, _ in sampled:
        if not (fh.has_sampler or fh.elements is not None):
            raise UnsupportedSampler(
                f"product factor kind {fh.spec.kind!r} cannot be sampled"
            )
    dim = sum(hi - lo for _, lo, hi in sampled)
    rng = np.random.default_rng(config.seed)
    mats = np.zeros((config.samples, dim, dim))
    sub_xi = np.empty(dim, dtype=complex)
    sub_xs = np.empty((npts, dim))
    pos = 0
    for fh, lo, hi in sampled:
        w = hi - lo
        mats[:, pos : pos + w, pos : pos + w] = fh._sample(rng, config.samples)
        sub_xi[pos : pos + w] = xi[lo:hi]
        sub_xs[:, pos : pos + w] = xs[:, lo:hi]
        pos += w
    mc_vals, mc_errs = kernels.plane_wave_average(mats, sub_xi, sub_xs)
    return exact_vals * mc_vals, np.abs(exact_vals) * mc_errs, METHOD_MONTE_CARLO


# ---------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------


def eval_spherical(handle: GroupHandle, xi, x, config: EvalConfig | None = None,
                   method: str = "auto") -> EvalResult:
    """Evaluate phi_xi(x) for the group behind handle.

    method: "auto" picks finite sum, torus quadrature, or Monte Carlo in
    that order; the named methods force a route ("closed_form" requires a
    sphere-transitive group and real lambda comes from sqrt(b(xi, xi))).
    """
    config = config or EvalConfig()
    xi = as_spectral(xi, handle.n)
    x = as_point(x, handle.n)

    if not np.any(x) or not np.any(xi):
        # phi_xi(0) = 1 (normalization) and phi_0 = 1 identically; the
        # short-circuit keeps Monte Carlo labels off values that are exact
        return EvalResult(complex(1.0), 0.0, METHOD_CLOSED_FORM)
    if method == "auto":
        vals, errs, used = _phi_batch(handle, xi, x[None, :], config)
        return EvalResult(complex(vals[0]), float(errs[0]), used)
    if method == METHOD_CLOSED_FORM:
        from .bessel import closed_form_spherical

        if not handle.is_sphere_transitive:
            raise UnsupportedSampler(
                "closed form requires a group transitive on the unit sphere"
            )
        lam = spectral_scale(xi)
        value = closed_form_spherical(handle.n, lam, float(np.linalg.norm(x)))
        return EvalResult(value, 0.0, METHOD_CLOSED_FORM)
    if method == METHOD_MONTE_CARLO:
        mats = handle.sample_matrices(config.seed, config.samples)
        vals, errs = kernels.plane_wave_average(mats, xi, x[None, :])
        return EvalResult(complex(vals[0]), float(errs[0]), METHOD_MONTE_CARLO)
    if method == METHOD_FINITE_SUM:
        if handle.elements is None:
            raise UnsupportedSampler("finite_sum requires an enumerated group")
        vals, _ = kernels.plane_wave_average(handle.elements, xi, x[None, :])
        return EvalResult(complex(vals[0]), 0.0, METHOD_FINITE_SUM)
    if method == METHOD_TORUS_QUADRATURE:
        if handle.torus_blocks is None:
            raise UnsupportedSampler("torus_quadrature requires a rotation torus")
        vals = _torus_quad_batch(handle, xi, x[None, :], config)
        return EvalResult(complex(vals[0]), 0.0, METHOD_TORUS_QUADRATURE)
    raise ConfigError(f"unknown evaluation method {method!r}")


def eval_spherical_batch(handle: GroupHandle, xi, xs, config: EvalConfig | None = None):
    """phi_xi at many probes with one shared sample set; returns EvalResults."""
    config = config or EvalConfig()
    xi = as_spectral(xi, handle.n)
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    if xs.shape[1] != handle.n:
        raise DimensionMismatch(f"probe rows have length {xs.shape[1]}, expected {handle.n}")
    vals, errs, used = _phi_batch(handle, xi, xs, config)
    xi_zero = not np.any(xi)
    results = []
    for row, v, e in zip(xs, vals, errs):
        if xi_zero or not np.any(row):
            results.append(EvalResult(complex(1.0), 0.0, METHOD_CLOSED_FORM))
        else:
            results.append(EvalResult(complex(v), float(e), used))
    return results


@dataclass(frozen=True)
class FunctionalEquationReport:
    """phi(g1) phi(g2) versus the group-averaged middle translate."""

    lhs: complex
    rhs: complex
    residual: float
    stderr: float


def verify_functional_equation(handle: GroupHandle, xi, g1: MotionElement,
                               g2: MotionElement,
                               config: EvalConfig | None = None) -> FunctionalEquationReport:
    """Check phi(g1) phi(g2) = average_k phi(g1 k g2).

    The value of phi at a motion (x, k) is phi(x).  Exact evaluators give
    residuals at rounding level; Monte Carlo reuses one shared sample set
    for the inner averages and reports a conservative combined stderr.
    """
    config = config or EvalConfig()
    xi = as_spectral(xi, handle.n)
    x1 = as_point(g1.translation, handle.n)
    x2 = as_point(g2.translation, handle.n)
    k1 = g1.rotation

    if handle.elements is not None:
        both, _, _ = _phi_batch(handle, xi, np.stack([x1, x2]), config)
        lhs = complex(both[0] * both[1])
        moved = handle.elements @ x2              # (N, n)
        translates = x1 + moved @ k1.T
        inner, _, _ = _phi_batch(handle, xi, translates, config)
        rhs = complex(inner.mean())
        return FunctionalEquationReport(lhs, rhs, abs(lhs - rhs), 0.0)

    if handle.torus_blocks is not None:
        both, _, _ = _phi_batch(handle, xi, np.stack([x1, x2]), config)
        lhs = complex(both[0] * both[1])
        rhs = _torus_outer_average(handle, xi, x1, x2, k1, config)
        return FunctionalEquationReport(lhs, rhs, abs(lhs - rhs), 0.0)

    if handle.has_sampler:
        mats = handle.sample_matrices(config.seed, config.samples)
        vals, errs = kernels.plane_wave_average(mats, xi, np.stack([x1, x2]))
        lhs = complex(vals[0] * vals[1])
        sigma_lhs = abs(vals[1]) * errs[0] + abs(vals[0]) * errs[1]
        n_outer = min(config.samples, max(64, 2 * math.isqrt(config.samples)))
        moved = mats[:n_outer] @ x2
        translates = x1 + moved @ k1.T
        inner_vals, inner_errs = kernels.plane_wave_average(mats, xi, translates)
        rhs = complex(inner_vals.mean())
        spread = math.sqrt(
            (np.var(inner_vals.real, ddof=1) + np.var(inner_vals.imag, ddof=1)) / n_outer
        ) if n_outer > 1 else 0.0
        stderr = float(sigma_lhs + spread + inner_errs.mean())
        return FunctionalEquationReport(lhs, rhs, abs(lhs - rhs), stderr)

    raise UnsupportedSampler(
        f"functional equation needs elements or a sampler for kind {handle.spec.kind!r}"
    )


def _torus_outer_average(handle, xi, x1, x2, k1, config) -> complex:
    """Outer group average of phi(x1 + k1 k x2) over a rotation torus (with cosets)."""
    k = handle.torus_blocks
    cosets = handle.torus_cosets

    def value(q: int) -> complex:
        theta = np.arange(q) * (2.0 * math.pi / q)
        if q**k * len(cosets) > TORUS_BATCH_CAP:
            raise GridTooCoarse("torus outer average grid exceeds the node cap")
        grids = np.meshgrid(*([theta] * k), indexing="ij")
        angles = np.stack([g.ravel() for g in grids], axis=-1)  # (q^k, k)
        from .groups import _torus_matrices

        rots = _torus_matrices(angles)                           # (q^k, n, n)
        total = 0.0 + 0.0j
        for rep in cosets:
            moved = (rots @ (rep @ x2))                          # (q^k, n)
            translates = x1 + moved @ k1.T
            inner, _, _ = _phi_batch(handle, xi, translates, config)
            total += inner.mean()
        return total / len(cosets)

    q = 32
    prev = value(q)
    while q < 1024:
        q *= 2
        cur = value(q)
        if abs(cur - prev) <= TORUS_STABLE_TOL * max(1.0, abs(cur)):
            return cur
        prev = cur
    return prev


def eigen_check(handle: GroupHandle, xi, x, config: EvalConfig | None = None,
                step: float = 1e-3) -> complex:
    """Estimate the (negative-definite) Laplacian eigenvalue of phi_xi at x.

    Central second differences on a shared sample set; returns the ratio
    -(sum_i d2phi/dx_i^2) / phi(x), which converges to b(xi, xi) as the
    step shrinks (O(step^2) bias).  Raises ProbeAtZero when |phi(x)| is too
    small for a stable ratio.
    """
    config = config or EvalConfig()
    xi = as_spectral(xi, handle.n)
    x = as_point(x, handle.n)
    n = handle.n
    probes = np.empty((2 * n + 1, n))
    probes[0] = x
    for i in range(n):
        probes[1 + 2 * i] = x
        probes[1 + 2 * i, i] += step
        probes[2 + 2 * i] = x
        probes[2 + 2 * i, i] -= step
    vals, _, _ = _phi_batch(handle, xi, probes, config)
    phi0 = vals[0]
    if abs(phi0) < _PHI_SMALL:
        raise ProbeAtZero(f"|phi(x)| = {abs(phi0):.2e} is too small at the probe")
    second = 0.0 + 0.0j
    for i in range(n):
        second += vals[1 + 2 * i] - 2.0 * phi0 + vals[2 + 2 * i]
    return complex(-second / (step * step) / phi0)


def lattice_compatible(xi, basis, tol: float = 1e-9) -> bool:
    """Whether exp(i b(xi, .)) is trivial on the lattice spanned by basis.

    True iff b(xi, gamma_j) is real and lies in 2 pi Z for every basis
    vector.  Raises DegenerateBasis when the basis rows are dependent.
    """
    basis = np.atleast_2d(np.asarray(basis, dtype=float))
    if np.linalg.matrix_rank(basis) < basis.shape[0]:
        raise DegenerateBasis("lattice basis vectors are linearly dependent")
    xi = np.asarray(xi, dtype=complex).reshape(-1)
    if xi.shape[0] != basis.shape[1]:
        raise DimensionMismatch(
            f"spectral parameter length {xi.shape[0]} vs basis width {basis.shape[1]}"
        )
    for gamma in basis:
        z = complex(np.sum(xi * gamma))
        if abs(z.imag) > tol:
            return False
        nearest = 2.0 * math.pi * round(z.real / (2.0 * math.pi))
        if abs(z.real - nearest) > tol:
            return False
    return True


def induced_average(handle: GroupHandle, xi, x, config: EvalConfig | None = None,
                    base_rotation: np.ndarray | None = None) -> EvalResult:
    """Average of exp(i b((k0 k)^{-1} x, xi)) over the group.

    This is the induced-picture pipeline: transport the probe back through
    each group element and evaluate the plane wave at xi.  It agrees with
    eval_spherical term by term on a shared sample set (orthogonality moves
    k across the bilinear form), which is the identity tested at 1e-12.
    """
    config = config or EvalConfig()
    xi = as_spectral(xi, handle.n)
    x = as_point(x, handle.n)
    if handle.elements is not None:
        mats = handle.elements
        exact = True
    elif handle.has_sampler:
        mats = handle.sample_matrices(config.seed, config.samples)
        exact = False
    else:
        raise UnsupportedSampler(
            f"induced average needs elements or a sampler for kind {handle.spec.kind!r}"
        )
    if base_rotation is not None:
        mats = base_rotation @ mats
    # (k0 k)^{-1} x = (k0 k)^T x, one row per group element
    back = np.einsum("kji,j->ki", mats, x)
    z = back @ xi
    growth = float(np.max(np.abs(z.imag))) if z.size else 0.0
    if growth > kernels.GROWTH_LIMIT:
        raise OverflowRisk(f"induced exponent {growth:.1f} exceeds {kernels.GROWTH_LIMIT:g}")
    terms = np.exp(1j * z)
    value = complex(terms.mean())
    if exact or len(terms) < 2:
        stderr = 0.0
    else:
        stderr = math.sqrt(
            (np.var(terms.real, ddof=1) + np.var(terms.imag, ddof=1)) / len(terms)
        )
    method = METHOD_FINITE_SUM if exact else METHOD_MONTE_CARLO
    return EvalResult(value, stderr, method)
