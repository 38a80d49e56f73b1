"""Invariant polynomials and spectral-parameter fingerprints.

Two averaged waves phi_xi and phi_xi' coincide exactly when every
group-invariant polynomial takes the same value at xi and xi', so a basis
of invariants evaluated at xi is a complete fingerprint of phi_xi.  Finite
groups get a Reynolds-operator basis (group average of monomials, filtered
to a linearly independent set); sphere-transitive groups are fingerprinted
by the single quadratic b(xi, xi); rotation tori by one quadratic per
block; block products concatenate factor fingerprints.
"""

from __future__ import annotations

import hashlib
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

import numpy as np

from .errors import (
    BasisMismatch,
    DegreeCapExceeded,
    DimensionMismatch,
    FingerprintUnsupported,
    NotFinite,
)
from .evaluate import EvalConfig, as_spectral, bilinear_form, eval_spherical_batch
from .groups import BLOCK_PRODUCT, TORUS, GroupHandle

MONOMIAL_CAP = 200_000
INDEPENDENCE_TOL = 1e-9
PROBE_SEED = 20260816


@dataclass(frozen=True)
class InvariantPolynomial:
    """Sparse polynomial sum_alpha c_alpha xi^alpha on C^n."""

    dim: int
    coeffs: dict

    def __post_init__(self):
        clean = {}
        for expo, c in self.coeffs.items():
            expo = tuple(int(e) for e in expo)
            if len(expo) != self.dim:
                raise DimensionMismatch(
                    f"exponent tuple {expo} does not match dimension {self.dim}"
                )
            clean[expo] = complex(c)
        object.__setattr__(self, "coeffs", clean)

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.coeffs), default=0)

    def evaluate(self, xi) -> complex:
        xi = np.asarray(xi, dtype=complex).reshape(-1)
        if xi.shape[0] != self.dim:
            raise DimensionMismatch(f"vector length {xi.shape[0]}, polynomial dim {self.dim}")
        total = 0.0 + 0.0j
        for expo, c in self.coeffs.items():
            term = c
            for j, e in enumerate(expo):
                if e:
                    term *= xi[j] ** e
            total += term
        return complex(total)

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=complex))
        out = np.zeros(pts.shape[0], dtype=complex)
        for expo, c in self.coeffs.items():
            term = np.full(pts.shape[0], c, dtype=complex)
            for j, e in enumerate(expo):
                if e:
                    term *= pts[:, j] ** e
            out += term
        return out


@dataclass(frozen=True)
class QuotientPoint:
    """Fingerprint values tied to the basis they were computed against."""

    values: np.ndarray
    basis_id: str

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=complex).reshape(-1))

    def to_json(self) -> dict:
        return {
            "basis_id": self.basis_id,
            "values": [[float(z.real), float(z.imag)] for z in self.values],
        }


# ---------------------------------------------------------------------
# Reynolds operator over a finite group
# ---------------------------------------------------------------------


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            key = tuple(x + y for x, y in zip(e1, e2))
            out[key] = out.get(key, 0) + c1 * c2
    return out


def _linear_form(row, n: int, zero_exp) -> dict:
    out = {}
    for j, c in enumerate(row):
        if c == 0:
            continue
        e = list(zero_exp)
        e[j] = 1
        out[tuple(e)] = c
    return out


def _monomial_count(n: int, max_degree: int) -> int:
    return sum(math.comb(n + d - 1, d) for d in range(1, max_degree + 1))


def _exponent_tuples(n: int, degree: int):
    for combo in combinations_with_replacement(range(n), degree):
        e = [0] * n
        for j in combo:
            e[j] += 1
        yield tuple(e)


def reynolds_basis(handle: GroupHandle, max_degree: int | None = None) -> list[InvariantPolynomial]:
    """Linearly independent invariant polynomials of a finite group.

    Averages every monomial of degree 1..max_degree over the group (exactly
    in rational arithmetic when the closure was exact) and keeps a probe-rank
    independent subset.  max_degree defaults to the group order, which is
    always enough to generate the invariant ring; smaller caps warn.
    """
    if handle.elements is None:
        raise NotFinite("invariant basis needs a finite group with an element list")
    n = handle.n
    order = len(handle.elements)
    if max_degree is None:
        max_degree = order
    elif max_degree < order:
        warnings.warn(
            f"max_degree {max_degree} is below the group order {order}; "
            "the invariant basis may be incomplete",
            stacklevel=2,
        )
    if max_degree < 1:
        raise ValueError(f"max_degree must be >= 1, got {max_degree}")
    count = _monomial_count(n, max_degree)
    if count > MONOMIAL_CAP:
        raise DegreeCapExceeded(
            f"degree {max_degree} in dimension {n} needs {count} monomials (cap {MONOMIAL_CAP})"
        )

    exact = handle.exact_elements
    if exact is not None:
        rows_per_element = exact
        weight = Fraction(1, order)
        drop_below = None
    else:
        rows_per_element = [[tuple(row) for row in m] for m in handle.elements]
        weight = 1.0 / order
        drop_below = 1e-12

    zero_exp = tuple([0] * n)
    # powers of each row linear form, per element, up to max_degree
    power_tables = []
    for mat in rows_per_element:
        tables = []
        for i in range(n):
            lf = _linear_form(mat[i], n, zero_exp)
            one = Fraction(1) if drop_below is None else 1.0
            pw = [{zero_exp: one}]
            cur = pw[0]
            for _ in range(max_degree):
                cur = _poly_mul(cur, lf)
                pw.append(cur)
            tables.append(pw)
        power_tables.append(tables)

    candidates = []
    for degree in range(1, max_degree + 1):
        for expo in _exponent_tuples(n, degree):
            acc: dict = {}
            for tables in power_tables:
                prod = None
                for i, e in enumerate(expo):
                    if e == 0:
                        continue
                    part = tables[i][e]
                    prod = part if prod is None else _poly_mul(prod, part)
                if prod is None:
                    continue
                for key, c in prod.items():
                    acc[key] = acc.get(key, 0) + c
            poly = {}
            for key, c in acc.items():
                c = c * weight
                if drop_below is None:
                    if c != 0:
                        poly[key] = complex(c)
                elif abs(c) > drop_below:
                    poly[key] = c
            if poly:
                candidates.append(InvariantPolynomial(n, poly))

    return _independent_subset(candidates, n)


def _independent_subset(candidates, n: int) -> list:
    if not candidates:
        return []
    rng = np.random.default_rng(PROBE_SEED)
    num_probes = 2 * len(candidates) + 8
    probes = rng.standard_normal((num_probes, n)) + 0.7j * rng.standard_normal((num_probes, n))
    kept = []
    basis_rows = []
    for poly in candidates:
        row = poly.evaluate_many(probes)
        residual = row.copy()
        for q in basis_rows:
            residual = residual - np.vdot(q, residual) * q
        norm = np.linalg.norm(residual)
        if norm > INDEPENDENCE_TOL * max(1.0, float(np.linalg.norm(row))):
            kept.append(poly)
            basis_rows.append(residual / norm)
    return kept


def _finite_basis_id(handle: GroupHandle, max_degree: int, basis) -> str:
    h = hashlib.sha1()
    h.update(np.round(handle.elements, 10).tobytes())
    h.update(str(max_degree).encode())
    for poly in basis:
        for expo in sorted(poly.coeffs):
            h.update(bytes(expo))
    return f"reynolds:d{max_degree}:{h.hexdigest()[:16]}"


def _cached_basis(handle: GroupHandle, max_degree: int | None):
    order = len(handle.elements)
    degree = order if max_degree is None else max_degree
    with handle._cache_lock:
        hit = handle._invariant_cache.get(degree)
    if hit is not None:
        return hit
    basis = reynolds_basis(handle, degree)
    entry = (basis, _finite_basis_id(handle, degree, basis))
    with handle._cache_lock:
        return handle._invariant_cache.setdefault(degree, entry)


# ---------------------------------------------------------------------
# fingerprints
# ---------------------------------------------------------------------


def fingerprint(handle: GroupHandle, xi, max_degree: int | None = None) -> QuotientPoint:
    """Invariant-polynomial values identifying phi_xi up to equality."""
    xi = as_spectral(xi, handle.n)
    if handle.elements is not None:
        basis, basis_id = _cached_basis(handle, max_degree)
        values = np.array([p.evaluate(xi) for p in basis], dtype=complex)
        return QuotientPoint(values, basis_id)
    if handle.is_sphere_transitive:
        return QuotientPoint(
            np.array([bilinear_form(xi, xi)]), f"quadric:n{handle.n}"
        )
    if handle.spec.kind == TORUS:
        k = handle.torus_blocks
        vals = [bilinear_form(xi[2 * b : 2 * b + 2], xi[2 * b : 2 * b + 2]) for b in range(k)]
        return QuotientPoint(np.array(vals), f"torus:k{k}")
    if handle.spec.kind == BLOCK_PRODUCT:
        parts = []
        ids = []
        off = 0
        for fh in handle.factor_handles:
            sub = fingerprint(fh, xi[off : off + fh.n], max_degree)
            parts.append(sub.values)
            ids.append(sub.basis_id)
            off += fh.n
        return QuotientPoint(np.concatenate(parts), "block[" + ";".join(ids) + "]")
    raise FingerprintUnsupported(
        f"no fingerprint rule for group kind {handle.spec.kind!r}"
    )


def compare_points(p1: QuotientPoint, p2: QuotientPoint, tol: float = 1e-9) -> bool:
    """Equality of quotient points; refuses mixed bases."""
    if p1.basis_id != p2.basis_id:
        raise BasisMismatch(f"bases differ: {p1.basis_id} vs {p2.basis_id}")
    if p1.values.shape != p2.values.shape:
        raise BasisMismatch("fingerprint lengths differ despite equal basis ids")
    scale = max(1.0, float(np.max(np.abs(p1.values))), float(np.max(np.abs(p2.values))))
    return bool(np.max(np.abs(p1.values - p2.values)) <= tol * scale)


def equivalent(handle: GroupHandle, xi1, xi2, tol: float = 1e-9,
               max_degree: int | None = None) -> bool:
    """Whether phi_xi1 and phi_xi2 are the same function."""
    return compare_points(
        fingerprint(handle, xi1, max_degree), fingerprint(handle, xi2, max_degree), tol
    )


def separation_probe(handle: GroupHandle, xi1, xi2, num_probes: int = 96,
                     radius: float = 3.0, config: EvalConfig | None = None):
    """Largest |phi_xi1(x) - phi_xi2(x)| over a deterministic probe set.

    Returns (separation, best_point).  Complements equivalent(): a
    fingerprint mismatch should come with a visible pointwise gap.
    """
    config = config or EvalConfig()
    rng = np.random.default_rng(11)
    dirs = rng.standard_normal((num_probes, handle.n))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    radii = rng.uniform(0.2, radius, size=num_probes)
    xs = dirs * radii[:, None]
    r1 = eval_spherical_batch(handle, xi1, xs, config)
    r2 = eval_spherical_batch(handle, xi2, xs, config)
    diffs = np.array([abs(a.value - b.value) for a, b in zip(r1, r2)])
    best = int(np.argmax(diffs))
    return float(diffs[best]), xs[best]
