"""Compact groups of orthogonal matrices: construction, closure, Haar sampling.

A group is described by a GroupSpec (named family, finite generator list,
torus of rotation blocks, or block product) and realized as a GroupHandle
acting on R^n by orthogonal matrices.  Complex and quaternionic families
act through their realifications, so every handle lives inside O(n) for
the ambient n.

Haar sampling follows the QR route: orthonormalize a Gaussian matrix and
fix the phases of the triangular factor's diagonal, which makes the
factorization unique and the orthogonal factor Haar distributed.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (
    ConfigError,
    DimensionMismatch,
    GroupTooLarge,
    NonOrthogonalGenerator,
    NonUnitaryInput,
    OrbitTestUnsupported,
    UnsupportedSampler,
)

ORTHOGONAL = "orthogonal"
SPECIAL_ORTHOGONAL = "special_orthogonal"
UNITARY = "unitary"
SPECIAL_UNITARY = "special_unitary"
SYMPLECTIC = "symplectic"
SYMPLECTIC_U1 = "symplectic_u1"
SYMPLECTIC_SP1 = "symplectic_sp1"
TORUS = "torus"
FINITE = "finite"
BLOCK_PRODUCT = "block_product"
EXCEPTIONAL = "exceptional"

# Groups transitive on the unit sphere that have no implemented sampler.
EXCEPTIONAL_DIMS = {"g2": 7, "spin7": 8, "spin9": 16}

ELEMENT_CAP = 100_000

ORTHOGONALITY_TOL = 1e-12
CLOSURE_DEDUP_TOL = 1e-9

_KINDS_WITH_SIZE = {
    ORTHOGONAL,
    SPECIAL_ORTHOGONAL,
    UNITARY,
    SPECIAL_UNITARY,
    SYMPLECTIC,
    SYMPLECTIC_U1,
    SYMPLECTIC_SP1,
    TORUS,
}


@dataclass(frozen=True)
class GroupSpec:
    """Declarative description of a compact group acting on R^n.

    size means: matrix size n for (special_)orthogonal, complex size m for
    (special_)unitary (ambient 2m), quaternionic size m for the symplectic
    kinds (ambient 4m), and the number of 2x2 rotation blocks for a torus
    (ambient 2*size).
    """

    kind: str
    size: int = 0
    generators: tuple = ()
    factors: tuple = ()
    name: str = ""

    def __post_init__(self):
        if self.kind in _KINDS_WITH_SIZE:
            if self.size < 1:
                raise ConfigError(f"{self.kind} needs size >= 1, got {self.size}")
        elif self.kind == FINITE:
            if not self.generators:
                raise ConfigError("finite kind needs at least one generator")
        elif self.kind == BLOCK_PRODUCT:
            if len(self.factors) < 1:
                raise ConfigError("block_product needs at least one factor")
        elif self.kind == EXCEPTIONAL:
            if self.name not in EXCEPTIONAL_DIMS:
                raise ConfigError(f"unknown exceptional group {self.name!r}")
        else:
            raise ConfigError(f"unknown group kind {self.kind!r}")

    # -- constructors ------------------------------------------------

    @classmethod
    def orthogonal(cls, n: int) -> "GroupSpec":
        return cls(ORTHOGONAL, n)

    @classmethod
    def special_orthogonal(cls, n: int) -> "GroupSpec":
        return cls(SPECIAL_ORTHOGONAL, n)

    @classmethod
    def unitary(cls, m: int) -> "GroupSpec":
        return cls(UNITARY, m)

    @classmethod
    def special_unitary(cls, m: int) -> "GroupSpec":
        return cls(SPECIAL_UNITARY, m)

    @classmethod
    def symplectic(cls, m: int) -> "GroupSpec":
        return cls(SYMPLECTIC, m)

    @classmethod
    def symplectic_u1(cls, m: int) -> "GroupSpec":
        return cls(SYMPLECTIC_U1, m)

    @classmethod
    def symplectic_sp1(cls, m: int) -> "GroupSpec":
        return cls(SYMPLECTIC_SP1, m)

    @classmethod
    def torus(cls, blocks: int) -> "GroupSpec":
        return cls(TORUS, blocks)

    @classmethod
    def finite(cls, generators) -> "GroupSpec":
        gens = tuple(tuple(tuple(row) for row in np.asarray(g).tolist()) for g in generators)
        return cls(FINITE, size=len(gens[0]), generators=gens)

    @classmethod
    def block_product(cls, *factors: "GroupSpec") -> "GroupSpec":
        return cls(BLOCK_PRODUCT, factors=tuple(factors))

    @classmethod
    def exceptional(cls, name: str) -> "GroupSpec":
        return cls(EXCEPTIONAL, name=name.lower())

    # -- geometry ----------------------------------------------------

    @property
    def ambient_dim(self) -> int:
        k = self.kind
        if k in (ORTHOGONAL, SPECIAL_ORTHOGONAL):
            return self.size
        if k in (UNITARY, SPECIAL_UNITARY):
            return 2 * self.size
        if k in (SYMPLECTIC, SYMPLECTIC_U1, SYMPLECTIC_SP1):
            return 4 * self.size
        if k == TORUS:
            return 2 * self.size
        if k == FINITE:
            return self.size
        if k == BLOCK_PRODUCT:
            return sum(f.ambient_dim for f in self.factors)
        return EXCEPTIONAL_DIMS[self.name]

    # -- serialization -----------------------------------------------

    def to_json(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.kind in _KINDS_WITH_SIZE:
            d["size"] = self.size
        elif self.kind == FINITE:
            d["generators"] = [[list(row) for row in g] for g in self.generators]
        elif self.kind == BLOCK_PRODUCT:
            d["factors"] = [f.to_json() for f in self.factors]
        elif self.kind == EXCEPTIONAL:
            d["name"] = self.name
        return d

    @classmethod
    def from_json(cls, d: dict) -> "GroupSpec":
        if not isinstance(d, dict) or "kind" not in d:
            raise ConfigError("group spec must be an object with a 'kind' field")
        kind = d["kind"]
        if kind in _KINDS_WITH_SIZE:
            spec = cls(kind, int(d.get("size", 0)))
        elif kind == FINITE:
            spec = cls.finite(d.get("generators", []))
        elif kind == BLOCK_PRODUCT:
            spec = cls.block_product(*(cls.from_json(f) for f in d.get("factors", [])))
        elif kind == EXCEPTIONAL:
            spec = cls.exceptional(d.get("name", ""))
        else:
            raise ConfigError(f"unknown group kind {kind!r}")
        if "dim" in d and int(d["dim"]) != spec.ambient_dim:
            raise ConfigError(
                f"declared dim {d['dim']} does not match the group's"
                f" ambient dimension {spec.ambient_dim}"
            )
        return spec


@dataclass(frozen=True)
class GroupElement:
    """One orthogonal matrix of a group realization."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


# ---------------------------------------------------------------------
# realifications
# ---------------------------------------------------------------------


def realify(mats: np.ndarray) -> np.ndarray:
    """Realify complex matrices: each entry z becomes [[Re z, -Im z], [Im z, Re z]].

    Accepts (..., m, m) unitary input; returns (..., 2m, 2m) orthogonal
    output.  Multiplicative, so unitary groups land inside the orthogonal
    group of the doubled space.
    """
    mats = np.asarray(mats, dtype=complex)
    if mats.ndim < 2 or mats.shape[-1] != mats.shape[-2]:
        raise NonUnitaryInput(f"expected square matrices, got shape {mats.shape}")
    m = mats.shape[-1]
    gram = np.einsum("...ji,...jk->...ik", mats.conj(), mats)
    defect = float(np.max(np.abs(gram - np.eye(m)))) if mats.size else 0.0
    if defect > ORTHOGONALITY_TOL:
        raise NonUnitaryInput(
            f"input fails M* M = I by {defect:.2e} (tolerance {ORTHOGONALITY_TOL:g})"
        )
    out = np.empty(mats.shape[:-2] + (2 * m, 2 * m), dtype=float)
    out[..., 0::2, 0::2] = mats.real
    out[..., 0::2, 1::2] = -mats.imag
    out[..., 1::2, 0::2] = mats.imag
    out[..., 1::2, 1::2] = mats.real
    return out


def realify_quaternion(mats: np.ndarray) -> np.ndarray:
    """Realify quaternion matrices given as (..., m, m, 4) components.

    Each quaternion q = a + bi + cj + dk becomes the 4x4 matrix of left
    multiplication by q on coordinates (1, i, j, k).
    """
    mats = np.asarray(mats, dtype=float)
    m = mats.shape[-2]
    a, b, c, d = mats[..., 0], mats[..., 1], mats[..., 2], mats[..., 3]
    out = np.empty(mats.shape[:-3] + (4 * m, 4 * m), dtype=float)
    out[..., 0::4, 0::4] = a
    out[..., 0::4, 1::4] = -b
    out[..., 0::4, 2::4] = -c
    out[..., 0::4, 3::4] = -d
    out[..., 1::4, 0::4] = b
    out[..., 1::4, 1::4] = a
    out[..., 1::4, 2::4] = -d
    out[..., 1::4, 3::4] = c
    out[..., 2::4, 0::4] = c
    out[..., 2::4, 1::4] = d
    out[..., 2::4, 2::4] = a
    out[..., 2::4, 3::4] = -b
    out[..., 3::4, 0::4] = d
    out[..., 3::4, 1::4] = -c
    out[..., 3::4, 2::4] = b
    out[..., 3::4, 3::4] = a
    return out


def _right_mult_quaternion(lam: np.ndarray) -> np.ndarray:
    """4x4 matrices of right multiplication by unit quaternions lam (..., 4)."""
    a, b, c, d = lam[..., 0], lam[..., 1], lam[..., 2], lam[..., 3]
    out = np.empty(lam.shape[:-1] + (4, 4), dtype=float)
    out[..., 0, 0] = a
    out[..., 0, 1] = -b
    out[..., 0, 2] = -c
    out[..., 0, 3] = -d
    out[..., 1, 0] = b
    out[..., 1, 1] = a
    out[..., 1, 2] = d
    out[..., 1, 3] = -c
    out[..., 2, 0] = c
    out[..., 2, 1] = -d
    out[..., 2, 2] = a
    out[..., 2, 3] = b
    out[..., 3, 0] = d
    out[..., 3, 1] = c
    out[..., 3, 2] = -b
    out[..., 3, 3] = a
    return out


def _quat_mul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Hamilton product on (..., 4) component arrays."""
    a1, b1, c1, d1 = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    a2, b2, c2, d2 = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    return np.stack(
        [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ],
        axis=-1,
    )


def _quat_conj(q: np.ndarray) -> np.ndarray:
    out = q.copy()
    out[..., 1:] = -out[..., 1:]
    return out


# ---------------------------------------------------------------------
# finite closure
# ---------------------------------------------------------------------


def _is_exactable(value: float) -> bool:
    # ints and small dyadic rationals round-trip exactly through binary floats
    num, den = float(value).as_integer_ratio()
    return den <= 4096


def _close_exact(gens: list, n: int, cap: int) -> list | None:
    """Closure in exact Fraction arithmetic; None if generators are not exact."""
    exact_gens = []
    for g in gens:
        rows = []
        for row in g:
            r = []
            for v in row:
                if isinstance(v, Fraction):
                    r.append(v)
                elif isinstance(v, (int, np.integer)):
                    r.append(Fraction(int(v)))
                elif isinstance(v, (float, np.floating)) and _is_exactable(float(v)):
                    r.append(Fraction(float(v)))
                else:
                    return None
            rows.append(tuple(r))
        exact_gens.append(tuple(rows))

    def mul(a, b):
        return tuple(
            tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
            for i in range(n)
        )

    ident = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    seen = {ident: 0}
    order = [ident]
    queue = [ident]
    while queue:
        a = queue.pop()
        for g in exact_gens:
            p = mul(a, g)
            if p not in seen:
                if len(order) >= cap:
                    raise GroupTooLarge(
                        f"closure exceeded the element cap ({cap})"
                    )
                seen[p] = len(order)
                order.append(p)
                queue.append(p)
    return order


def _close_float(gens: list[np.ndarray], n: int, cap: int) -> list[np.ndarray]:
    """Floating-point closure with quantized dedup keys at 1e-9."""
    scale = 1.0 / CLOSURE_DEDUP_TOL

    def key(m):
        return tuple(int(round(v * scale)) for v in m.ravel())

    ident = np.eye(n)
    seen = {key(ident)}
    order = [ident]
    queue = [ident]
    while queue:
        a = queue.pop()
        for g in gens:
            p = a @ g
            k = key(p)
            if k not in seen:
                if len(order) >= cap:
                    raise GroupTooLarge(
                        f"closure exceeded the element cap ({cap})"
                    )
                seen.add(k)
                order.append(p)
                queue.append(p)
    return order


def close_generated(generators, cap: int = ELEMENT_CAP):
    """Close a generator list under multiplication.

    Returns (elements ndarray (N, n, n), exact) where exact is the list of
    Fraction matrices when every generator entry was an integer or small
    dyadic rational, else None.  Raises NonOrthogonalGenerator for inputs
    off the orthogonal group and GroupTooLarge past the cap.
    """
    gens = [np.asarray(g, dtype=float) for g in generators]
    if not gens:
        raise ConfigError("need at least one generator")
    n = gens[0].shape[0]
    for g in gens:
        if g.shape != (n, n):
            raise DimensionMismatch(f"generator shapes disagree: {g.shape} vs {(n, n)}")
        if np.max(np.abs(g.T @ g - np.eye(n))) > ORTHOGONALITY_TOL:
            raise NonOrthogonalGenerator(
                "generator is not orthogonal within 1e-12"
            )

    raw = [list(list(row) for row in np.asarray(g).tolist()) for g in generators]
    exact = _close_exact(raw, n, cap)
    if exact is not None:
        mats = np.array([[[float(v) for v in row] for row in m] for m in exact])
    else:
        mats = np.stack(_close_float(gens, n, cap))
    # canonical order: sort by quantized entries so element indexing is
    # reproducible regardless of generator ordering
    keys = np.round(mats.reshape(len(mats), -1) / CLOSURE_DEDUP_TOL).astype(np.int64)
    order = np.lexsort(keys.T[::-1])
    mats = mats[order]
    if exact is not None:
        exact = [exact[i] for i in order]
    return mats, exact


# ---------------------------------------------------------------------
# handle
# ---------------------------------------------------------------------


class GroupHandle:
    """A realized group: ambient dimension, optional element list, sampler.

    Built by build_group.  elements is an (N, n, n) array for finite groups
    and None for continuous ones; is_sphere_transitive records whether the
    group acts transitively on the unit sphere of R^n.
    """

    def __init__(self, spec: GroupSpec, *, elements=None, exact_elements=None,
                 is_sphere_transitive=False, torus_blocks=None, torus_cosets=None,
                 factor_handles=None, has_sampler=False):
        self.spec = spec
        self.n = spec.ambient_dim
        self.elements = elements
        self.exact_elements = exact_elements
        self.is_sphere_transitive = is_sphere_transitive
        # torus_blocks: number of independent 2x2 rotation blocks when the
        # group is a rotation torus (possibly times the finite coset list
        # torus_cosets); None otherwise.
        self.torus_blocks = torus_blocks
        self.torus_cosets = torus_cosets
        self.factor_handles = factor_handles
        self.has_sampler = has_sampler
        self._cache_lock = threading.Lock()
        self._invariant_cache: dict = {}

    @property
    def order(self):
        return None if self.elements is None else len(self.elements)

    def __repr__(self):
        kind = self.spec.kind
        extra = f" order={self.order}" if self.elements is not None else ""
        return f"<GroupHandle {kind} n={self.n}{extra}>"

    # -- sampling ----------------------------------------------------

    def sample_matrices(self, seed: int, count: int) -> np.ndarray:
        """count Haar samples as an (count, n, n) array, deterministic in seed."""
        rng = np.random.default_rng(seed)
        return self._sample(rng, count)

    def _sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        spec = self.spec
        kind = spec.kind
        if self.elements is not None:
            idx = rng.integers(0, len(self.elements), size=count)
            return self.elements[idx]
        if kind == SPECIAL_ORTHOGONAL:
            return _haar_special_orthogonal(rng, spec.size, count)
        if kind == ORTHOGONAL:
            q = _haar_special_orthogonal(rng, spec.size, count)
            flip = rng.integers(0, 2, size=count).astype(bool)
            q[flip, :, 0] *= -1.0
            return q
        if kind == UNITARY:
            return realify(_haar_unitary(rng, spec.size, count))
        if kind == SPECIAL_UNITARY:
            u = _haar_unitary(rng, spec.size, count)
            det = np.linalg.det(u)
            u[:, :, 0] *= np.conj(det)[:, None]
            return realify(u)
        if kind == SYMPLECTIC:
            return realify_quaternion(_haar_quaternion_unitary(rng, spec.size, count))
        if kind in (SYMPLECTIC_U1, SYMPLECTIC_SP1):
            q = realify_quaternion(_haar_quaternion_unitary(rng, spec.size, count))
            if kind == SYMPLECTIC_U1:
                theta = rng.uniform(0.0, 2.0 * math.pi, size=count)
                lam = np.zeros((count, 4))
                lam[:, 0] = np.cos(theta)
                lam[:, 1] = np.sin(theta)
            else:
                lam = rng.standard_normal((count, 4))
                lam /= np.linalg.norm(lam, axis=1, keepdims=True)
            blk = _right_mult_quaternion(lam)
            right = np.zeros((count, self.n, self.n))
            for b in range(spec.size):
                right[:, 4 * b : 4 * b + 4, 4 * b : 4 * b + 4] = blk
            return q @ right
        if kind == TORUS:
            theta = rng.uniform(0.0, 2.0 * math.pi, size=(count, spec.size))
            return _torus_matrices(theta)
        if kind == BLOCK_PRODUCT:
            out = np.zeros((count, self.n, self.n))
            off = 0
            for fh in self.factor_handles:
                blk = fh._sample(rng, count)
                out[:, off : off + fh.n, off : off + fh.n] = blk
                off += fh.n
            return out
        raise UnsupportedSampler(
            f"no Haar sampler for group kind {kind!r}"
            + (f" ({spec.name})" if kind == EXCEPTIONAL else "")
        )


def _haar_special_orthogonal(rng, n, count):
    a = rng.standard_normal((count, n, n))
    q, r = np.linalg.qr(a)
    d = np.diagonal(r, axis1=1, axis2=2)
    q = q * np.where(d >= 0, 1.0, -1.0)[:, None, :]
    det = np.linalg.det(q)
    q[det < 0, :, 0] *= -1.0
    return q


def _haar_unitary(rng, m, count):
    a = (rng.standard_normal((count, m, m)) + 1j * rng.standard_normal((count, m, m))) / math.sqrt(2.0)
    q, r = np.linalg.qr(a)
    d = np.diagonal(r, axis1=1, axis2=2)
    ph = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1.0), 1.0)
    return q * ph[:, None, :]


def _haar_quaternion_unitary(rng, m, count):
    """Haar samples of the quaternionic unitary group as (count, m, m, 4).

    Modified Gram-Schmidt over quaternion columns of a quaternion-Gaussian
    matrix; the triangular factor has real positive diagonal, which pins the
    factorization and makes the orthonormal factor Haar.
    """
    g = rng.standard_normal((count, m, m, 4))
    q = np.empty_like(g)
    for j in range(m):
        v = g[:, :, j, :].copy()
        for i in range(j):
            e = q[:, :, i, :]
            # quaternionic inner product sum_k conj(e_k) v_k
            coef = _quat_mul(_quat_conj(e), v).sum(axis=1)
            v = v - _quat_mul(e, coef[:, None, :])
        norm = np.sqrt(np.sum(v * v, axis=(1, 2)))
        q[:, :, j, :] = v / norm[:, None, None]
    return q


def _torus_matrices(theta: np.ndarray) -> np.ndarray:
    """Block-diagonal rotation matrices from angles (..., k) -> (..., 2k, 2k)."""
    theta = np.asarray(theta, dtype=float)
    k = theta.shape[-1]
    out = np.zeros(theta.shape[:-1] + (2 * k, 2 * k))
    c, s = np.cos(theta), np.sin(theta)
    for b in range(k):
        out[..., 2 * b, 2 * b] = c[..., b]
        out[..., 2 * b, 2 * b + 1] = -s[..., b]
        out[..., 2 * b + 1, 2 * b] = s[..., b]
        out[..., 2 * b + 1, 2 * b + 1] = c[..., b]
    return out


# ---------------------------------------------------------------------
# build
# ---------------------------------------------------------------------


def build_group(spec: GroupSpec, element_cap: int = ELEMENT_CAP) -> GroupHandle:
    """Realize a GroupSpec as a GroupHandle acting orthogonally on R^n."""
    kind = spec.kind
    if kind == FINITE:
        elements, exact = close_generated(spec.generators, element_cap)
        return GroupHandle(spec, elements=elements, exact_elements=exact)

    if kind == SPECIAL_ORTHOGONAL:
        if spec.size == 1:
            return GroupHandle(spec, elements=np.eye(1)[None])
        return GroupHandle(
            spec,
            is_sphere_transitive=True,
            has_sampler=True,
            torus_blocks=1 if spec.size == 2 else None,
            torus_cosets=np.eye(2)[None] if spec.size == 2 else None,
        )

    if kind == ORTHOGONAL:
        if spec.size == 1:
            return GroupHandle(
                spec,
                elements=np.array([[[1.0]], [[-1.0]]]),
                is_sphere_transitive=True,
            )
        cosets = None
        blocks = None
        if spec.size == 2:
            blocks = 1
            cosets = np.stack([np.eye(2), np.diag([1.0, -1.0])])
        return GroupHandle(
            spec,
            is_sphere_transitive=True,
            has_sampler=True,
            torus_blocks=blocks,
            torus_cosets=cosets,
        )

    if kind == UNITARY:
        return GroupHandle(
            spec,
            is_sphere_transitive=True,
            has_sampler=True,
            torus_blocks=1 if spec.size == 1 else None,
            torus_cosets=np.eye(2)[None] if spec.size == 1 else None,
        )

    if kind == SPECIAL_UNITARY:
        if spec.size == 1:
            return GroupHandle(spec, elements=np.eye(2)[None])
        return GroupHandle(spec, is_sphere_transitive=True, has_sampler=True)

    if kind in (SYMPLECTIC, SYMPLECTIC_U1, SYMPLECTIC_SP1):
        return GroupHandle(spec, is_sphere_transitive=True, has_sampler=True)

    if kind == TORUS:
        return GroupHandle(
            spec,
            has_sampler=True,
            torus_blocks=spec.size,
            torus_cosets=np.eye(2 * spec.size)[None],
        )

    if kind == BLOCK_PRODUCT:
        factors = [build_group(f, element_cap) for f in spec.factors]
        elements = None
        if all(f.elements is not None for f in factors):
            total = 1
            for f in factors:
                total *= len(f.elements)
            if total > element_cap:
                raise GroupTooLarge(
                    f"product closure would have {total} elements (cap {element_cap})"
                )
            n = spec.ambient_dim
            elements = np.zeros((total, n, n))
            idx = np.arange(total)
            stride = total
            off = 0
            for f in factors:
                stride //= len(f.elements)
                which = (idx // stride) % len(f.elements)
                elements[:, off : off + f.n, off : off + f.n] = f.elements[which]
                off += f.n
        return GroupHandle(
            spec,
            elements=elements,
            factor_handles=factors,
            has_sampler=all(f.has_sampler or f.elements is not None for f in factors),
        )

    if kind == EXCEPTIONAL:
        return GroupHandle(spec, is_sphere_transitive=True)

    raise ConfigError(f"unknown group kind {kind!r}")


def haar_samples(handle: GroupHandle, seed: int, count: int) -> list[GroupElement]:
    """Haar-distributed elements; deterministic in seed.

    Validates orthogonality of the whole batch within 1e-12.
    """
    mats = handle.sample_matrices(seed, count)
    gram = np.einsum("kij,kil->kjl", mats, mats)
    err = np.max(np.abs(gram - np.eye(handle.n)))
    if err > 1e-12:
        raise NonOrthogonalGenerator(f"sampled matrix failed orthogonality ({err:.2e})")
    return [GroupElement(m) for m in mats]


# ---------------------------------------------------------------------
# real orbit membership
# ---------------------------------------------------------------------


def orbit_equal_real(handle: GroupHandle, xi, xi2, tol: float = 1e-9) -> bool:
    """Decide whether two real vectors lie on the same group orbit.

    Finite groups check all elements; sphere-transitive groups compare
    norms; tori compare per-block norms; block products recurse.
    """
    xi = np.asarray(xi, dtype=complex).reshape(-1)
    xi2 = np.asarray(xi2, dtype=complex).reshape(-1)
    if xi.shape != (handle.n,) or xi2.shape != (handle.n,):
        raise DimensionMismatch(
            f"expected vectors of length {handle.n}, got {xi.shape} and {xi2.shape}"
        )
    if np.max(np.abs(xi.imag)) > tol or np.max(np.abs(xi2.imag)) > tol:
        raise OrbitTestUnsupported("orbit membership is only decided for real vectors")
    a = xi.real
    b = xi2.real

    if handle.elements is not None:
        moved = handle.elements @ a
        return bool(np.min(np.max(np.abs(moved - b), axis=1)) <= tol)
    if handle.is_sphere_transitive:
        return bool(abs(np.linalg.norm(a) - np.linalg.norm(b)) <= tol)
    if handle.spec.kind == TORUS:
        ra = np.hypot(a[0::2], a[1::2])
        rb = np.hypot(b[0::2], b[1::2])
        return bool(np.max(np.abs(ra - rb)) <= tol)
    if handle.spec.kind == BLOCK_PRODUCT:
        off = 0
        for fh in handle.factor_handles:
            if not orbit_equal_real(fh, a[off : off + fh.n], b[off : off + fh.n], tol):
                return False
            off += fh.n
        return True
    raise OrbitTestUnsupported(
        f"no real-orbit rule for group kind {handle.spec.kind!r}"
    )
