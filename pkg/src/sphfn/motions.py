"""Rigid motions of R^n: pairs (translation, rotation) with the semidirect
composition law (x1, k1)(x2, k2) = (x1 + k1 x2, k1 k2)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch


@dataclass(frozen=True)
class MotionElement:
    translation: np.ndarray
    rotation: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.translation, dtype=float).reshape(-1)
        r = np.asarray(self.rotation, dtype=float)
        if r.shape != (t.size, t.size):
            raise DimensionMismatch(
                f"rotation shape {r.shape} does not match translation length {t.size}"
            )
        object.__setattr__(self, "translation", t)
        object.__setattr__(self, "rotation", r)

    @property
    def dim(self) -> int:
        return self.translation.size

    def compose(self, other: "MotionElement") -> "MotionElement":
        if other.dim != self.dim:
            raise DimensionMismatch(f"cannot compose motions of dim {self.dim} and {other.dim}")
        return MotionElement(
            self.translation + self.rotation @ other.translation,
            self.rotation @ other.rotation,
        )

    def inverse(self) -> "MotionElement":
        rt = self.rotation.T
        return MotionElement(-(rt @ self.translation), rt)

    def apply(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.size != self.dim:
            raise DimensionMismatch(f"point of length {x.size} in dimension {self.dim}")
        return self.translation + self.rotation @ x


def motion_identity(n: int) -> MotionElement:
    return MotionElement(np.zeros(n), np.eye(n))


def translation(x) -> MotionElement:
    x = np.asarray(x, dtype=float).reshape(-1)
    return MotionElement(x, np.eye(x.size))
