"""
Directions in the plane, stored as a canonical angle in [0, 2*pi)
"""

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi
# Canonical angles are dyadic fractions of a full turn, so theta and theta + 2*pi
# land on the same stored value.
_TURN_GRID = 2.0 ** 40


def canonical_angle(theta: float) -> float:
    turns = np.mod(float(theta) / TWO_PI, 1.0)
    turns = np.round(turns * _TURN_GRID) / _TURN_GRID
    if turns >= 1.0:
        turns = 0.0
    return float(turns * TWO_PI)


@dataclass(frozen=True)
class Direction:
    """Unit direction Theta = (cos theta, sin theta)"""

    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", canonical_angle(self.theta))

    @classmethod
    def from_vector(cls, vector) -> "Direction":
        x, y = np.asarray(vector, dtype=float)
        return cls(float(np.arctan2(y, x)))

    @property
    def vector(self) -> np.ndarray:
        return np.array([np.cos(self.theta), np.sin(self.theta)])

    @property
    def normal(self) -> np.ndarray:
        """Theta rotated clockwise by a right angle; the plus side of split chords"""
        return np.array([np.sin(self.theta), -np.cos(self.theta)])

    def opposite(self) -> "Direction":
        return Direction(self.theta + np.pi)
