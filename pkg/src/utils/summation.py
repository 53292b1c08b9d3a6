"""
Elementwise compensated (Neumaier) summation over numpy arrays.
"""
import numpy as np


class CompensatedSum:
    """
    Running elementwise sum that carries the rounding error of every addition.

    Each ``add`` applies the TwoSum error-free transformation, so the accumulated error
    stays near one rounding of the exact sum for any order of the terms.
    """

    def __init__(self, shape):
        self.total = np.zeros(shape, dtype=np.float64)
        self.compensation = np.zeros(shape, dtype=np.float64)

    def add(self, values: np.ndarray, mask: np.ndarray = None) -> None:
        """Add ``values`` where ``mask`` is true (everywhere when mask is None)."""
        values = np.asarray(values, dtype=np.float64)
        if mask is not None:
            values = np.where(mask, values, 0.0)
        total = self.total + values
        big = np.abs(self.total) >= np.abs(values)
        error = np.where(big, (self.total - total) + values, (values - total) + self.total)
        self.compensation += error
        self.total = total

    def merge(self, other: "CompensatedSum") -> None:
        """Fold another partial sum into this one."""
        self.add(other.total)
        self.compensation += other.compensation

    def value(self) -> np.ndarray:
        return self.total + self.compensation
