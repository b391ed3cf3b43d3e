"""Incremental GF(2) elimination over int bitmasks.

Rows are Python ints; bit i of a mask is coefficient i. Each row can carry an
auxiliary value (itself an int bitmask, e.g. a right-hand side or a provenance
tag) that is XOR-combined alongside the mask during elimination.
"""

from __future__ import annotations


class Eliminator:
    """Row-echelon basis over GF(2), grown one row at a time.

    Pivots are tracked by lowest set bit is not required; we pivot on the
    highest set bit of each inserted row, which keeps reduction a single
    descending scan.
    """

    def __init__(self) -> None:
        # pivot bit -> (mask, aux), mask has that bit as its highest set bit
        self._rows: dict[int, tuple[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, mask: int, aux: int = 0) -> tuple[int, int]:
        """Reduce (mask, aux) against the current basis."""
        while mask:
            piv = mask.bit_length() - 1
            row = self._rows.get(piv)
            if row is None:
                break
            mask ^= row[0]
            aux ^= row[1]
        return mask, aux

    def insert(self, mask: int, aux: int = 0) -> tuple[bool, int]:
        """Add a row; returns (added, residual_aux).

        added is False when the mask lies in the current rowspace; the
        residual aux then tells whether the new row is consistent with the
        basis (0) or contradicts it (nonzero).
        """
        mask, aux = self.reduce(mask, aux)
        if mask == 0:
            return False, aux
        self._rows[mask.bit_length() - 1] = (mask, aux)
        return True, aux

    def solve(self, mask: int) -> tuple[bool, int]:
        """Express mask as a combination of basis rows.

        Returns (ok, aux) where ok means mask is in the rowspace and aux is
        the XOR of the corresponding row auxiliaries.
        """
        mask, aux = self.reduce(mask)
        return mask == 0, aux
