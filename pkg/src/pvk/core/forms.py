"""Polynomial one-forms ``alpha = sum_i alpha_i dx_i``."""
from __future__ import annotations

from .poly import Poly

__all__ = ["OneForm"]


class OneForm:
    __slots__ = ("nvars", "comps")

    def __init__(self, comps):
        comps = tuple(comps)
        if not comps:
            raise ValueError("a one-form needs at least one component")
        n = comps[0].nvars
        if any(c.nvars != n for c in comps) or len(comps) != n:
            raise ValueError("one-form needs one Poly per variable")
        self.nvars = n
        self.comps = comps

    @classmethod
    def zero(cls, nvars):
        return cls([Poly.zero(nvars)] * nvars)

    @classmethod
    def coordinate(cls, nvars, i):
        one = Poly.constant(nvars, 1)
        z = Poly.zero(nvars)
        return cls([one if j == i else z for j in range(nvars)])

    @classmethod
    def constant(cls, nvars, vec):
        return cls([Poly.constant(nvars, v) for v in vec])

    @classmethod
    def exact(cls, f):
        """The differential df."""
        return cls([f.diff(i) for i in range(f.nvars)])

    def __getitem__(self, i):
        return self.comps[i]

    def __iter__(self):
        return iter(self.comps)

    def __add__(self, other):
        return OneForm([a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other):
        return OneForm([a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return OneForm([-a for a in self.comps])

    def scale(self, f):
        return OneForm([f * a for a in self.comps])

    def is_zero(self):
        return all(c.is_zero() for c in self.comps)

    def truncate(self, cap):
        return OneForm([c.truncate(cap) for c in self.comps])

    def exterior_derivative(self):
        """Coefficients of d(alpha) on dx_i ^ dx_j, i < j."""
        n = self.nvars
        return {(i, j): self.comps[j].diff(i) - self.comps[i].diff(j)
                for i in range(n) for j in range(i + 1, n)}

    def is_closed(self):
        return all(v.is_zero() for v in self.exterior_derivative().values())

    def evaluate(self, point):
        return [c.evaluate(point) for c in self.comps]

    def __eq__(self, other):
        if not isinstance(other, OneForm):
            return NotImplemented
        return self.comps == other.comps

    def __hash__(self):
        return hash(self.comps)

    def __repr__(self):
        return "OneForm(" + ", ".join(str(c) for c in self.comps) + ")"
