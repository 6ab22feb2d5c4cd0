"""Cost model for one pairwise contraction.

All quantities are exact integers on dimension products so annotated trees
can be audited by replay:

    flops  = p * (2q - 1)      p: product of output-index dims,
                               q: product of contracted-index dims (1 if none)
    memory = m*q + n*q + p     m, n: products of each operand's
                               non-contracted dims (operand sizes are m*q, n*q)
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod


@dataclass(frozen=True)
class PairCost:
    flops: int
    memory: int
    size_lhs: int
    size_rhs: int
    size_out: int

    @property
    def largest(self) -> int:
        return max(self.size_lhs, self.size_rhs, self.size_out)


def pair_cost(lhs, rhs, out, dims) -> PairCost:
    """Cost of contracting operands with the given index lists into ``out``."""
    lset, rset, oset = set(lhs), set(rhs), set(out)
    contracted = (lset & rset) - oset
    q = prod(dims[e] for e in contracted) if contracted else 1
    p = prod(dims[e] for e in out) if out else 1
    m = prod(dims[e] for e in lhs if e not in contracted) if lhs else 1
    n = prod(dims[e] for e in rhs if e not in contracted) if rhs else 1
    return PairCost(flops=p * (2 * q - 1), memory=m * q + n * q + p,
                    size_lhs=m * q, size_rhs=n * q, size_out=p)
