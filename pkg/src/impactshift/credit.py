"""Fractional author credit under alphabetical or positional byline conventions.

Positional schedule (life sciences):

* first and last author at the same university: 0.40 each, 0.20 shared by
  everyone else;
* otherwise: 0.30 to first and last, 0.15 to second and second-to-last, 0.10
  shared by everyone else.

Short bylines the two schedules cannot express:

======  =====================  =======================
n       same university        different universities
======  =====================  =======================
1       (1.0)                  (1.0)
2       (0.5, 0.5)             (0.5, 0.5)
3       (0.4, 0.2, 0.4)        (0.4, 0.2, 0.4)
4       (0.4, 0.1, 0.1, 0.4)   (0.3, 0.2, 0.2, 0.3)
======  =====================  =======================
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Byline, BylinePolicy
from .errors import EmptyBylineError

SAME_UNIVERSITY_ENDS = 0.40
SAME_UNIVERSITY_REST = 0.20
MIXED_ENDS = 0.30
MIXED_INNER = 0.15
MIXED_REST = 0.10


@dataclass(frozen=True)
class CreditVector:
    pub_id: str
    weights: tuple

    def __len__(self):
        return len(self.weights)

    def __getitem__(self, index):
        return self.weights[index]

    def at_position(self, position: int) -> float:
        return self.weights[position - 1]


def _even(n):
    return (1.0 / n,) * n


def _positional(byline: Byline) -> tuple:
    entries = byline.entries
    n = len(entries)
    if n <= 2:
        return _even(n)
    same = entries[0].university_id == entries[-1].university_id
    if same or n == 3:
        middle = SAME_UNIVERSITY_REST / (n - 2)
        return (SAME_UNIVERSITY_ENDS,) + (middle,) * (n - 2) + (SAME_UNIVERSITY_ENDS,)
    if n == 4:
        # no "others" left: their share goes to the two inner authors
        inner = MIXED_INNER + MIXED_REST / 2
        return (MIXED_ENDS, inner, inner, MIXED_ENDS)
    rest = MIXED_REST / (n - 4)
    return (MIXED_ENDS, MIXED_INNER) + (rest,) * (n - 4) + (MIXED_INNER, MIXED_ENDS)


def fractional_contributions(byline: Byline, policy) -> CreditVector:
    """Credit share of every byline position under ``policy``."""
    if not byline.entries:
        raise EmptyBylineError(f"publication {byline.pub_id!r}: empty byline")
    policy = BylinePolicy(policy)
    if policy is BylinePolicy.ALPHABETICAL:
        weights = _even(len(byline.entries))
    else:
        weights = _positional(byline)
    return CreditVector(byline.pub_id, weights)
