"""Built-in jobs for the worked examples."""

from __future__ import annotations

from fractions import Fraction

from .documents import JobSpec
from .fan import Fan

__all__ = ["FIXTURES", "DESCRIPTIONS", "fixture", "NINE_RAY_FAN", "D5B_TRANSFORM", "D6_TRANSFORM"]

# Rows act on column vectors: v' = A v.
D5B_TRANSFORM = (
    (1, 0, 0, 0, 0),
    (0, 1, 0, 0, 0),
    (0, 0, 1, 0, 0),
    (0, 0, 0, 1, 0),
    (-1, -1, -1, 2, -4),
)

D6_TRANSFORM = (
    (1, 0, 0, 0, 0, 0),
    (0, 1, 0, 0, 0, 0),
    (0, 0, 1, 0, 0, 0),
    (0, 0, 0, 1, 0, 0),
    (0, 0, 0, 0, 1, 0),
    (-3, -3, -3, 4, 4, -12),
)

NINE_RAY_FAN = Fan(
    5,
    (
        (1, 0, 0, 0, 0),
        (0, 1, 0, 0, 0),
        (0, 0, 1, 0, 0),
        (0, 0, 0, 1, 0),
        (0, 0, 0, 0, 1),
        (-1, -1, 0, 0, 1),
        (0, 0, -1, 0, -1),
        (0, 0, 0, -1, -1),
        (0, 0, 0, 0, -1),
    ),
    "remark-5d",
)

_Q = Fraction

FIXTURES: dict[str, JobSpec] = {
    "d5b": JobSpec(
        bundle=(3, 1),
        transform=D5B_TRANSFORM,
        parametrized=(4, 7),
        window=(_Q(1, 4), _Q(3, 4)),
        label="d5b",
    ),
    "d6": JobSpec(
        bundle=(3, 2),
        transform=D6_TRANSFORM,
        parametrized=(4, 5, 8),
        window=(_Q(0), _Q(1)),
        chamber=(_Q(1, 4), _Q(3, 4)),
        label="d6",
    ),
    "d19": JobSpec(bundle=(1, 2), label="d19"),
    "remark-5d": JobSpec(fan=NINE_RAY_FAN, label="remark-5d"),
}

DESCRIPTIONS = {
    "d5b": "5-dim bundle(3,1), fixed transform, divisors {4,7}, window (1/4,3/4)",
    "d6": "6-dim bundle(3,2), fixed transform, divisors {4,5,8}, chamber (1/4,3/4)",
    "d19": "4-dim bundle(1,2), automatic transform and divisor orbits",
    "remark-5d": "5-dim 9-ray fan failing the ray-sum test, automatic orbits",
}


def fixture(name: str) -> JobSpec:
    try:
        return FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(sorted(FIXTURES))}") from None
