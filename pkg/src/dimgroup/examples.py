"""Named maps used by the CLI, the golden reports and the test-suite."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .errors import ValidationError
from .field import parse_element, sqrt
from .maps import (
    PwmMap,
    golden_mean,
    make_from_nodes,
    make_interval_exchange,
    make_restricted_tent,
    make_tent,
)

F = Fraction


def three_fold() -> PwmMap:
    """Discontinuous Markov map on {0, 1/3, 2/3, 1} with matrix rows 011/101/110."""
    return PwmMap(
        [0, F(1, 3), F(1, 2), F(2, 3), 1],
        [(2, F(1, 3)), (2, F(-2, 3)), (2, F(-1, 3)), (-2, 2)],
        name="three_fold",
    )


def jump_map() -> PwmMap:
    """``2x`` on [0, 1/3] and ``4/3 - x`` on [1/3, 1]."""
    return PwmMap([0, F(1, 3), 1], [(2, 0), (-1, F(4, 3))], name="jump_map")


def shrinking_range() -> PwmMap:
    """Continuous map through (0,0), (1/4,1/2), (1/2,0), (3/4,3/8), (1,0); eventual range [0, 1/2]."""
    return make_from_nodes(
        [0, F(1, 4), F(1, 2), F(3, 4), 1], [0, F(1, 2), 0, F(3, 8), 0], name="shrinking_range"
    )


def multimodal() -> PwmMap:
    """Three-branch continuous surjection whose endpoints avoid {0, 1}.

    Orbit points other than 0 and 1 have 2-adic valuation <= -2, which never
    increases; the orbits of 0 and 1 are therefore infinite.
    """
    return make_from_nodes([0, F(1, 3), F(2, 3), 1], [F(1, 4), 1, 0, F(3, 4)], name="multimodal")


def golden_exchange() -> PwmMap:
    g = golden_mean()
    return make_interval_exchange([1 - g, g], [1, 0])


def half_rotation() -> PwmMap:
    """Rotation by 1/2: a Markov map with a permutation incidence matrix."""
    return make_interval_exchange([F(1, 2), F(1, 2)], [1, 0])


def identity_map() -> PwmMap:
    return PwmMap([0, 1], [(1, 0)], name="identity")


EXAMPLES: dict[str, Callable[[], PwmMap]] = {
    "three_fold": three_fold,
    "full_tent": lambda: make_tent(2),
    "tent_3_2": lambda: make_restricted_tent(F(3, 2)),
    "restricted_tent_sqrt2": lambda: make_restricted_tent(sqrt(2)),
    "jump_map": jump_map,
    "shrinking_range": shrinking_range,
    "golden_exchange": golden_exchange,
    "multimodal": multimodal,
    "permutation": half_rotation,
    "identity": identity_map,
}


def example(name: str) -> PwmMap:
    try:
        m = EXAMPLES[name]()
    except KeyError:
        raise ValidationError(
            f"unknown example {name!r}; choose from {', '.join(sorted(EXAMPLES))}", "example"
        ) from None
    return m


def preset(text: str) -> PwmMap:
    """Parse ``tent:S``, ``restricted_tent:S`` or ``interval_exchange:L1,L2,...;P1,P2,...``.

    A bare ``interval_exchange`` gives the golden two-interval exchange.
    """
    kind, _, arg = text.partition(":")
    kind = kind.strip()
    if kind == "tent":
        return make_tent(parse_element(arg or "2"))
    if kind == "restricted_tent":
        return make_restricted_tent(parse_element(arg or "2"))
    if kind == "interval_exchange":
        if not arg:
            return golden_exchange()
        lens, _, perm = arg.partition(";")
        lengths = [parse_element(x) for x in lens.split(",")]
        order = [int(x) for x in perm.split(",")] if perm else list(range(len(lengths)))[::-1]
        return make_interval_exchange(lengths, order)
    raise ValidationError(f"unknown preset {kind!r}", "preset")
