"""Shapley-value decomposition of system utility into per-component payoffs.

Two independent computation routes are provided on purpose: the
subset-enumeration formula (`shapley_values`) and the permutation average
(`permutation_shapley_values`). They must agree; the permutation route is
the verification oracle for the formula route.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .model import SystemModel, system_utility

__all__ = [
    "CharacteristicContext",
    "coalition_value",
    "shapley_allocation",
    "shapley_by_permutations",
    "shapley_values",
    "permutation_shapley_values",
    "SUBSET_PARTICIPANT_LIMIT",
    "PERMUTATION_PARTICIPANT_LIMIT",
]

# Subset enumeration is 2^n; permutation enumeration is n!.
SUBSET_PARTICIPANT_LIMIT = 20
PERMUTATION_PARTICIPANT_LIMIT = 8

CharacteristicFunction = Callable[[frozenset[str]], float]


@dataclass(frozen=True)
class CharacteristicContext:
    """Everything needed to value coalitions for one joint action.

    Coalition members play their action from `action`; components in `fixed`
    (e.g. compromised ones) always play their fixed label; every other
    component falls back to its baseline.
    """

    model: SystemModel
    action: dict[str, str]
    participants: tuple[str, ...]
    fixed: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        ids = set(self.model.component_ids)
        overlap = set(self.participants) & set(self.fixed)
        if overlap:
            raise ValueError(f"participants and fixed components overlap: {sorted(overlap)}")
        for cid in itertools.chain(self.participants, self.fixed):
            if cid not in ids:
                raise ValueError(f"unknown component {cid!r} in characteristic context")
        for cid in self.participants:
            if cid not in self.action:
                raise ValueError(f"joint action misses participant {cid!r}")


def coalition_value(ctx: CharacteristicContext, coalition: Iterable[str]) -> float:
    """System utility when exactly `coalition` carries out the context action.

    Members of the coalition play their label from `ctx.action`, fixed
    components keep their fixed label, everyone else plays baseline.
    """
    members = frozenset(coalition)
    extra = members - set(ctx.participants)
    if extra:
        raise ValueError(f"coalition members outside participants: {sorted(extra)}")
    joint: dict[str, str] = {}
    for comp in ctx.model.components:
        cid = comp.id
        if cid in members:
            joint[cid] = ctx.action[cid]
        elif cid in ctx.fixed:
            joint[cid] = ctx.fixed[cid]
        else:
            joint[cid] = comp.baseline
    return system_utility(ctx.model, joint)


def shapley_values(
    participants: Sequence[str],
    value: CharacteristicFunction,
    *,
    limit: int = SUBSET_PARTICIPANT_LIMIT,
) -> dict[str, float]:
    """Shapley payoff of every participant under characteristic function `value`.

    Uses the weighted marginal-contribution sum over all coalitions not
    containing the participant; the weight for a coalition of size s among n
    players is s!(n-s-1)!/n!. `value` is memoized per coalition, and the
    summation order is fixed so results are bit-reproducible.
    """
    ids = list(participants)
    n = len(ids)
    if len(set(ids)) != n:
        raise ValueError("duplicate participant ids")
    if n > limit:
        raise ValueError(f"participant limit exceeded: {n} > {limit}")
    if n == 0:
        return {}

    fact = [1.0] * (n + 1)
    for k in range(1, n + 1):
        fact[k] = fact[k - 1] * k
    weight = [fact[s] * fact[n - s - 1] / fact[n] for s in range(n)]

    cache: dict[frozenset[str], float] = {}

    def v(s: frozenset[str]) -> float:
        got = cache.get(s)
        if got is None:
            got = cache[s] = float(value(s))
        return got

    payoffs: dict[str, float] = {}
    for pid in ids:
        rest = [q for q in ids if q != pid]
        total = 0.0
        for mask in range(1 << (n - 1)):
            coalition = frozenset(rest[j] for j in range(n - 1) if mask >> j & 1)
            total += weight[len(coalition)] * (v(coalition | {pid}) - v(coalition))
        payoffs[pid] = total
    return payoffs


def permutation_shapley_values(
    participants: Sequence[str],
    value: CharacteristicFunction,
    *,
    limit: int = PERMUTATION_PARTICIPANT_LIMIT,
) -> dict[str, float]:
    """Shapley payoffs by averaging marginal contributions over all n! orders.

    Independent of `shapley_values`; kept deliberately naive so it can serve
    as an oracle for the formula route.
    """
    ids = list(participants)
    n = len(ids)
    if len(set(ids)) != n:
        raise ValueError("duplicate participant ids")
    if n > limit:
        raise ValueError(f"participant limit exceeded: {n} > {limit}")
    if n == 0:
        return {}

    cache: dict[frozenset[str], float] = {}

    def v(s: frozenset[str]) -> float:
        got = cache.get(s)
        if got is None:
            got = cache[s] = float(value(s))
        return got

    totals = {pid: 0.0 for pid in ids}
    count = 0
    for order in itertools.permutations(ids):
        joined: frozenset[str] = frozenset()
        for pid in order:
            grown = joined | {pid}
            totals[pid] += v(grown) - v(joined)
            joined = grown
        count += 1
    return {pid: totals[pid] / count for pid in ids}


def shapley_allocation(
    ctx: CharacteristicContext, *, limit: int = SUBSET_PARTICIPANT_LIMIT
) -> dict[str, float]:
    """Per-participant payoff decomposition of the context's joint action.

    Efficiency holds by construction: the payoffs sum to
    v(participants) - v(empty set), i.e. the utility gain of the full
    coalition over the all-baseline (plus fixed) outcome.
    """
    return shapley_values(ctx.participants, lambda s: coalition_value(ctx, s), limit=limit)


def shapley_by_permutations(
    ctx: CharacteristicContext, *, limit: int = PERMUTATION_PARTICIPANT_LIMIT
) -> dict[str, float]:
    """Oracle-route allocation; must agree with `shapley_allocation`."""
    return permutation_shapley_values(
        ctx.participants, lambda s: coalition_value(ctx, s), limit=limit
    )
