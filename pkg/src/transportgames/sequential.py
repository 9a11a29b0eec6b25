"""Sequential play: all SPE-realizable outcomes, a deterministic backward
induction solver, an exhaustive strategy-profile oracle, and the sequential
price ratios.

Players commit to buses one at a time following a move order (identity by
default), each seeing only her predecessors' choices but anticipating selfish
successors. `spe_outcomes` computes the exact set of outcomes some
subgame-perfect strategy profile realizes: ties at a decision node keep every
minimizing action alive, and off-path continuations may be chosen adversarially
among surviving ones, which is what the per-node max filter encodes.
"""

from __future__ import annotations

from itertools import product
from typing import Sequence

from . import engine
from .core import (
    CostVector,
    Instance,
    Outcome,
    OutcomeSet,
    SocialTag,
    cost_vector,
    evaluate_outcomes,
)
from .errors import DegenerateOptimumError, OracleBudgetExceededError
from .simultaneous import (
    DEFAULT_OUTCOME_BUDGET,
    RatioReport,
    _decode,
    _require_budget,
    _require_tag,
    optimal_social,
)

DEFAULT_NODE_SET_CAP = 10**6
DEFAULT_ORACLE_BUDGET = 2_000_000

MoveOrder = tuple[int, ...]


def _resolve_order(inst: Instance, order: Sequence[int] | None) -> MoveOrder:
    if order is None:
        return tuple(range(1, inst.n + 1))
    resolved = tuple(int(p) for p in order)
    if sorted(resolved) != list(range(1, inst.n + 1)):
        raise ValueError(f"move order must be a permutation of players 1..{inst.n}, got {resolved}")
    return resolved


def spe_outcomes(
    inst: Instance,
    order: Sequence[int] | None = None,
    budget: int = DEFAULT_OUTCOME_BUDGET,
    node_set_cap: int = DEFAULT_NODE_SET_CAP,
    backend: str | None = None,
) -> OutcomeSet:
    """Exactly the outcomes realized by some subgame-perfect strategy profile.

    Never empty: any finite perfect-information game admits at least one such
    profile. Raises `SetOverflowError` when a per-node result set exceeds
    `node_set_cap`.
    """
    order_t = _resolve_order(inst, order)
    _require_budget(inst, budget)
    view = engine.scaled_view(inst)
    kern = engine.resolve_backend(view, backend)
    codes = kern.spe_codes(view.n, view.m, view.dist, view.perms, tuple(p - 1 for p in order_t), node_set_cap)
    return evaluate_outcomes(inst, [_decode(c, inst.n, inst.m) for c in codes])


def zermelo_outcome(
    inst: Instance,
    order: Sequence[int] | None = None,
    budget: int = DEFAULT_OUTCOME_BUDGET,
    backend: str | None = None,
) -> tuple[Outcome, CostVector]:
    """One deterministic subgame-perfect outcome via backward induction.

    Every tie breaks toward the lowest-numbered bus, so the result is
    reproducible; it always belongs to `spe_outcomes`.
    """
    order_t = _resolve_order(inst, order)
    _require_budget(inst, budget)
    view = engine.scaled_view(inst)
    kern = engine.resolve_backend(view, backend)
    code = kern.zermelo_code(view.n, view.m, view.dist, view.perms, tuple(p - 1 for p in order_t))
    sigma = _decode(code, inst.n, inst.m)
    return sigma, cost_vector(inst, sigma)


def oracle_profile_count(inst: Instance) -> int:
    """Number of strategy profiles the oracle enumerates: prod_k m^(m^k)."""
    total = 1
    for k in range(inst.n):
        total *= inst.m ** (inst.m**k)
    return total


def spe_oracle(
    inst: Instance,
    order: Sequence[int] | None = None,
    profile_budget: int = DEFAULT_ORACLE_BUDGET,
) -> OutcomeSet:
    """Brute-force reference: enumerate every strategy profile and keep the
    subgame-perfect ones, returning their realized outcomes.

    A profile passes when at every prefix the prescribed action minimizes the
    mover's continuation cost against single-action deviations (the one-shot
    deviation property). Deliberately independent of `spe_outcomes` and kept
    in plain Python; only viable for tiny games.
    """
    order_t = _resolve_order(inst, order)
    n, m = inst.n, inst.m
    total_profiles = 1
    for k in range(n):
        total_profiles *= m ** (m**k)
        if total_profiles > profile_budget:
            raise OracleBudgetExceededError(
                f"{total_profiles}+ strategy profiles exceed the oracle budget of {profile_budget}"
            )

    view = engine.scaled_view(inst)
    dist, perms = view.dist, view.perms
    width = n + 1
    order0 = [p - 1 for p in order_t]
    rank = [[0] * n for _ in range(m)]
    for j in range(m):
        for pos in range(n):
            rank[j][perms[j * n + pos]] = pos

    def cost_on(sig: list[int], player: int) -> int:
        b = sig[player]
        acc = 0
        cur = player * width
        base = b * n
        for pos in range(rank[b][player] + 1, n):
            q = perms[base + pos]
            if sig[q] == b:
                acc += dist[cur + q]
                cur = q * width
        return acc + dist[cur + n]

    sizes = [m**k for k in range(n)]
    offsets = [0] * n
    for k in range(1, n):
        offsets[k] = offsets[k - 1] + sizes[k - 1]
    total_entries = offsets[-1] + sizes[-1]

    def outcome_from(table, stage: int, prefix_code: int, action: int) -> list[int]:
        sig = [0] * n
        c = prefix_code
        for s in range(stage - 1, -1, -1):
            c, r = divmod(c, m)
            sig[order0[s]] = r
        sig[order0[stage]] = action
        cur = prefix_code * m + action
        for s in range(stage + 1, n):
            act = table[offsets[s] + cur]
            sig[order0[s]] = act
            cur = cur * m + act
        return sig

    realized: set[Outcome] = set()
    for table in product(range(m), repeat=total_entries):
        ok = True
        # Deepest stages first: cheapest checks with the highest rejection rate.
        for stage in range(n - 1, -1, -1):
            mover = order0[stage]
            for prefix_code in range(sizes[stage]):
                a_star = table[offsets[stage] + prefix_code]
                base = cost_on(outcome_from(table, stage, prefix_code, a_star), mover)
                for a in range(m):
                    if a == a_star:
                        continue
                    if cost_on(outcome_from(table, stage, prefix_code, a), mover) < base:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            sig = outcome_from(table, 0, 0, table[0])
            realized.add(tuple(b + 1 for b in sig))
    return evaluate_outcomes(inst, sorted(realized))


def _spe_ratio(
    inst: Instance,
    function: SocialTag,
    want_worst: bool,
    measure: str,
    order: Sequence[int] | None,
    budget: int,
    node_set_cap: int,
    backend: str | None,
) -> RatioReport:
    _require_tag(function)
    spe = spe_outcomes(inst, order=order, budget=budget, node_set_cap=node_set_cap, backend=backend)
    optimal_value, optimal_witness = optimal_social(inst, function, budget=budget, backend=backend)
    if optimal_value == 0:
        raise DegenerateOptimumError(f"optimal {function} is zero; the ratio is undefined")
    value, witness = spe.max_social(function) if want_worst else spe.min_social(function)
    return RatioReport(measure, function, value, optimal_value, value / optimal_value, witness, optimal_witness)


def spoa(
    inst: Instance,
    function: SocialTag,
    order: Sequence[int] | None = None,
    budget: int = DEFAULT_OUTCOME_BUDGET,
    node_set_cap: int = DEFAULT_NODE_SET_CAP,
    backend: str | None = None,
) -> RatioReport:
    """Sequential price of anarchy: worst SPE-outcome value over the optimum."""
    return _spe_ratio(inst, function, True, "SPoA", order, budget, node_set_cap, backend)


def spos(
    inst: Instance,
    function: SocialTag,
    order: Sequence[int] | None = None,
    budget: int = DEFAULT_OUTCOME_BUDGET,
    node_set_cap: int = DEFAULT_NODE_SET_CAP,
    backend: str | None = None,
) -> RatioReport:
    """Sequential price of stability: best SPE-outcome value over the optimum."""
    return _spe_ratio(inst, function, False, "SPoS", order, budget, node_set_cap, backend)
