"""Pure-Python enumeration kernels over scale-normalized integer distances.

Mirrors the contract of the optional compiled module ``_kernel_c``. All
arithmetic is on Python ints, so there is no overflow concern; this module is
the always-correct fallback and the reference the compiled kernels are tested
against.

Shared argument layout (everything 0-based):
    n, m        player and bus counts
    dist        flat (n+1)*(n+1) tuple of scaled integer distances; index n = destination
    perms       flat m*n tuple; ``perms[j*n + pos]`` is the player at pickup position
                ``pos`` of bus ``j``
    fcode       social function: 0 = bus-distance total, 1 = worst cost, 2 = cost sum
    lead        how many buses the first player may use (m normally, 1 under
                symmetry reduction)
    order       flat n tuple for the sequential engines; ``order[k]`` is the player
                moving at stage ``k``

Outcome codes are lexicographic ranks: ``code = sum(sigma[i] * m**(n-1-i))``.
"""

from __future__ import annotations

from .errors import SetOverflowError

D_CODE, E_CODE, U_CODE = 0, 1, 2


def _ranks(n, m, perms):
    rank = [[0] * n for _ in range(m)]
    for j in range(m):
        base = j * n
        for pos in range(n):
            rank[j][perms[base + pos]] = pos
    return rank


def _eval_outcome(n, m, width, dist, perms, sigma, costs, first, nxt):
    # Backward pass per bus: suffix costs plus "first subscriber at or after
    # position" lookup tables used by the deviation checks.
    for j in range(m):
        base = j * n
        narr = nxt[j]
        narr[n] = -1
        acc = 0
        nxtv = n
        for pos in range(n - 1, -1, -1):
            q = perms[base + pos]
            if sigma[q] == j:
                acc = dist[q * width + nxtv] + acc
                costs[q] = acc
                nxtv = q
                narr[pos] = q
            else:
                narr[pos] = narr[pos + 1]
        first[j] = narr[0]


def _social_value(n, m, fcode, costs, first):
    if fcode == D_CODE:
        total = 0
        for j in range(m):
            f = first[j]
            if f >= 0:
                total += costs[f]
        return total
    if fcode == E_CODE:
        return max(costs)
    return sum(costs)


def _has_improvement(n, m, width, dist, sigma, costs, rank, nxt):
    for p in range(n):
        cur = costs[p]
        base = p * width
        for j in range(m):
            if j == sigma[p]:
                continue
            nx = nxt[j][rank[j][p] + 1]
            dev = dist[base + nx] + costs[nx] if nx >= 0 else dist[base + n]
            if dev < cur:
                return True
    return False


def _scan(n, m, dist, perms, fcode, lead, want_nash, collect):
    width = n + 1
    rank = _ranks(n, m, perms)
    sigma = [0] * n
    costs = [0] * n
    first = [0] * m
    nxt = [[0] * (n + 1) for _ in range(m)]
    total = lead * m ** (n - 1)
    codes = [] if collect else None
    count = 0
    minv = maxv = 0
    amin = amax = -1
    code = 0
    while True:
        _eval_outcome(n, m, width, dist, perms, sigma, costs, first, nxt)
        if not want_nash or not _has_improvement(n, m, width, dist, sigma, costs, rank, nxt):
            v = _social_value(n, m, fcode, costs, first)
            if amin < 0 or v < minv:
                minv, amin = v, code
            if amax < 0 or v > maxv:
                maxv, amax = v, code
            count += 1
            if collect:
                codes.append(code)
        code += 1
        if code >= total:
            break
        i = n - 1
        while True:
            sigma[i] += 1
            if sigma[i] < m:
                break
            sigma[i] = 0
            i -= 1
    return codes, count, minv, amin, maxv, amax


def scan_social(n, m, dist, perms, fcode, lead):
    """(min, argmin code, max, argmax code) of a social function over all outcomes."""
    _, _, minv, amin, maxv, amax = _scan(n, m, dist, perms, fcode, lead, False, False)
    return minv, amin, maxv, amax


def scan_nash(n, m, dist, perms, fcode, lead, collect):
    """Nash filter: (codes or None, count, min, argmin, max, argmax) over equilibria."""
    return _scan(n, m, dist, perms, fcode, lead, True, collect)


def _cost_closure(n, m, width, dist, perms, rank, weight):
    def cost_of(player, code):
        b = (code // weight[player]) % m
        cur = player * width
        acc = 0
        base = b * n
        for pos in range(rank[b][player] + 1, n):
            q = perms[base + pos]
            if (code // weight[q]) % m == b:
                acc += dist[cur + q]
                cur = q * width
        return acc + dist[cur + n]

    return cost_of


def spe_codes(n, m, dist, perms, order, node_cap):
    """All outcomes realizable by subgame-perfect play, as sorted codes.

    Set-valued backward induction: at a node where `mover` acts, an outcome in
    the subtree of action ``a`` survives iff every other action's subtree holds
    a continuation at least as costly for the mover.
    """
    width = n + 1
    rank = _ranks(n, m, perms)
    weight = [m ** (n - 1 - i) for i in range(n)]
    cost_of = _cost_closure(n, m, width, dist, perms, rank, weight)
    sigma = [0] * n

    def rec(stage):
        if stage == n:
            return [sum(sigma[i] * weight[i] for i in range(n))]
        mover = order[stage]
        kids = []
        maxes = []
        for a in range(m):
            sigma[mover] = a
            sub = rec(stage + 1)
            sub_costs = [cost_of(mover, c) for c in sub]
            kids.append((sub, sub_costs))
            maxes.append(max(sub_costs))
        i1 = min(range(m), key=maxes.__getitem__)
        m1 = maxes[i1]
        m2 = min(maxes[a] for a in range(m) if a != i1)
        out = []
        for a in range(m):
            threshold = m2 if a == i1 else m1
            sub, sub_costs = kids[a]
            for c, cost in zip(sub, sub_costs):
                if cost <= threshold:
                    out.append(c)
        if len(out) > node_cap:
            raise SetOverflowError(f"result set of size {len(out)} exceeds the per-node cap {node_cap}")
        return out

    result = rec(0)
    result.sort()
    return result


def zermelo_code(n, m, dist, perms, order):
    """Deterministic backward induction; ties break toward the lowest bus index."""
    width = n + 1
    rank = _ranks(n, m, perms)
    weight = [m ** (n - 1 - i) for i in range(n)]
    cost_of = _cost_closure(n, m, width, dist, perms, rank, weight)
    sigma = [0] * n

    def rec(stage):
        if stage == n:
            return sum(sigma[i] * weight[i] for i in range(n))
        mover = order[stage]
        best = -1
        best_cost = None
        for a in range(m):
            sigma[mover] = a
            code = rec(stage + 1)
            cost = cost_of(mover, code)
            if best_cost is None or cost < best_cost:
                best, best_cost = code, cost
        return best

    return rec(0)
