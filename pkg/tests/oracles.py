"""Independent reference implementations used as test oracles.

Everything here is deliberately naive: plain Python floats, explicit loops,
two-pass statistics and sorting. None of it shares code with the library.
"""

import math


def ir_oracle(anchors, ranges):
    l = max(a[0] - r for a, r in zip(anchors, ranges))
    r_ = min(a[0] + r for a, r in zip(anchors, ranges))
    t = min(a[1] + r for a, r in zip(anchors, ranges))
    b = max(a[1] - r for a, r in zip(anchors, ranges))
    return l, r_, t, b


def vertices_oracle(anchors, ranges):
    l, r, t, b = ir_oracle(anchors, ranges)
    return [(l, b), (r, b), (l, t), (r, t)]


def min_max_oracle(anchors, ranges):
    l, r, t, b = ir_oracle(anchors, ranges)
    return (l + r) / 2, (t + b) / 2


def _centroid(verts, weights):
    total = sum(weights)
    return (sum(w * v[0] for w, v in zip(weights, verts)) / total,
            sum(w * v[1] for w, v in zip(weights, verts)) / total)


def e_min_max_oracle(anchors, ranges, weight):
    verts = vertices_oracle(anchors, ranges)
    denoms = []
    for vx, vy in verts:
        s = 0.0
        for (ax, ay), r in zip(anchors, ranges):
            d = math.hypot(vx - ax, vy - ay)
            s += (d - r) ** 2 if weight == "W2" else abs(d * d - r * r)
        denoms.append(s)
    if 0.0 in denoms:
        return _centroid(verts, [1.0 if s == 0 else 0.0 for s in denoms])
    return _centroid(verts, [1.0 / s for s in denoms])


def membership_oracle(d, low, med, up):
    if low < d < med:
        return (d - low) / (med - low)
    if med <= d < up:
        return (up - d) / (up - med)
    return 0.0


def md_min_max_oracle(anchors, ranges, mf):
    """Returns (x, y, fell_back)."""
    verts = vertices_oracle(anchors, ranges)
    weights = []
    for vx, vy in verts:
        mus = [membership_oracle(r - math.hypot(vx - ax, vy - ay), *mf)
               for (ax, ay), r in zip(anchors, ranges)]
        mean = sum(mus) / len(mus)
        var = sum((m - mean) ** 2 for m in mus) / len(mus)
        if var > 0:
            weights.append(mean / math.sqrt(var))
        else:
            weights.append(math.inf if mean > 0 else 0.0)
    if math.inf in weights:
        x, y = _centroid(verts, [1.0 if w == math.inf else 0.0 for w in weights])
        return x, y, False
    if sum(weights) == 0:
        x, y = min_max_oracle(anchors, ranges)
        return x, y, True
    x, y = _centroid(verts, weights)
    return x, y, False


def nearest_rank_oracle(values, q):
    ordered = sorted(values)
    n = len(ordered)
    k = 1
    while k < n and k < q * n - 1e-9:
        k += 1
    return ordered[k - 1]


def two_pass_var(values):
    mean = sum(values) / len(values)
    return sum((v - mean) ** 2 for v in values) / len(values)
