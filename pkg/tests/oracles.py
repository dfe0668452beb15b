"""Independent reference computations used by the acceptance suite."""
from collections import defaultdict

from modvar.linalg import rank


def block_dims_bruteforce(P):
    """dim e_j A e_i for A = KQ/(I + J^L), by spanning the ideal inside the path space.

    Every product u * r * w with u, w paths and r a generator is expanded in
    the path basis (terms of length >= L dropped); dim e_jAe_i is the number
    of paths i -> j of length < L minus the rank of those products.
    """
    q = P.quiver
    L = P.truncation
    paths = [p for p in q.paths(L - 1)]
    by_ends = defaultdict(list)
    for p in paths:
        by_ends[(p.target, p.source)].append(p)
    index = {key: {p.arrows: k for k, p in enumerate(ps)} for key, ps in by_ends.items()}
    rows = defaultdict(list)
    for r in P.relations:
        for u in paths:
            if u.source != r.target:
                continue
            for w in paths:
                if w.target != r.source:
                    continue
                key = (u.target, w.source)
                row = {}
                for c, p in r.terms:
                    word = u.arrows + p.arrows + w.arrows
                    if len(word) < L:
                        row[index[key][word]] = P.coefficient(c)
                if row:
                    rows[key].append(row)
    out = {}
    for key, ps in by_ends.items():
        n = len(ps)
        dense = [[row.get(k, 0) for k in range(n)] for row in rows[key]]
        out[key] = n - (rank(dense, P.field) if dense else 0)
    return out
