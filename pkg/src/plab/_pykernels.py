"""Pure-Python search kernels over bitset adjacency.

Graphs are given as a sequence ``adj`` where ``adj[v]`` is an int whose bit
``u`` is set iff ``u`` and ``v`` are adjacent.  The compiled module
``_ckernels`` exposes the same functions with the same results.
"""


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def max_clique_exhaustive(adj):
    """Largest clique size by plain recursion with a size bound."""
    n = len(adj)
    best = 0

    def expand(size, cands):
        nonlocal best
        if not cands:
            if size > best:
                best = size
            return
        while cands:
            if size + bin(cands).count("1") <= best:
                return
            low = cands & -cands
            v = low.bit_length() - 1
            cands ^= low
            expand(size + 1, cands & adj[v])

    expand(0, (1 << n) - 1)
    return best


def _color_order(adj, cands):
    # greedy sequential coloring; returns vertices with their color bound
    order = []
    uncolored = cands
    color = 0
    while uncolored:
        color += 1
        q = uncolored
        while q:
            low = q & -q
            v = low.bit_length() - 1
            q ^= low
            uncolored ^= low
            q &= ~adj[v]
            order.append((v, color))
    return order


def max_clique(adj):
    """Largest clique size by branch and bound with a coloring bound."""
    n = len(adj)
    best = 0

    def expand(size, cands):
        nonlocal best
        order = _color_order(adj, cands)
        for v, color in reversed(order):
            if size + color <= best:
                return
            nxt = cands & adj[v]
            if nxt:
                expand(size + 1, nxt)
            elif size + 1 > best:
                best = size + 1
            cands &= ~(1 << v)

    if n:
        expand(0, (1 << n) - 1)
    return best


def scan_clique_extensions(adj, k):
    """Enumerate every k-clique and measure its common neighbourhood.

    Returns ``(count, max_ext, witness)`` where ``count`` is the number of
    k-cliques, ``max_ext`` the largest number of vertices adjacent to all
    members of one clique, and ``witness`` the first clique (ascending
    member tuple) reaching ``max_ext`` when ``max_ext > 1``, else ``None``.
    """
    n = len(adj)
    full = (1 << n) - 1
    count = 0
    max_ext = 0
    witness = None
    members = []

    def rec(cands, common):
        nonlocal count, max_ext, witness
        if len(members) == k:
            count += 1
            ext = bin(common).count("1")
            if ext > max_ext:
                max_ext = ext
                if ext > 1:
                    witness = tuple(members)
            return
        need = k - len(members)
        while cands:
            if bin(cands).count("1") < need:
                return
            low = cands & -cands
            v = low.bit_length() - 1
            cands ^= low
            members.append(v)
            rec(cands & adj[v], common & adj[v])
            members.pop()

    if k == 0:
        return 1, bin(full).count("1"), None
    rec(full, full)
    return count, max_ext, witness


def injective_homomorphisms(adj):
    """Yield every injective edge-preserving self-map as a tuple of images.

    Vertices are assigned in index order and candidate images are tried in
    ascending order, so the stream order is deterministic.
    """
    n = len(adj)
    full = (1 << n) - 1
    # earlier neighbours of each vertex
    back = [[u for u in _bits(adj[v]) if u < v] for v in range(n)]
    img = [0] * n

    def rec(v, used):
        if v == n:
            yield tuple(img)
            return
        cands = full & ~used
        for u in back[v]:
            cands &= adj[img[u]]
            if not cands:
                return
        for w in _bits(cands):
            img[v] = w
            yield from rec(v + 1, used | (1 << w))

    yield from rec(0, 0)


def count_injective_homomorphisms(adj):
    return sum(1 for _ in injective_homomorphisms(adj))
