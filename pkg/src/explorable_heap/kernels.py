"""Traversal kernels.

Every kernel walks the agent edge by edge through the same ``_down``/``_up``
primitives that single Python-level moves use, so travel is metered exactly
as if the loop were written move by move in Python.

Cursor state is a tuple ``(dirs, keys, fps, tags, meta)``:

* ``dirs[i]``  step taken from depth ``i`` (0 = left, 1 = right)
* ``keys[i]``, ``fps[i]``, ``tags[i]``  label, path fingerprint and family
  state of the node at depth ``i`` on the current root path
* ``meta``  ``[depth, travel, floor]``; ``floor`` is the shallowest depth the
  agent may climb to

Source state is ``(family, left, right, table_keys)``; the last three arrays
describe an explicit trie and are empty for the formula families.

Status codes below zero are errors: ``OVERFLOW`` (path arrays full) and
``BUDGET`` (a search ran past its node budget).
"""
from ._jit import I64, MASK64, U64, njit

FAM_RANDOM = 0
FAM_TWO_PATH = 1
FAM_TRIE = 2

OVERFLOW = -1
BUDGET = -2

HUGE = I64(1 << 40)
NEG_INF = I64(-(1 << 63))
POS_INF = I64((1 << 63) - 1)

GOLDEN = U64(0x9E3779B97F4A7C15)
_C1 = U64(0xBF58476D1CE4E5B9)
_C2 = U64(0x94D049BB133111EB)
_K_DIR = U64(0xD6E8FEB86659FD93)
_K_INC = U64(0xA0761D6478BD642F)
_K_PAD = U64(0xE7037ED1A0B428DB)
_LOW24 = U64((1 << 24) - 1)
_S25 = U64(25)
_S27 = U64(27)
_S30 = U64(30)
_S31 = U64(31)
_S44 = U64(44)


@njit
def mix64(z):
    """splitmix64 finalizer; the repo's fixed keyed mixer."""
    z = ((z ^ (z >> _S30)) * _C1) & MASK64
    z = ((z ^ (z >> _S27)) * _C2) & MASK64
    return z ^ (z >> _S31)


@njit
def rng_next(rng):
    s = (U64(rng[0]) + GOLDEN) & MASK64
    rng[0] = s
    return mix64(s)


@njit
def rng_below(rng, m):
    return I64(rng_next(rng) % U64(m))


@njit
def _pad(pkey, fp):
    return pkey + HUGE + I64(mix64(fp ^ _K_PAD) >> _S25)


@njit
def child_state(fam, tl, tr, tkey, pkey, pfp, ptag, d):
    """Label, fingerprint and family state of child ``d`` of a node."""
    fp = mix64(pfp ^ ((U64(d + 1) * _K_DIR) & MASK64))
    if fam == FAM_RANDOM:
        # increment in [1, 2**20]; fingerprint bits keep labels distinct
        delta = I64(mix64(fp ^ _K_INC) >> _S44) + 1
        cum = (pkey >> 24) + delta
        return (cum << 24) | I64(fp & _LOW24), fp, ptag
    if fam == FAM_TWO_PATH:
        if ptag == 0:
            return I64(1 + d), fp, I64(1 + d)
        if ptag == 1 and d == 0:
            return pkey + 2, fp, I64(1)
        if ptag == 2 and d == 1:
            return pkey + 2, fp, I64(2)
        return _pad(pkey, fp), fp, I64(3)
    if ptag >= 0:
        if d == 0:
            c = I64(tl[ptag])
        else:
            c = I64(tr[ptag])
        if c >= 0:
            return I64(tkey[c]), fp, c
    return _pad(pkey, fp), fp, I64(-1)


@njit
def down(src, cur, d):
    fam, tl, tr, tkey = src
    dirs, keys, fps, tags, meta = cur
    depth = meta[0]
    if depth + 1 >= keys.shape[0]:
        return False
    k, f, t = child_state(
        fam, tl, tr, tkey, I64(keys[depth]), U64(fps[depth]), I64(tags[depth]), d
    )
    dirs[depth] = d
    keys[depth + 1] = k
    fps[depth + 1] = f
    tags[depth + 1] = t
    meta[0] = depth + 1
    meta[1] += 1
    return True


@njit
def up(cur):
    meta = cur[4]
    if meta[0] <= meta[2]:
        return False
    meta[0] -= 1
    meta[1] += 1
    return True


@njit
def climb_to(cur, depth):
    meta = cur[4]
    while meta[0] > depth:
        meta[0] -= 1
        meta[1] += 1


@njit
def dfs_count(src, cur, cutoff, cap):
    """min(#{v below the current node : key(v) <= cutoff}, cap + 1).

    Children whose key exceeds the cutoff are read and immediately left;
    nothing below them is touched. Returns to the start node.
    """
    dirs, keys = cur[0], cur[1]
    meta = cur[4]
    start = meta[0]
    if keys[start] > cutoff:
        return I64(0)
    count = I64(1)
    if count > cap:
        return cap + 1
    # phase 0: try left child, 1: try right child, 2: done here, go up
    phase = 0
    while True:
        if phase < 2:
            if not down(src, cur, phase):
                climb_to(cur, start)
                return I64(OVERFLOW)
            if keys[meta[0]] <= cutoff:
                count += 1
                if count > cap:
                    climb_to(cur, start)
                    return cap + 1
                phase = 0
            else:
                up(cur)
                phase += 1
        else:
            depth = meta[0]
            if depth == start:
                return count
            phase = I64(dirs[depth - 1]) + 1
            up(cur)


@njit
def goto_key(src, cur, target, fence, budget):
    """Search below the current node for ``target``.

    Expands a node only if its key is below ``target`` and at most ``fence``.
    Returns 1 with the agent on the target, 0 (agent back at start) when the
    pruned subtree is exhausted, ``BUDGET`` after ``budget`` expansions.
    """
    dirs, keys = cur[0], cur[1]
    meta = cur[4]
    start = meta[0]
    if keys[start] == target:
        return I64(1)
    if keys[start] > target or keys[start] > fence:
        return I64(0)
    expanded = I64(1)
    phase = 0
    while True:
        if phase < 2:
            if not down(src, cur, phase):
                climb_to(cur, start)
                return I64(OVERFLOW)
            k = keys[meta[0]]
            if k == target:
                return I64(1)
            if k < target and k <= fence:
                expanded += 1
                if expanded > budget:
                    climb_to(cur, start)
                    return I64(BUDGET)
                phase = 0
            else:
                up(cur)
                phase += 1
        else:
            depth = meta[0]
            if depth == start:
                return I64(0)
            phase = I64(dirs[depth - 1]) + 1
            up(cur)


@njit
def has_witness(src, cur, lo, hi):
    """Whether the subtree at the agent holds a key strictly inside (lo, hi).

    Walks the part of the subtree with keys <= lo plus its direct children and
    stops at the first witness. Returns to the start node.
    """
    dirs, keys = cur[0], cur[1]
    meta = cur[4]
    start = meta[0]
    k = keys[start]
    if k > lo:
        if k < hi:
            return I64(1)
        return I64(0)
    phase = 0
    while True:
        if phase < 2:
            if not down(src, cur, phase):
                climb_to(cur, start)
                return I64(OVERFLOW)
            k = keys[meta[0]]
            if k <= lo:
                phase = 0
            elif k < hi:
                climb_to(cur, start)
                return I64(1)
            else:
                up(cur)
                phase += 1
        else:
            depth = meta[0]
            if depth == start:
                return I64(0)
            phase = I64(dirs[depth - 1]) + 1
            up(cur)


@njit
def roots_sample(src, cur, l0, lo, hi, rng, out):
    """Enumerate the active roots below the agent and reservoir-sample one.

    A root is a child of a node with key <= l0 whose own key exceeds l0; it is
    active when its subtree has a key in (lo, hi). ``out`` receives
    ``[active count, chosen key]``. Returns the count or an error code.
    """
    dirs, keys = cur[0], cur[1]
    meta = cur[4]
    start = meta[0]
    out[0] = 0
    out[1] = POS_INF
    if keys[start] > l0:
        return I64(0)
    m = I64(0)
    phase = 0
    while True:
        if phase < 2:
            if not down(src, cur, phase):
                climb_to(cur, start)
                return I64(OVERFLOW)
            k = keys[meta[0]]
            if k <= l0:
                phase = 0
                continue
            w = has_witness(src, cur, lo, hi)
            if w < 0:
                climb_to(cur, start)
                return w
            if w == 1:
                m += 1
                if rng_below(rng, m) == 0:
                    out[1] = k
            up(cur)
            phase += 1
        else:
            depth = meta[0]
            if depth == start:
                out[0] = m
                return m
            phase = I64(dirs[depth - 1]) + 1
            up(cur)


@njit
def window_sample(src, cur, lo, hi, hi_inclusive, rng, out):
    """Reservoir-sample one key of the subtree lying in (lo, hi).

    With ``hi_inclusive`` the window is (lo, hi]. Only nodes inside the
    window's upper bound are expanded. ``out`` receives
    ``[window size, chosen key]``.
    """
    dirs, keys = cur[0], cur[1]
    meta = cur[4]
    start = meta[0]
    out[0] = 0
    out[1] = POS_INF
    k = keys[start]
    if k > hi or (k == hi and not hi_inclusive):
        return I64(0)
    seen = I64(0)
    if k > lo:
        seen = 1
        out[1] = k
    phase = 0
    while True:
        if phase < 2:
            if not down(src, cur, phase):
                climb_to(cur, start)
                return I64(OVERFLOW)
            k = keys[meta[0]]
            if k < hi or (k == hi and hi_inclusive):
                if k > lo:
                    seen += 1
                    if rng_below(rng, seen) == 0:
                        out[1] = k
                phase = 0
            else:
                up(cur)
                phase += 1
        else:
            depth = meta[0]
            if depth == start:
                out[0] = seen
                return seen
            phase = I64(dirs[depth - 1]) + 1
            up(cur)


@njit
def walk_to(src, cur, path, length):
    """Move along tree edges to the node addressed by ``path[:length]``."""
    dirs = cur[0]
    meta = cur[4]
    depth = meta[0]
    common = 0
    limit = min(depth, length)
    while common < limit and dirs[common] == path[common]:
        common += 1
    if common < meta[2]:
        return I64(OVERFLOW)
    climb_to(cur, common)
    for i in range(common, length):
        if not down(src, cur, I64(path[i])):
            return I64(OVERFLOW)
    return I64(0)
