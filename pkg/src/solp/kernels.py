"""Bitmask kernels for exhaustive enumeration.

Ground rules are packed into parallel int64 arrays: ``head`` (bit index, or -1
for a headless rule), ``pos``/``neg`` body masks, and an optional count
literal per rule (``cmask`` bits counted, true iff ``clo <= popcount <= chi``;
``cmask == 0`` with ``has_count == False`` means no count literal).

Two implementations exist for every kernel: numba ``@njit`` loops and
vectorised numpy. ``SOLP_KERNEL=numpy`` forces the numpy path; otherwise numba
is used when it imports. Every public function also takes ``backend=``.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


MAX_BITS = 62
BACKENDS = ("numba", "numpy")


def default_backend() -> str:
    choice = os.environ.get("SOLP_KERNEL", "").strip().lower()
    if choice == "numpy" or not HAVE_NUMBA:
        return "numpy"
    if choice not in ("", "numba"):
        raise ValueError(f"SOLP_KERNEL must be 'numba' or 'numpy', got {choice!r}")
    return "numba"


def _resolve(backend: str | None) -> str:
    b = backend or default_backend()
    if b not in BACKENDS:
        raise ValueError(f"unknown kernel backend {b!r}")
    if b == "numba" and not HAVE_NUMBA:
        return "numpy"
    return b


class RuleArrays:
    """Packed ground rules; built once, shared by every kernel call."""

    __slots__ = ("head", "pos", "neg", "cmask", "clo", "chi", "has_count")

    def __init__(self, rules):
        # rules: iterable of (head, pos, neg) or (head, pos, neg, (cmask, lo, hi))
        rows = list(rules)
        m = len(rows)
        self.head = np.full(m, -1, np.int64)
        self.pos = np.zeros(m, np.int64)
        self.neg = np.zeros(m, np.int64)
        self.cmask = np.zeros(m, np.int64)
        self.clo = np.zeros(m, np.int64)
        self.chi = np.zeros(m, np.int64)
        self.has_count = np.zeros(m, np.bool_)
        for i, row in enumerate(rows):
            self.head[i], self.pos[i], self.neg[i] = row[0], row[1], row[2]
            if len(row) > 3 and row[3] is not None:
                self.cmask[i], self.clo[i], self.chi[i] = row[3]
                self.has_count[i] = True

    def __len__(self) -> int:
        return int(self.head.shape[0])

    def args(self):
        return (self.head, self.pos, self.neg, self.cmask, self.clo, self.chi, self.has_count)


# -- numba ---------------------------------------------------------------------


@njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


# scalar arguments: passing the arrays themselves costs far more than the test
@njit(cache=True)
def _body_ok(x, pos, neg, cmask, lo, hi, has_count):
    if (x & pos) != pos or (x & neg) != 0:
        return False
    if has_count:
        c = _popcount(x & cmask)
        return lo <= c <= hi
    return True


@njit(cache=True)
def _consequence_scan_nb(head, pos, neg, k):
    size = 1 << k
    t = np.zeros(size, np.int64)
    viol = np.zeros(size, np.bool_)
    m = head.shape[0]
    for x in range(size):
        acc = 0
        for r in range(m):
            if (x & pos[r]) == pos[r] and (x & neg[r]) == 0:
                if head[r] < 0:
                    viol[x] = True
                else:
                    acc |= np.int64(1) << head[r]
        t[x] = acc
    return t, viol


@njit(cache=True)
def _is_model(x, head, pos, neg, cmask, clo, chi, has_count):
    for r in range(head.shape[0]):
        if _body_ok(x, pos[r], neg[r], cmask[r], clo[r], chi[r], has_count[r]):
            if head[r] < 0 or (x >> head[r]) & 1 == 0:
                return False
    return True


@njit(cache=True)
def _flp_minimal(m_set, active, head, pos, neg, cmask, clo, chi, has_count):
    # is any proper subset of m_set a model of the rules flagged in `active`?
    sub = (m_set - 1) & m_set
    while True:
        ok = True
        for r in range(head.shape[0]):
            if active[r] and _body_ok(sub, pos[r], neg[r], cmask[r], clo[r], chi[r], has_count[r]):
                if head[r] < 0 or (sub >> head[r]) & 1 == 0:
                    ok = False
                    break
        if ok:
            return False
        if sub == 0:
            return True
        sub = (sub - 1) & m_set


@njit(cache=True)
def _answer_sets_nb(head, pos, neg, cmask, clo, chi, has_count, u):
    size = np.int64(1) << u
    m = head.shape[0]
    out = []
    active = np.zeros(m, np.bool_)
    for x in range(size):
        sup = np.int64(0)
        bad = False
        for r in range(m):
            if _body_ok(x, pos[r], neg[r], cmask[r], clo[r], chi[r], has_count[r]):
                if head[r] < 0 or (x >> head[r]) & 1 == 0:
                    bad = True
                    break
                sup |= np.int64(1) << head[r]
                active[r] = True
            else:
                active[r] = False
        if bad or (x & ~sup) != 0:
            continue
        if x == 0 or _flp_minimal(x, active, head, pos, neg, cmask, clo, chi, has_count):
            out.append(x)
    res = np.empty(len(out), np.int64)
    for i in range(len(out)):
        res[i] = out[i]
    return res


@njit(cache=True)
def _scatter(bits, positions):
    x = np.int64(0)
    for i in range(positions.shape[0]):
        if (bits >> i) & 1:
            x |= np.int64(1) << positions[i]
    return x


@njit(cache=True)
def _guess_and_derive_nb(guess_pos, prime_pos, head, pos, neg, cmask, clo, chi, has_count,
                         order, chead, cpos, cneg, ccmask, cclo, cchi, chas):
    b = guess_pos.shape[0]
    full = (np.int64(1) << b) - 1
    out = []
    for g in range(np.int64(1) << b):
        x = _scatter(g, guess_pos) | _scatter(full & ~g, prime_pos)
        for idx in range(order.shape[0]):
            r = order[idx]
            if _body_ok(x, pos[r], neg[r], cmask[r], clo[r], chi[r], has_count[r]):
                x |= np.int64(1) << head[r]
        if _is_model(x, chead, cpos, cneg, ccmask, cclo, cchi, chas):
            out.append(x)
    res = np.empty(len(out), np.int64)
    for i in range(len(out)):
        res[i] = out[i]
    return res


# -- numpy ---------------------------------------------------------------------


def _body_true_np(x, r, ra: RuleArrays):
    ok = ((x & ra.pos[r]) == ra.pos[r]) & ((x & ra.neg[r]) == 0)
    if ra.has_count[r]:
        c = np.bitwise_count(x & ra.cmask[r]).astype(np.int64)
        ok &= (c >= ra.clo[r]) & (c <= ra.chi[r])
    return ok


def _consequence_scan_np(ra: RuleArrays, k: int):
    x = np.arange(1 << k, dtype=np.int64)
    t = np.zeros_like(x)
    viol = np.zeros(x.shape, np.bool_)
    for r in range(len(ra)):
        fired = ((x & ra.pos[r]) == ra.pos[r]) & ((x & ra.neg[r]) == 0)
        if ra.head[r] < 0:
            viol |= fired
        else:
            t |= np.where(fired, np.int64(1) << ra.head[r], np.int64(0))
    return t, viol


def _model_and_support_np(x, ra: RuleArrays):
    ok = np.ones(x.shape, np.bool_)
    sup = np.zeros_like(x)
    for r in range(len(ra)):
        fired = _body_true_np(x, r, ra)
        if ra.head[r] < 0:
            ok &= ~fired
        else:
            hb = np.int64(1) << ra.head[r]
            ok &= ~fired | ((x & hb) != 0)
            sup |= np.where(fired, hb, np.int64(0))
    return ok, sup


def _submasks(mask: int) -> np.ndarray:
    bits = [i for i in range(MAX_BITS + 1) if (mask >> i) & 1]
    idx = np.arange(1 << len(bits), dtype=np.int64)
    out = np.zeros_like(idx)
    for i, b in enumerate(bits):
        out |= ((idx >> i) & 1) << b
    return out


def _flp_minimal_np(m_set: int, ra: RuleArrays) -> bool:
    one = np.array([m_set], np.int64)
    active = [r for r in range(len(ra)) if _body_true_np(one, r, ra)[0]]
    subs = _submasks(m_set)
    subs = subs[subs != m_set]
    ok = np.ones(subs.shape, np.bool_)
    for r in active:
        fired = _body_true_np(subs, r, ra)
        if ra.head[r] < 0:
            ok &= ~fired
        else:
            ok &= ~fired | ((subs >> ra.head[r]) & 1 == 1)
    return not ok.any()


def _answer_sets_np(ra: RuleArrays, u: int, chunk: int = 1 << 18):
    found = []
    for start in range(0, 1 << u, chunk):
        x = np.arange(start, min(start + chunk, 1 << u), dtype=np.int64)
        ok, sup = _model_and_support_np(x, ra)
        ok &= (x & ~sup) == 0
        for m_set in x[ok]:
            m_set = int(m_set)
            if m_set == 0 or _flp_minimal_np(m_set, ra):
                found.append(m_set)
    return np.array(found, np.int64)


def _guess_and_derive_np(guess_pos, prime_pos, ra: RuleArrays, order, check: RuleArrays):
    b = len(guess_pos)
    g = np.arange(1 << b, dtype=np.int64)
    x = np.zeros_like(g)
    for i, p in enumerate(guess_pos):
        x |= ((g >> i) & 1) << int(p)
    for i, p in enumerate(prime_pos):
        x |= (((g >> i) & 1) ^ 1) << int(p)
    for r in order:
        fired = _body_true_np(x, int(r), ra)
        x |= np.where(fired, np.int64(1) << ra.head[r], np.int64(0))
    ok, _ = _model_and_support_np(x, check)
    return x[ok]


# -- public --------------------------------------------------------------------


def consequence_scan(ra: RuleArrays, k: int, backend: str | None = None):
    """T(x) and constraint violation for every x in [0, 2**k).

    Rules must be count-free. Returns ``(t, violated)`` arrays of length 2**k.
    """
    if k > MAX_BITS:
        raise ValueError(f"{k} atoms exceed the {MAX_BITS}-bit kernel width")
    if len(ra) and ra.has_count.any():
        raise ValueError("consequence_scan takes count-free rules")
    if _resolve(backend) == "numba":
        return _consequence_scan_nb(ra.head, ra.pos, ra.neg, k)
    return _consequence_scan_np(ra, k)


def answer_set_masks(ra: RuleArrays, u: int, backend: str | None = None) -> np.ndarray:
    """FLP answer sets over a universe of ``u`` bits, by exhaustive search."""
    if u > MAX_BITS:
        raise ValueError(f"{u} atoms exceed the {MAX_BITS}-bit kernel width")
    if _resolve(backend) == "numba":
        return np.sort(_answer_sets_nb(*ra.args(), u))
    return np.sort(_answer_sets_np(ra, u))


def guess_and_derive(guess_pos, prime_pos, ra: RuleArrays, order, check: RuleArrays,
                     backend: str | None = None) -> np.ndarray:
    """For each assignment of the guess bits, set the matching prime bits to
    the complement, fire ``order`` rules once in sequence, and keep the
    results that satisfy every rule in ``check``."""
    guess_pos = np.asarray(guess_pos, np.int64)
    prime_pos = np.asarray(prime_pos, np.int64)
    order = np.asarray(order, np.int64)
    if _resolve(backend) == "numba":
        res = _guess_and_derive_nb(guess_pos, prime_pos, *ra.args(), order, *check.args())
    else:
        res = _guess_and_derive_np(guess_pos, prime_pos, ra, order, check)
    return np.sort(res)


def popcount(x: int) -> int:
    return int(x).bit_count()
