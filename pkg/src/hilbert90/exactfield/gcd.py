"""GCD of multivariate integer polynomials in raw dict form.

Polynomials here are plain ``{exponent tuple: int}`` dicts; callers in
:mod:`hilbert90.exactfield.poly` handle rational coefficients.  The main
route is the heuristic GCD (evaluate the last variable at a large integer,
recurse, interpolate back in the balanced radix); the fallback is the
content / primitive-part recursion on the last variable with primitive
pseudo-remainder sequences.
"""

from __future__ import annotations

from math import gcd, isqrt
from operator import add, sub

IntPoly = dict  # {tuple[int, ...]: int}

HEU_GCD_ATTEMPTS = 6


class _HeuristicFailed(Exception):
    pass


# -- raw helpers -------------------------------------------------------------

def content(f: IntPoly) -> int:
    g = 0
    for c in f.values():
        g = gcd(g, c)
        if g == 1:
            break
    return g


def _scale_div(f: IntPoly, c: int) -> IntPoly:
    if c == 1:
        return f
    return {e: v // c for e, v in f.items()}


def _scale(f: IntPoly, c: int) -> IntPoly:
    if c == 1:
        return f
    return {e: v * c for e, v in f.items()}


def _padd(f: IntPoly, g: IntPoly) -> IntPoly:
    r = dict(f)
    for e, c in g.items():
        v = r.get(e, 0) + c
        if v:
            r[e] = v
        else:
            r.pop(e, None)
    return r


def _psub(f: IntPoly, g: IntPoly) -> IntPoly:
    r = dict(f)
    for e, c in g.items():
        v = r.get(e, 0) - c
        if v:
            r[e] = v
        else:
            r.pop(e, None)
    return r


def _pmul(f: IntPoly, g: IntPoly) -> IntPoly:
    if len(f) < len(g):
        f, g = g, f
    r: IntPoly = {}
    get = r.get
    for eg, cg in g.items():
        for ef, cf in f.items():
            e = tuple(map(add, ef, eg))
            v = get(e, 0) + cf * cg
            if v:
                r[e] = v
            else:
                del r[e]
    return r


def divexact(f: IntPoly, g: IntPoly) -> IntPoly | None:
    """Quotient ``f / g`` over the integers, or ``None`` if ``g`` does not divide ``f``."""
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    if not f:
        return {}
    lt_g = max(g)
    lc_g = g[lt_g]
    # cheap degree filter: every variable degree of g must fit into f
    nv = len(lt_g)
    for i in range(nv):
        if max(e[i] for e in g) > max(e[i] for e in f):
            return None
    r = dict(f)
    q: IntPoly = {}
    while r:
        lt = max(r)
        e = tuple(map(sub, lt, lt_g))
        if min(e, default=0) < 0:
            return None
        c, rem = divmod(r[lt], lc_g)
        if rem:
            return None
        q[e] = c
        for eg, cg in g.items():
            k = tuple(map(add, e, eg))
            v = r.get(k, 0) - c * cg
            if v:
                r[k] = v
            else:
                del r[k]
    return q


def _is_monomial(f: IntPoly) -> bool:
    return len(f) == 1


def _min_exponents(f: IntPoly) -> tuple[int, ...]:
    it = iter(f)
    m = list(next(it))
    for e in it:
        for i, k in enumerate(e):
            if k < m[i]:
                m[i] = k
    return tuple(m)


def _shift(f: IntPoly, m: tuple[int, ...], sign: int = -1) -> IntPoly:
    if not any(m):
        return f
    if sign < 0:
        return {tuple(map(sub, e, m)): c for e, c in f.items()}
    return {tuple(map(add, e, m)): c for e, c in f.items()}


def _eval_last(f: IntPoly, x: int) -> IntPoly:
    r: IntPoly = {}
    powers: dict[int, int] = {}
    for e, c in f.items():
        k = e[-1]
        p = powers.get(k)
        if p is None:
            p = powers[k] = x ** k
        key = e[:-1]
        v = r.get(key, 0) + c * p
        if v:
            r[key] = v
        else:
            r.pop(key, None)
    return r


def _interpolate(h: IntPoly, x: int) -> IntPoly:
    half = x // 2
    r: IntPoly = {}
    for m, c in h.items():
        j = 0
        while c:
            d = c % x
            if d > half:
                d -= x
            if d:
                r[m + (j,)] = d
            c = (c - d) // x
            j += 1
    return r


def _primitive(f: IntPoly) -> IntPoly:
    c = content(f)
    if f[max(f)] < 0:
        c = -c
    return _scale_div(f, c)


# -- heuristic GCD -----------------------------------------------------------

def _heu_gcd(f: IntPoly, g: IntPoly, nv: int) -> tuple[IntPoly, IntPoly, IntPoly]:
    if nv == 0:
        a = f.get((), 0)
        b = g.get((), 0)
        h = gcd(a, b)
        return {(): h}, {(): a // h}, {(): b // h}
    c = gcd(content(f), content(g))
    f = _scale_div(f, c)
    g = _scale_div(g, c)
    f_norm = max(abs(v) for v in f.values())
    g_norm = max(abs(v) for v in g.values())
    b = 2 * min(f_norm, g_norm) + 29
    lf = abs(f[max(f)])
    lg = abs(g[max(g)])
    x = max(min(b, 99 * isqrt(b)), 2 * min(f_norm // lf, g_norm // lg) + 4)
    for _ in range(HEU_GCD_ATTEMPTS):
        ff = _eval_last(f, x)
        gg = _eval_last(g, x)
        if ff and gg:
            h, cff, cfg = _heu_gcd(ff, gg, nv - 1)
            hh = _interpolate(h, x)
            q1 = divexact(f, _primitive(hh)) if hh else None
            if q1 is not None:
                hh = _primitive(hh)
                q2 = divexact(g, hh)
                if q2 is not None:
                    return _scale(hh, c), q1, q2
            cf_i = _interpolate(cff, x)
            if cf_i:
                hq = divexact(f, cf_i)
                if hq is not None:
                    q2 = divexact(g, hq)
                    if q2 is not None:
                        return _scale(hq, c), cf_i, q2
            cg_i = _interpolate(cfg, x)
            if cg_i:
                hq = divexact(g, cg_i)
                if hq is not None:
                    q1 = divexact(f, hq)
                    if q1 is not None:
                        return _scale(hq, c), q1, cg_i
        x = 73794 * x * isqrt(isqrt(x)) // 27011
    raise _HeuristicFailed


# -- content / primitive-part recursion ------------------------------------

def _split_last(f: IntPoly) -> dict[int, IntPoly]:
    out: dict[int, IntPoly] = {}
    for e, c in f.items():
        out.setdefault(e[-1], {})[e[:-1]] = c
    return out


def _join_last(parts: dict[int, IntPoly]) -> IntPoly:
    return {m + (j,): c for j, p in parts.items() for m, c in p.items()}


def _uni_content(parts: dict[int, IntPoly], nv: int) -> IntPoly:
    c: IntPoly = {}
    for p in sorted(parts.values(), key=len):
        c = int_gcd(c, p, nv - 1) if c else _normalize_sign(dict(p))
        if len(c) == 1 and not any(next(iter(c))) and abs(next(iter(c.values()))) == 1:
            break
    return c


def _uni_divide(parts: dict[int, IntPoly], c: IntPoly) -> dict[int, IntPoly]:
    out = {}
    for j, p in parts.items():
        q = divexact(p, c)
        assert q is not None
        out[j] = q
    return out


def _prem(a: dict[int, IntPoly], b: dict[int, IntPoly]) -> dict[int, IntPoly]:
    """Sparse pseudo-remainder, up to a power of lc(b) (only primitive parts are used)."""
    db = max(b)
    lb = b[db]
    r = dict(a)
    while r and max(r) >= db:
        dr = max(r)
        lr = r[dr]
        shift = dr - db
        new = {j: _pmul(p, lb) for j, p in r.items()}
        for j, p in b.items():
            k = j + shift
            v = _psub(new.get(k, {}), _pmul(p, lr))
            if v:
                new[k] = v
            else:
                new.pop(k, None)
        r = new
    return r


def _gcd_rec(f: IntPoly, g: IntPoly, nv: int) -> IntPoly:
    if not f:
        return _normalize_sign(g)
    if not g:
        return _normalize_sign(f)
    if nv == 0:
        return {(): gcd(f[()], g[()])}
    fp, gp = _split_last(f), _split_last(g)
    cf, cg = _uni_content(fp, nv), _uni_content(gp, nv)
    c = _gcd_rec(cf, cg, nv - 1)
    a, b = _uni_divide(fp, cf), _uni_divide(gp, cg)
    if max(a) < max(b):
        a, b = b, a
    while True:
        r = _prem(a, b)
        if not r:
            break
        if max(r) == 0:
            b = {0: {(0,) * (nv - 1): 1}}
            break
        rc = _uni_content(r, nv)
        a, b = b, _uni_divide(r, rc)
    bc = _uni_content(b, nv)
    b = _uni_divide(b, bc)
    res = _join_last({j: _pmul(p, c) for j, p in b.items()})
    return _normalize_sign(res)


def _normalize_sign(f: IntPoly) -> IntPoly:
    if f and f[max(f)] < 0:
        return {e: -c for e, c in f.items()}
    return f


# -- public entry ------------------------------------------------------------

def int_gcd(f: IntPoly, g: IntPoly, nvars: int) -> IntPoly:
    """GCD of two integer polynomials, positive leading coefficient (lex)."""
    if not f:
        return _normalize_sign(dict(g))
    if not g:
        return _normalize_sign(dict(f))
    zero = (0,) * nvars
    ci = gcd(content(f), content(g))
    if _is_monomial(f) or _is_monomial(g):
        m = tuple(map(min, _min_exponents(f), _min_exponents(g)))
        return {m: ci}
    mf, mg = _min_exponents(f), _min_exponents(g)
    mono = tuple(map(min, mf, mg))
    f = _shift(f, mf)
    g = _shift(g, mg)
    # restrict to variables used by both; a variable missing from one side
    # is handled by the recursion through contents
    used = sorted({i for e in f for i, k in enumerate(e) if k} |
                  {i for e in g for i, k in enumerate(e) if k})
    if not used:
        return {mono: ci}
    fr = {tuple(e[i] for i in used): c for e, c in f.items()}
    gr = {tuple(e[i] for i in used): c for e, c in g.items()}
    nv = len(used)
    try:
        h = _heu_gcd(fr, gr, nv)[0]
    except _HeuristicFailed:
        h = _gcd_rec(fr, gr, nv)
    h = _normalize_sign(h)
    out: IntPoly = {}
    for e, c in h.items():
        full = list(zero)
        for i, k in zip(used, e):
            full[i] = k
        out[tuple(map(add, full, mono))] = c
    return out


def int_gcd_prs(f: IntPoly, g: IntPoly, nvars: int) -> IntPoly:
    """The primitive PRS route at the top level (used as a cross-check)."""
    return _normalize_sign(_gcd_rec(f, g, nvars))
