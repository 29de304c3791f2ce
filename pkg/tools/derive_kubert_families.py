"""Regenerate src/ectorsion/data/kubert_families.json.

Starts from Kubert's Tate normal forms ``y^2 + (1-c)xy - by = x^3 - bx^2``
with ``(b, c)`` rational in a parameter, converts to ``y^2 = x^3 + f x + g``,
clears denominators with ``(w^4, w^6)`` scalings, removes common
``(h^4, h^6)`` factors, and moves the point at infinity off the cusps so that
``deg f = 4l`` and ``deg g = 6l``.  Needs sympy (dev only).

    python tools/derive_kubert_families.py > src/ectorsion/data/kubert_families.json
"""

import json
import sys

import sympy as sp

t = sp.symbols("t")


def tate(b, c):
    return {"a1": 1 - c, "a2": -b, "a3": -b, "a4": 0, "a6": 0}


def kubert_table():
    out = {}
    out["Z/4"] = tate(t, 0)
    out["Z/5"] = tate(t, t)
    out["Z/6"] = tate(t + t**2, t)
    out["Z/7"] = tate(t**3 - t**2, t**2 - t)
    d = t
    b8 = (2 * d - 1) * (d - 1)
    out["Z/8"] = tate(b8, b8 / d)
    c9 = t**2 * (t - 1)
    out["Z/9"] = tate(c9 * (t**2 - t + 1), c9)
    f = t
    d = f**2 / (f - (f - 1) ** 2)
    c10 = f * (d - 1)
    out["Z/10"] = tate(c10 * d, c10)
    m = (3 * t - 3 * t**2 - 1) / (t - 1)
    f = m / (1 - t)
    d = m + t
    c12 = f * (d - 1)
    out["Z/12"] = tate(c12 * d, c12)
    out["Z/2xZ/4"] = tate(t**2 - sp.Rational(1, 16), 0)
    c26 = (10 - 2 * t) / (t**2 - 9)
    out["Z/2xZ/6"] = tate(c26 + c26**2, c26)
    d = t * (8 * t + 2) / (8 * t**2 - 1)
    b28 = (2 * d - 1) * (d - 1)
    out["Z/2xZ/8"] = tate(b28, b28 / d)
    return out


def short_form(a):
    b2 = a["a1"] ** 2 + 4 * a["a2"]
    b4 = 2 * a["a4"] + a["a1"] * a["a3"]
    b6 = a["a3"] ** 2 + 4 * a["a6"]
    c4 = b2**2 - 24 * b4
    c6 = -(b2**3) + 36 * b2 * b4 - 216 * b6
    return sp.cancel(-27 * c4), sp.cancel(-54 * c6)


def clear(A, B):
    """Polynomials (F, G) with F = w^4 A, G = w^6 B, then strip (h^4, h^6) factors."""
    nA, dA = sp.fraction(sp.together(A))
    nB, dB = sp.fraction(sp.together(B))
    w = sp.Integer(1)
    for q, _ in sp.factor_list(sp.Poly(dA * dB, t))[1]:
        q = q.as_expr()
        ka = _mult(dA, q)
        kb = _mult(dB, q)
        k = max(-(-ka // 4), -(-kb // 6))
        w *= q**k
    F = sp.cancel(A * w**4)
    G = sp.cancel(B * w**6)
    assert sp.fraction(F)[1].is_number and sp.fraction(G)[1].is_number
    for h, _ in sp.factor_list(sp.Poly(sp.fraction(F)[0], t))[1]:
        h = h.as_expr()
        if h.is_number:
            continue
        while _mult(F, h) >= 4 and _mult(G, h) >= 6:
            F = sp.cancel(F / h**4)
            G = sp.cancel(G / h**6)
    return sp.expand(F), sp.expand(G)


def _mult(expr, q):
    num = sp.fraction(sp.together(expr))[0]
    p = sp.Poly(num, t)
    qq = sp.Poly(q, t)
    k = 0
    while True:
        quo, rem = sp.div(p, qq)
        if not rem.is_zero:
            return k
        p = quo
        k += 1


def fix_infinity(F, G, ell):
    """Reparametrize t -> c + 1/t so both degrees are exactly 4l and 6l."""
    if sp.degree(F, t) == 4 * ell and sp.degree(G, t) == 6 * ell:
        return F, G
    for c in range(0, 50):
        for cc in (c, -c):
            if F.subs(t, cc) != 0 and G.subs(t, cc) != 0:
                F2 = sp.expand(sp.cancel(t ** (4 * ell) * F.subs(t, cc + 1 / t)))
                G2 = sp.expand(sp.cancel(t ** (6 * ell) * G.subs(t, cc + 1 / t)))
                if sp.degree(F2, t) == 4 * ell and sp.degree(G2, t) == 6 * ell:
                    return F2, G2
    raise RuntimeError("no good reparametrization found")


def normalize_content(F, G):
    """Scale by rational u^4, u^6 to make integer coefficients with small content."""
    cf = sp.Poly(F, t).coeffs()
    cg = sp.Poly(G, t).coeffs()
    den = sp.ilcm(*[sp.fraction(x)[1] for x in cf + cg])
    # smallest w with w^4 F, w^6 G integral
    w = 1
    for p, e in sp.factorint(den).items():
        need = 0
        for x in cf:
            need = max(need, -(-sp.multiplicity(p, sp.fraction(x)[1]) // 4))
        for x in cg:
            need = max(need, -(-sp.multiplicity(p, sp.fraction(x)[1]) // 6))
        w *= p**need
    F, G = sp.expand(F * w**4), sp.expand(G * w**6)
    g = sp.gcd_list([sp.Integer(x) for x in sp.Poly(F, t).coeffs()])
    h = sp.gcd_list([sp.Integer(x) for x in sp.Poly(G, t).coeffs()])
    d = 1
    for p in sp.factorint(sp.gcd(g, h)):
        k = min(sp.multiplicity(p, g) // 4, sp.multiplicity(p, h) // 6)
        d *= p**k
    return sp.expand(F / d**4), sp.expand(G / d**6)


def injections(label):
    two = "x" in label
    n = int(label.split("/")[-1])
    k = n * n
    for p in sp.primefactors(n):
        k = k * (p * p - 1) // (p * p)
    return 2 * k if two else k


def main():
    rows = []
    for label, a in kubert_table().items():
        A, B = short_form(a)
        F, G = clear(A, B)
        if label != "Z/4":
            ell = injections(label) // 24
            F, G = fix_infinity(F, G, ell)
        F, G = normalize_content(F, G)
        assert sp.gcd(F, G).is_number, label
        fc = sp.Poly(F, t).all_coeffs()[::-1]
        gc = sp.Poly(G, t).all_coeffs()[::-1]
        rows.append(
            {
                "group": label,
                "weight": [4, 6],
                "f": [str(sp.Rational(x)) for x in fc],
                "g": [str(sp.Rational(x)) for x in gc],
            }
        )
        print(label, len(fc) - 1, len(gc) - 1, file=sys.stderr)
    json.dump(rows, sys.stdout, indent=1)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
