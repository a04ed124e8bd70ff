"""Independent reference implementation of Tate's algorithm over Q.

Used to generate fixture data (stored conductors and Tamagawa products) so
that the Rust implementation is checked against an independently written
oracle rather than against itself. Pure Python, arbitrary precision.
"""

from dataclasses import dataclass


def invariants(a):
    a1, a2, a3, a4, a6 = a
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -b2**3 + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    assert 1728 * disc == c4**3 - c6**2
    return b2, b4, b6, b8, c4, c6, disc


def val(n, p):
    if n == 0:
        return 10**9  # effectively infinite
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def translate(a, r, s, t):
    a1, a2, a3, a4, a6 = a
    return (
        a1 + 2 * s,
        a2 - s * a1 + 3 * r - s * s,
        a3 + r * a1 + 2 * t,
        a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
        a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1,
    )


def legendre_is_square(x, p):
    x %= p
    if x == 0:
        return True
    return pow(x, (p - 1) // 2, p) == 1


def quad_roots(b, c, p):
    """Root structure of Y^2 + bY + c over F_p.

    Returns ('double', root) or ('rational', None) or ('irrational', None).
    """
    if p == 2:
        if b % 2 == 1:
            return ("rational", None) if c % 2 == 0 else ("irrational", None)
        return ("double", c % 2)
    disc = (b * b - 4 * c) % p
    if disc == 0:
        return ("double", (-b * pow(2, p - 2, p)) % p)
    if legendre_is_square(disc, p):
        return ("rational", None)
    return ("irrational", None)


def cubic_structure(A, B, C, p):
    """Root structure of T^3 + A T^2 + B T + C over F_p."""
    A, B, C = A % p, B % p, C % p
    disc = (18 * A * B * C - 4 * A**3 * C + A * A * B * B - 4 * B**3 - 27 * C * C) % p
    if disc != 0:
        count = sum(1 for t in range(p) if (((t + A) * t + B) * t + C) % p == 0) if p < 3000 else _count_roots_big(A, B, C, p)
        return ("distinct", count)
    if p == 2:
        if A == B == C:
            return ("triple", A)
        root = B  # sqrt(B) in F_2
        assert (((root + A) * root + B) * root + C) % p == 0
        return ("double", root)
    if p == 3:
        if A == 0 and B == 0:
            return ("triple", (-C) % p)
        root = (B * pow(A, p - 2, p)) % p if A != 0 else None
        assert root is not None and (((root + A) * root + B) * root + C) % p == 0
        return ("double", root)
    r = (-A * pow(3, p - 2, p)) % p
    if (((r + A) * r + B) * r + C) % p == 0 and (3 * r * r + 2 * A * r + B) % p == 0:
        return ("triple", r)
    den = (2 * (A * A - 3 * B)) % p
    root = ((9 * C - A * B) * pow(den, p - 2, p)) % p
    assert (((root + A) * root + B) * root + C) % p == 0
    return ("double", root)


def _count_roots_big(A, B, C, p):
    # gcd(T^p - T, P) degree via polynomial arithmetic mod P
    P = [C % p, B % p, A % p, 1]

    def pmulmod(f, g):
        out = [0] * (len(f) + len(g) - 1)
        for i, fi in enumerate(f):
            if fi:
                for j, gj in enumerate(g):
                    out[i + j] = (out[i + j] + fi * gj) % p
        return prem(out)

    def prem(f):
        f = f[:]
        while len(f) > 3:
            lead = f[-1]
            if lead:
                shift = len(f) - 4
                for i in range(4):
                    f[shift + i] = (f[shift + i] - lead * P[i]) % p
            f.pop()
            while f and f[-1] == 0:
                f.pop()
        return f or [0]

    acc, base, e = [1], [0, 1], p
    while e:
        if e & 1:
            acc = pmulmod(acc, base)
        base = pmulmod(base, base)
        e >>= 1
    # acc = T^p mod P; subtract T
    while len(acc) < 2:
        acc.append(0)
    acc[1] = (acc[1] - 1) % p
    while acc and acc[-1] == 0:
        acc.pop()

    def pgcd(f, g):
        while g and any(g):
            inv = pow(g[-1], p - 2, p)
            g = [(x * inv) % p for x in g]
            r = f[:]
            while len(r) >= len(g):
                lead = r[-1]
                if lead:
                    shift = len(r) - len(g)
                    for i in range(len(g)):
                        r[shift + i] = (r[shift + i] - lead * g[i]) % p
                r.pop()
                while r and r[-1] == 0:
                    r.pop()
            f, g = g, r
        return f

    g = pgcd(P, acc) if acc else P
    return len(g) - 1


def singular_point(a, p):
    a1, a2, a3, a4, a6 = a
    b2, b4, b6, b8, c4, c6, disc = invariants(a)
    if p == 2:
        x0 = a3 % 2 if a1 % 2 == 1 else a4 % 2
        y0 = (x0**3 + a2 * x0 * x0 + a4 * x0 + a6) % 2
        return x0, y0
    if c4 % p != 0:
        x0 = ((18 * b6 - b2 * b4) * pow(c4 % p, p - 2, p)) % p
    elif p == 3:
        x0 = (-b6) % 3
    else:
        x0 = (-b2 * pow(12, p - 2, p)) % p
    y0 = (-(a1 * x0 + a3) * pow(2, p - 2, p)) % p
    return x0, y0


@dataclass
class Local:
    p: int
    kodaira: str
    f: int
    c: int
    kind: str


def tate(a, p):
    """Kodaira type, conductor exponent and Tamagawa number at p for a
    globally minimal model."""
    b2, b4, b6, b8, c4, c6, disc = invariants(a)
    n = val(disc, p)
    if n == 0:
        return Local(p, "I0", 0, 1, "good")
    x0, y0 = singular_point(a, p)
    a = translate(a, x0, 0, y0)
    a1, a2, a3, a4, a6 = a
    assert a3 % p == 0 and a4 % p == 0 and a6 % p == 0

    if c4 % p != 0:
        kind, _ = quad_roots(a1, -a2, p)
        split = kind == "rational"
        assert kind != "double"
        c = n if split else (2 if n % 2 == 0 else 1)
        return Local(p, "I%d" % n, 1, c, "split-multiplicative" if split else "nonsplit-multiplicative")

    if val(a6, p) < 2:
        return Local(p, "II", n, 1, "additive")
    b8 = invariants(a)[3]
    if val(b8, p) < 3:
        return Local(p, "III", n - 1, 2, "additive")
    b6v = invariants(a)[2]
    if val(b6v, p) < 3:
        kind, _ = quad_roots(a3 // p, -(a6 // p**2), p)
        return Local(p, "IV", n - 2, 3 if kind == "rational" else 1, "additive")

    # normalise: p | a1, a2; p^2 | a3, a4; p^3 | a6
    if p == 2:
        s = a2 % 2
        a = translate(a, 0, s, 0)
        for t in range(8):
            a1, a2, a3, a4, a6 = a
            if (a3 + 2 * t) % 4 == 0 and (a6 - t * a3 - t * t) % 8 == 0:
                a = translate(a, 0, 0, t)
                break
        else:
            raise AssertionError("no step-6 substitution found")
    else:
        s = (-a[0] * pow(2, p - 2, p)) % p
        a = translate(a, 0, s, 0)
        p2 = p * p
        inv2 = pow(2, 2 * p2 - p2 - 2, p2) if False else pow(2, -1, p2)
        t = (-a[2] * inv2) % p2
        a = translate(a, 0, 0, t)
    a1, a2, a3, a4, a6 = a
    assert a1 % p == 0 and a2 % p == 0
    assert a3 % p**2 == 0 and a4 % p**2 == 0 and a6 % p**3 == 0

    kind, info = cubic_structure(a2 // p, a4 // p**2, a6 // p**3, p)
    if kind == "distinct":
        return Local(p, "I0*", n - 4, 1 + info, "additive")
    if kind == "double":
        a = translate(a, p * info, 0, 0)
        m = 1
        while True:
            a1, a2, a3, a4, a6 = a
            if m % 2 == 1:
                k = (m + 3) // 2
                q, root = quad_roots(a3 // p**k, -(a6 // p**(2 * k)), p)
                if q == "double":
                    a = translate(a, 0, 0, p**k * root)
                else:
                    return Local(p, "I%d*" % m, n - m - 4, 4 if q == "rational" else 2, "additive")
            else:
                k = (m + 4) // 2
                a2p = a2 // p
                inv_lead = pow(a2p % p, p - 2, p) if p > 2 else 1
                bq = (a4 // p**k) * inv_lead
                cq = (a6 // p**(2 * k - 1)) * inv_lead
                q, root = quad_roots(bq, cq, p)
                if q == "double":
                    a = translate(a, p**(k - 1) * root, 0, 0)
                else:
                    return Local(p, "I%d*" % m, n - m - 4, 4 if q == "rational" else 2, "additive")
            m += 1
    # triple root
    a = translate(a, p * info, 0, 0)
    a1, a2, a3, a4, a6 = a
    q, root = quad_roots(a3 // p**2, -(a6 // p**4), p)
    if q != "double":
        return Local(p, "IV*", n - 6, 3 if q == "rational" else 1, "additive")
    a = translate(a, 0, 0, p * p * root)
    a1, a2, a3, a4, a6 = a
    if val(a4, p) < 4:
        return Local(p, "III*", n - 7, 2, "additive")
    if val(a6, p) < 6:
        return Local(p, "II*", n - 8, 1, "additive")
    raise ValueError("model not minimal at %d" % p)


def factorize(n, bound=10**6):
    n = abs(n)
    fs = {}
    d = 2
    while d * d <= n and d < bound:
        while n % d == 0:
            fs[d] = fs.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        fs[n] = fs.get(n, 0) + 1  # caller must ensure primality
    return fs


def kraus_ok(c4, c6, p):
    if p == 3:
        return c6 == 0 or val(c6, 3) != 2
    if p == 2:
        if c6 % 4 == 3:
            return True
        if c4 != 0 and val(c4, 2) < 4:
            return False
        return c6 % 32 in (0, 8)
    return True


def minimal_model(a, disc_primes):
    """Laska-Kraus-Connell reduction; disc_primes must cover all p with
    p^12 | disc."""
    b2, b4, b6, b8, c4, c6, disc = invariants(a)
    u = 1
    for p in sorted(set(list(disc_primes) + [2, 3])):
        if c4 == 0:
            e = val(c6, p) // 6
        elif c6 == 0:
            e = val(c4, p) // 4
        else:
            e = min(val(c4, p) // 4, val(c6, p) // 6)
        e = min(e, val(disc, p) // 12)
        if p in (2, 3):
            while e > 0 and not kraus_ok(c4 // p**(4 * e), c6 // p**(6 * e), p):
                e -= 1
        u *= p**e
    c4m, c6m = c4 // u**4, c6 // u**6
    b2m = (-c6m) % 12
    if b2m > 6:
        b2m -= 12
    b4m = (b2m * b2m - c4m) // 24
    b6m = (-b2m**3 + 36 * b2m * b4m - c6m) // 216
    a1 = b2m % 2
    a2 = (b2m - a1) // 4
    a3 = b6m % 2
    a4 = (b4m - a1 * a3) // 2
    a6 = (b6m - a3) // 4
    out = (a1, a2, a3, a4, a6)
    ib = invariants(out)
    assert ib[4] == c4m and ib[5] == c6m
    return out


def global_data(a, disc_factors):
    """(minimal model, conductor, tamagawa product, locals); disc_factors
    factors the discriminant of `a`."""
    amin = minimal_model(a, disc_factors.keys())
    disc_min = invariants(amin)[6]
    n_cond, tau, locals_ = 1, 1, []
    for p in sorted(disc_factors):
        if disc_min % p:
            continue
        loc = tate(amin, p)
        n_cond *= p**loc.f
        tau *= loc.c
        locals_.append(loc)
    return amin, n_cond, tau, locals_


if __name__ == "__main__":
    # self-checks against independently known values
    e = (1, 0, 0, -1054050116, -12046088636400)
    amin, n, tau, loc = global_data(e, factorize(invariants(e)[6]))
    assert (n, tau) == (39270, 31104), (n, tau)
    e = (0, 7, 0, -8, 0)
    amin, n, tau, loc = global_data(e, {2: 10, 3: 4})
    assert (n, tau) == (48, 16), (n, tau)
    e = (0, 0, 0, 0, 1)
    amin, n, tau, loc = global_data(e, {2: 4, 3: 3})
    assert (n, tau) == (36, 6), (n, tau)
    print("oracle self-checks passed")
