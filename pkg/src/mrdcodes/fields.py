"""Exact arithmetic in the tower F_p < F_q = F_{p^e} < F_{q^n} = F_{p^{en}}.

Field elements are packed integers: x = sum(c_i * p**i) encodes the
coordinate vector (c_0, ..., c_{d-1}) of x in the power basis
{1, g, ..., g^{d-1}} of the residue class g of X modulo the tower modulus,
where d = e*n.  The modulus is the lexicographically smallest monic
irreducible of degree d over F_p, low-degree coefficients compared first,
so a tower is reproducible from (p, e, n) alone; no external polynomial
tables (Conway or otherwise) are consulted, and any constants appearing in
serialized certificates are relative to this modulus.

The subfield F_q is realized as the fixed field of the e-fold p-power
Frobenius; F_{q^n} is an n-dimensional F_q-space in the power basis of g.
Multiplication uses discrete-log (Zech) tables for fields up to TABLE_CAP
elements and falls back to polynomial arithmetic above that.

Enumeration always uses the canonical element order: element #m has
coordinates c_i = (m // p**(d-1-i)) % p, i.e. coordinate tuples in ascending
lexicographic order with the constant term compared first.
"""

from __future__ import annotations

import functools

import numpy as np

ENUM_CAP = 1 << 24    # full-field enumeration guard
TABLE_CAP = 1 << 23   # discrete-log table guard


class CapExceeded(RuntimeError):
    """An enumeration or search exceeded its configured cap."""


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


def factorize(m: int) -> dict[int, int]:
    """Prime factorization by trial division (inputs stay below 2**64 here)."""
    out: dict[int, int] = {}
    f = 2
    while f * f <= m:
        while m % f == 0:
            out[f] = out.get(f, 0) + 1
            m //= f
        f += 1 if f == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


# ----------------------------------------------------------------------------
# Dense polynomials over F_p: tuples of ints, constant term first, no
# trailing zeros.  Only used for modulus search and fallback arithmetic.
# ----------------------------------------------------------------------------

def _ptrim(f):
    i = len(f)
    while i > 0 and f[i - 1] == 0:
        i -= 1
    return tuple(f[:i])


def _pmod(f, m, p):
    # m monic
    f = list(f)
    dm = len(m) - 1
    for i in range(len(f) - 1, dm - 1, -1):
        c = f[i] % p
        if c:
            for j in range(dm + 1):
                f[i - dm + j] = (f[i - dm + j] - c * m[j]) % p
    return _ptrim(f[:dm])


def _pgcd_monic(f, g, p):
    """Monic gcd over F_p."""
    f, g = _ptrim(f), _ptrim(g)
    while g:
        inv = pow(g[-1], p - 2, p)
        gm = tuple((c * inv) % p for c in g)
        f, g = gm, _pmod(f, gm, p)
    return f


def _p_frob(f, m, p):
    """f(X)**p mod m, via the additive p-power map over F_p."""
    out = ()
    for i, c in enumerate(f):
        if c:
            xe = _pmod((0,) * (i * p) + (1,), m, p)
            out = _padd(out, tuple((c * t) % p for t in xe), p)
    return out


def _padd(f, g, p):
    n = max(len(f), len(g))
    f = tuple(f) + (0,) * (n - len(f))
    g = tuple(g) + (0,) * (n - len(g))
    return _ptrim(tuple((a + b) % p for a, b in zip(f, g)))


def _is_irreducible(m, p):
    """Monic m irreducible over F_p.

    Checks X^{p^d} == X mod m together with gcd(X^{p^{d/l}} - X, m) = 1 for
    every prime l dividing d; equivalently gcd(X^{p^t} - X, m) trivial for
    all proper divisors t of d.
    """
    d = len(m) - 1
    if d == 1:
        return True
    x = (0, 1)
    xp = x
    powers = {}
    for k in range(1, d + 1):
        xp = _p_frob(xp, m, p)
        powers[k] = xp
    if powers[d] != _pmod(x, m, p):
        return False
    for ell in factorize(d):
        t = d // ell
        diff = _padd(powers[t], tuple((-c) % p for c in x), p)
        if len(_pgcd_monic(m, diff, p)) > 1:
            return False
    return True


def _lex_smallest_irreducible(p, d):
    """Smallest monic irreducible of degree d, coefficients (c_0,...,c_{d-1})
    compared lexicographically, constant term first."""
    if d == 1:
        return (0, 1)  # X itself
    # c_0 = 0 would make X a factor, so start past that block; reject
    # linear roots cheaply before the Rabin test.
    for idx in range(p ** (d - 1), p ** d):
        coeffs = tuple((idx // p ** (d - 1 - i)) % p for i in range(d))
        m = coeffs + (1,)
        if any(sum(c * pow(r, i, p) for i, c in enumerate(m)) % p == 0
               for r in range(1, p)):
            continue
        if _is_irreducible(m, p):
            return m
    raise RuntimeError("no irreducible polynomial found (internal fault)")


# ----------------------------------------------------------------------------
# The tower
# ----------------------------------------------------------------------------

class FieldTower:
    """Immutable description of F_p < F_q = F_{p^e} < F_{q^n}, with arithmetic.

    Safe to share across worker processes: construction fixes everything,
    operations are pure functions of their inputs.  Heavy lookup tables are
    built lazily on first use and never mutated afterwards.
    """

    def __init__(self, p: int, e: int, n: int):
        if not is_prime(p):
            raise ValueError(f"p={p} is not prime")
        if e < 1 or n < 1:
            raise ValueError("extension degrees must be positive")
        d = e * n
        if p ** d > 1 << 64:
            raise ValueError("field too large for exact packed arithmetic")
        self.p = p
        self.e = e
        self.n = n
        self.q = p ** e
        self.degree = d
        self.order = p ** d
        self.modulus = _lex_smallest_irreducible(p, d)
        # residue class of X; for d = 1 this is the degree-1 root -c_0
        self.generator = p % self.order if d > 1 else (-self.modulus[0]) % p
        self._pw = tuple(p ** i for i in range(d))
        # reduction rows: coords of g^(d+t) for t = 0..d-2, for fallback mul
        red = []
        cur = self._raw_x_power(d)
        for _ in range(max(d - 1, 0)):
            red.append(cur)
            cur = self._shift_reduce(cur)
        self._red = red
        self._tables = None
        self._frob_exp = None
        self._lazy = {}
        self._check_construction()

    # ---- construction helpers -------------------------------------------

    def _raw_x_power(self, k):
        """coords of g^k straight from the modulus (no mul needed)."""
        f = _pmod((0,) * k + (1,), self.modulus, self.p)
        return tuple(f) + (0,) * (self.degree - len(f))

    def _shift_reduce(self, coords):
        """coords of g*x given coords of x (fallback path)."""
        p, d = self.p, self.degree
        top = coords[d - 1]
        out = [0] + list(coords[:d - 1])
        if top:
            m = self.modulus
            for j in range(d):
                out[j] = (out[j] - top * m[j]) % p
        return tuple(out)

    def _check_construction(self):
        # power basis of g spans over F_q: the change-of-basis matrix over
        # F_p must be invertible (verified when building it); the generator's
        # first n q-power-basis coordinates being independent follows.
        if self.degree > 1 and self._pow_fallback(self.generator, self.order - 1) != 1:
            raise RuntimeError("generator fails Lagrange check (internal fault)")

    # ---- packed coordinate plumbing --------------------------------------

    def coords(self, x: int) -> list[int]:
        """Power-basis coordinate vector (c_0, ..., c_{d-1}) of x over F_p."""
        p = self.p
        out = []
        for _ in range(self.degree):
            x, c = divmod(x, p)
            out.append(c)
        return out

    def element(self, coords) -> int:
        if len(coords) != self.degree:
            raise ValueError("coordinate vector has wrong length")
        p = self.p
        v = 0
        for c in reversed(coords):
            c = int(c) % p
            v = v * p + c
        return v

    def element_at(self, m: int) -> int:
        """The m-th element in canonical order (lexicographic on coords)."""
        p, d = self.p, self.degree
        v = 0
        for i in range(d):
            c = (m // p ** (d - 1 - i)) % p
            v += c * self._pw[i]
        return v

    def canonical_index(self, x: int) -> int:
        p, d = self.p, self.degree
        m = 0
        for i in range(d):
            x, c = divmod(x, p)
            m += c * p ** (d - 1 - i)
        return m

    # ---- scalar arithmetic ------------------------------------------------

    def add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        out = 0
        mult = 1
        for _ in range(self.degree):
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        if p == 2:
            return a
        out = 0
        mult = 1
        for _ in range(self.degree):
            out += ((-a) % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        t = self.tables
        if t is not None:
            exp, log = t
            return int(exp[log[a] + log[b]])
        return self._mul_fallback(a, b)

    def _mul_fallback(self, a, b):
        p, d = self.p, self.degree
        ca, cb = self.coords(a), self.coords(b)
        conv = [0] * (2 * d - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    conv[i + j] = (conv[i + j] + x * y) % p
        out = conv[:d]
        for t, c in enumerate(conv[d:]):
            if c:
                row = self._red[t]
                for j in range(d):
                    out[j] = (out[j] + c * row[j]) % p
        return self.element(out)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inversion of zero field element")
        t = self.tables
        if t is not None:
            exp, log = t
            return int(exp[(self.order - 1) - log[a]])
        return self.pow(a, self.order - 2)

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(a), -k)
        if a == 0:
            return 0 if k else 1
        t = self.tables
        if t is not None:
            exp, log = t
            return int(exp[(int(log[a]) * k) % (self.order - 1)])
        r = 1
        while k:
            if k & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            k >>= 1
        return r

    def frobenius_q(self, x: int, i: int = 1) -> int:
        """x^(q^i), exponent reduced mod n."""
        i %= self.n
        if x == 0 or i == 0:
            return x
        t = self.tables
        if t is not None:
            exp, log = t
            if self._frob_exp is None:
                self._frob_exp = tuple(pow(self.q, j, self.order - 1)
                                       for j in range(self.n))
            return int(exp[(int(log[x]) * self._frob_exp[i]) % (self.order - 1)])
        return self.pow(x, pow(self.q, i, self.order - 1))

    def frobenius_p(self, x: int, i: int = 1) -> int:
        """x^(p^i)."""
        i %= self.degree
        if x == 0 or i == 0:
            return x
        return self.pow(x, pow(self.p, i, self.order - 1))

    def rel_trace(self, x: int) -> int:
        """Trace from F_{q^n} onto the embedded F_q: x + x^q + ... + x^{q^{n-1}}."""
        acc = 0
        y = x
        for _ in range(self.n):
            acc = self.add(acc, y)
            y = self.frobenius_q(y, 1)
        return acc

    def rel_norm(self, x: int) -> int:
        """Norm from F_{q^n} onto the embedded F_q: x^(1+q+...+q^{n-1})."""
        if x == 0:
            return 0
        acc = 1
        y = x
        for _ in range(self.n):
            acc = self.mul(acc, y)
            y = self.frobenius_q(y, 1)
        return acc

    # ---- lazy heavy structures --------------------------------------------

    @property
    def tables(self):
        """(exp, log) Zech tables, or None when the field exceeds TABLE_CAP."""
        if self._tables is None:
            if self.order > TABLE_CAP:
                return None
            self._tables = self._build_tables()
        return self._tables

    def _find_primitive(self) -> int:
        """Smallest element (canonical order) of multiplicative order p^d - 1."""
        fac = factorize(self.order - 1)
        cofactors = [(self.order - 1) // ell for ell in fac]
        for m in range(1, self.order):
            h = self.element_at(m)
            if h == 0 or h == 1:
                continue
            if all(self._pow_fallback(h, c) != 1 for c in cofactors):
                return h
        raise RuntimeError("no primitive element found (internal fault)")

    def _pow_fallback(self, a, k):
        r = 1
        while k:
            if k & 1:
                r = self._mul_fallback(r, a)
            a = self._mul_fallback(a, a)
            k >>= 1
        return r

    def mult_matrix(self, a: int) -> np.ndarray:
        """d x d matrix over F_p of y -> a*y, columns indexed by power basis."""
        d = self.degree
        cols = []
        y = a
        g = self.generator
        for _ in range(d):
            cols.append(self.coords(y))
            y = self.mul(y, g)
        return np.array(cols, dtype=np.int64).T % self.p

    def _build_tables(self):
        Q, d, p = self.order, self.degree, self.p
        h = self._find_primitive()
        digits = np.zeros((Q - 1, d), dtype=np.int16)
        digits[0, 0] = 1  # the element 1
        filled = 1
        hs = h  # h^filled, maintained by fallback arithmetic
        while filled < Q - 1:
            step = min(filled, Q - 1 - filled)
            M = np.zeros((d, d), dtype=np.int16)
            y = hs
            for j in range(d):
                M[:, j] = self.coords(y)
                y = self._mul_fallback(y, self.generator)
            # entries bounded by d*(p-1)^2 < 2^15 for every supported tower
            digits[filled:filled + step] = digits[:step] @ M.T % p
            hs = self._mul_fallback(hs, self._pow_fallback(h, step))
            filled += step
        packed = np.zeros(Q - 1, dtype=np.int64)
        for i in range(d):
            packed += digits[:, i].astype(np.int64) * self._pw[i]
        del digits
        exp = np.concatenate([packed, packed])
        log = np.full(Q, -1, dtype=np.int64)
        log[packed] = np.arange(Q - 1)
        if log[1] != 0 or int(exp[0]) != 1:
            raise RuntimeError("table construction failed (internal fault)")
        return exp, log

    # ---- subfield and q-coordinates ----------------------------------------

    @property
    def subfield_elements(self) -> tuple:
        """All q elements of the embedded F_q, canonical order."""
        key = "subfield"
        if key not in self._lazy:
            p, d, e = self.p, self.degree, self.e
            # kernel of (phi_p^e - id) as an F_p-linear map
            fmat = self.frob_p_matrix(e)
            mat = (fmat - np.eye(d, dtype=np.int64)) % p
            basis = _nullspace_modp(mat, p)
            elems = []
            for m in range(p ** len(basis)):
                v = np.zeros(d, dtype=np.int64)
                mm = m
                for b in basis:
                    v = (v + (mm % p) * b) % p
                    mm //= p
                elems.append(self.element(v.tolist()))
            if len(elems) != self.q:
                raise RuntimeError("subfield has wrong size (internal fault)")
            elems.sort(key=self.canonical_index)
            self._lazy[key] = tuple(elems)
        return self._lazy[key]

    def in_subfield_q(self, x: int) -> bool:
        return self.frobenius_q(x, 1) == x

    def embed_fp(self, c: int) -> int:
        """The prime-field constant c*1 as a field element."""
        return c % self.p

    def frob_p_matrix(self, i: int = 1) -> np.ndarray:
        """d x d F_p matrix of the i-fold p-power Frobenius."""
        key = ("frobp", i % self.degree)
        if key not in self._lazy:
            d = self.degree
            M = np.zeros((d, d), dtype=np.int64)
            for j in range(d):
                M[:, j] = self.coords(self.frobenius_p(self.pow(self.generator, j), i))
            self._lazy[key] = M
        return self._lazy[key]

    def frob_q_matrix(self, i: int = 1) -> np.ndarray:
        return self.frob_p_matrix((self.e * i) % self.degree)

    @property
    def q_basis(self) -> tuple:
        """Power basis (1, g, ..., g^{n-1}) of F_{q^n} over F_q."""
        return tuple(self.pow(self.generator, i) for i in range(self.n))

    @property
    def _qcoord_machinery(self):
        """Inverse change-of-basis from power-basis F_p coords to (q-coord blocks)."""
        key = "qcoords"
        if key not in self._lazy:
            d, e, n, p = self.degree, self.e, self.n, self.p
            sub = self.subfield_elements
            # F_p-basis of F_q: echelon basis from the subfield construction
            fq_basis = [x for x in sub if x != 0]
            # reduce to an independent F_p-basis of size e
            bas: list[int] = []
            rows: list[np.ndarray] = []
            for x in fq_basis:
                v = np.array(self.coords(x), dtype=np.int64)
                r = _reduce_against(v, rows, p)
                if r is not None:
                    rows.append(r)
                    bas.append(x)
                if len(bas) == e:
                    break
            if len(bas) != e:
                raise RuntimeError("subfield basis extraction failed")
            B = np.zeros((d, d), dtype=np.int64)
            qb = self.q_basis
            for i in range(n):
                for j in range(e):
                    B[:, i * e + j] = self.coords(self.mul(bas[j], qb[i]))
            Binv = _invert_modp(B, p)
            self._lazy[key] = (tuple(bas), Binv)
        return self._lazy[key]

    @property
    def fq_basis_fp(self) -> tuple:
        """An F_p-basis (u_0..u_{e-1}) of the embedded F_q."""
        return self._qcoord_machinery[0]

    def q_coords(self, x: int) -> tuple:
        """Coordinates of x over F_q in the power basis, as embedded F_q elements."""
        bas, Binv = self._qcoord_machinery
        v = np.array(self.coords(x), dtype=np.int64)
        w = Binv @ v % self.p
        out = []
        for i in range(self.n):
            acc = 0
            for j in range(self.e):
                c = int(w[i * self.e + j])
                if c:
                    acc = self.add(acc, self.mul(self.embed_fp(c), bas[j]))
            out.append(acc)
        return tuple(out)

    def from_q_coords(self, v) -> int:
        if len(v) != self.n:
            raise ValueError("q-coordinate vector has wrong length")
        acc = 0
        for i, c in enumerate(v):
            acc = self.add(acc, self.mul(c, self.q_basis[i]))
        return acc

    # ---- enumeration --------------------------------------------------------

    def enumerate_field(self):
        """All elements, canonical order.  Requires order <= ENUM_CAP."""
        if self.order > ENUM_CAP:
            raise CapExceeded(f"field of {self.order} elements exceeds ENUM_CAP")
        for m in range(self.order):
            yield self.element_at(m)

    def enumerate_subfield_q(self):
        yield from self.subfield_elements

    def elements_array(self) -> np.ndarray:
        """Packed values in canonical order (numpy, cached)."""
        key = "elems"
        if key not in self._lazy:
            if self.order > ENUM_CAP:
                raise CapExceeded(f"field of {self.order} elements exceeds ENUM_CAP")
            p, d = self.p, self.degree
            idx = np.arange(self.order, dtype=np.int64)
            v = np.zeros_like(idx)
            for i in range(d):
                v += (idx // p ** (d - 1 - i)) % p * p ** i
            self._lazy[key] = v
        return self._lazy[key]

    # ---- serialization -------------------------------------------------------

    def descriptor(self) -> dict:
        return {"p": self.p, "e": self.e, "n": self.n,
                "modulus": list(self.modulus)}

    def element_to_json(self, x: int) -> list[int]:
        return self.coords(x)

    def element_from_json(self, coords) -> int:
        return self.element([int(c) for c in coords])

    def __repr__(self):
        return f"FieldTower(p={self.p}, e={self.e}, n={self.n})"


# ----------------------------------------------------------------------------
# small exact mod-p linear algebra used during construction
# ----------------------------------------------------------------------------

def _reduce_against(v, rows, p):
    v = v.copy() % p
    for r in rows:
        piv = int(np.argmax(r != 0))
        if r[piv] and v[piv]:
            v = (v - int(v[piv]) * int(pow(int(r[piv]), p - 2, p)) * r) % p
    return v if v.any() else None


def _nullspace_modp(mat, p):
    """Echelon-form nullspace basis of mat over F_p (deterministic)."""
    m = mat.copy() % p
    rows, cols = m.shape
    pivots = {}
    r = 0
    for c in range(cols):
        sel = None
        for i in range(r, rows):
            if m[i, c]:
                sel = i
                break
        if sel is None:
            continue
        m[[r, sel]] = m[[sel, r]]
        m[r] = m[r] * pow(int(m[r, c]), p - 2, p) % p
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] = (m[i] - int(m[i, c]) * m[r]) % p
        pivots[c] = r
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = np.zeros(cols, dtype=np.int64)
        v[fc] = 1
        for c, pr in pivots.items():
            v[c] = (-m[pr, fc]) % p
        basis.append(v % p)
    return basis


def _invert_modp(mat, p):
    d = mat.shape[0]
    aug = np.concatenate([mat.copy() % p, np.eye(d, dtype=np.int64)], axis=1)
    for c in range(d):
        sel = None
        for i in range(c, d):
            if aug[i, c]:
                sel = i
                break
        if sel is None:
            raise RuntimeError("change-of-basis matrix is singular (internal fault)")
        aug[[c, sel]] = aug[[sel, c]]
        aug[c] = aug[c] * pow(int(aug[c, c]), p - 2, p) % p
        for i in range(d):
            if i != c and aug[i, c]:
                aug[i] = (aug[i] - int(aug[i, c]) * aug[c]) % p
    return aug[:, d:]


@functools.lru_cache(maxsize=None)
def make_tower(p: int, e: int, n: int) -> FieldTower:
    """Deterministic tower for F_p < F_{p^e} < F_{p^{en}} (cached)."""
    return FieldTower(p, e, n)


def tower_from_descriptor(desc: dict) -> FieldTower:
    t = make_tower(int(desc["p"]), int(desc["e"]), int(desc["n"]))
    if "modulus" in desc and list(t.modulus) != [int(c) for c in desc["modulus"]]:
        raise ValueError("descriptor modulus does not match the deterministic tower")
    return t
