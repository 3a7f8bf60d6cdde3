"""Exact arithmetic in the tower GF(q) <= GF(q^n) <= GF(q^2n).

Every element is stored as a discrete-log exponent ``k`` meaning ``beta**k``
for a fixed primitive element ``beta`` of the big field, with the sentinel
``ZERO`` for the zero element.  Multiplication is exponent addition and
addition goes through a Zech-logarithm table.  The subfields are not separate
structures: GF(q^n)^* is the set of exponents divisible by ``q^n + 1`` and
GF(q)^* the set divisible by ``(q^2n - 1)/(q - 1)``.

Elements of GF(q) have a second, compact representation used for
coordinates and file output, the *label*: with ``omega = beta**M`` (a
primitive element of GF(q)) an element ``sum c_j omega^j`` (c_j in GF(p))
gets label ``sum c_j p^j``.  For prime q the label is the usual residue.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

ZERO = -1

DEFAULT_MAX_ENTRIES = 2**26


class ResourceCapError(RuntimeError):
    """A table would exceed the configured size cap."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _polymulmod(a: list[int], b: list[int], low: list[int], p: int) -> list[int]:
    # residues mod a monic f = x^d + sum low[i] x^i, as coefficient lists of length d
    d = len(low)
    prod = [0] * (2 * d - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] = (prod[i + j] + ai * bj) % p
    for k in range(2 * d - 2, d - 1, -1):
        c = prod[k]
        if c:
            prod[k] = 0
            for i in range(d):
                prod[k - d + i] = (prod[k - d + i] - c * low[i]) % p
    return prod[:d]


def _x_power(exponent: int, low: list[int], p: int) -> list[int]:
    d = len(low)
    result = [1] + [0] * (d - 1)
    base = [0] * d
    if d == 1:
        base = [(-low[0]) % p]
    else:
        base[1] = 1
    while exponent:
        if exponent & 1:
            result = _polymulmod(result, base, low, p)
        base = _polymulmod(base, base, low, p)
        exponent >>= 1
    return result


def is_primitive(modulus: tuple[int, ...] | list[int], p: int) -> bool:
    """True if the monic ``modulus`` (low degree first) is primitive over GF(p).

    ``x`` having multiplicative order exactly ``p^d - 1`` modulo f forces the
    residue ring to be a field, so irreducibility needs no separate test.
    """
    coeffs = [c % p for c in modulus]
    if len(coeffs) < 2 or coeffs[-1] != 1 or coeffs[0] == 0:
        return False
    low = coeffs[:-1]
    d = len(low)
    order = p**d - 1
    one = [1] + [0] * (d - 1)
    if _x_power(order, low, p) != one:
        return False
    return all(_x_power(order // r, low, p) != one for r in prime_factors(order))


def find_primitive_polynomial(p: int, degree: int) -> tuple[int, ...]:
    """Lexicographically smallest primitive polynomial, coefficients low degree first."""
    for low in itertools.product(range(p), repeat=degree):
        if low[0] == 0:
            continue
        cand = low + (1,)
        if is_primitive(cand, p):
            return cand
    raise ValueError(f"no primitive polynomial of degree {degree} over GF({p})")


@dataclass(frozen=True)
class TowerParams:
    p: int
    e: int
    n: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def degree(self) -> int:
        return 2 * self.n * self.e


class FieldTables:
    """Immutable log/Zech tables for GF(q^2n) with the subfield bookkeeping.

    Use :func:`build_tower` to construct one.
    """

    def __init__(self, params: TowerParams):
        self.params = params
        p, e, n = params.p, params.e, params.n
        self.p, self.e, self.n = p, e, n
        self.q = q = p**e
        self.dim = params.degree  # over GF(p)
        self.order = q ** (2 * n) - 1  # N, order of beta
        self.sub_order = q**n - 1
        self.norm_exp = q**n + 1  # gamma = beta^(q^n+1)
        self.base_step = self.order // (q - 1)  # GF(q)^* = <beta^base_step>
        self.xi_exp = (q**n - 1) // (q - 1)
        self.gamma = self.norm_exp
        self.xi = self.xi_exp

        N = self.order
        low = list(params.modulus[:-1])
        d = self.dim
        powers = p ** np.arange(d, dtype=np.int64)

        # exp table: enc[k] = base-p encoding of beta^k in the polynomial basis
        enc = np.empty(N, dtype=np.int64)
        cur = [1] + [0] * (d - 1)
        for k in range(N):
            enc[k] = sum(c * int(w) for c, w in zip(cur, powers))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [(c - top * f) % p for c, f in zip(cur, low)]
        log = np.full(N + 1, ZERO, dtype=np.int64)
        log[enc] = np.arange(N, dtype=np.int64)
        if (log[1:] == ZERO).any() or log[0] != ZERO:
            raise ValueError("modulus does not give a primitive element")
        self._enc = enc
        self._log = log
        self._powers = powers

        # 1 + beta^k: bump the constant digit
        d0 = enc % p
        one_plus = enc - d0 + (d0 + 1) % p
        self.zech = log[one_plus]
        self.zech.setflags(write=False)

        self._build_base_labels()
        self._build_traces()

    # -- internal tables -------------------------------------------------

    @cached_property
    def digits(self) -> np.ndarray:
        """(N, dim) digit vectors over GF(p) of beta^k."""
        return (self._enc[:, None] // self._powers[None, :]) % self.p

    def _digits_to_exp(self, dig: np.ndarray) -> np.ndarray:
        codes = (dig % self.p) @ self._powers
        return self._log[codes]

    def _build_base_labels(self):
        q, p, e = self.q, self.p, self.e
        omega_digits = self.digits[(np.arange(e) * self.base_step) % self.order]
        labels = np.arange(q)
        coeff = (labels[:, None] // p ** np.arange(e)[None, :]) % p  # (q, e)
        sums = coeff @ omega_digits  # (q, dim)
        label_exp = self._digits_to_exp(sums)
        self.label_to_exp = label_exp
        exp_to_label = {}
        for lab, k in enumerate(label_exp.tolist()):
            exp_to_label[k] = lab
        self._exp_to_label = exp_to_label
        # label arithmetic tables
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(q):
                ea, eb = int(label_exp[a]), int(label_exp[b])
                add[a, b] = exp_to_label[self.add(ea, eb)]
                mul[a, b] = exp_to_label[self.mul(ea, eb)]
        self.label_add = add
        self.label_mul = mul
        self.label_neg = np.array([exp_to_label[self.neg(int(k))] for k in label_exp])
        self.label_inv = np.array(
            [0] + [exp_to_label[self.inv(int(k))] for k in label_exp[1:]]
        )
        self.label_sub = add[np.arange(q)[:, None], self.label_neg[None, :]]

    def _build_traces(self):
        N, q, n = self.order, self.q, self.n
        ks = np.arange(N, dtype=np.int64)
        acc = np.zeros((N, self.dim), dtype=np.int64)
        for i in range(2 * n):
            acc += self.digits[(ks * q**i) % N]
        big = self._digits_to_exp(acc)
        # tables indexed by exponent, final slot for ZERO
        self.trace_big = np.append(self.exp_label_array(big), 0)

        js = np.arange(self.sub_order, dtype=np.int64)
        acc = np.zeros((self.sub_order, self.dim), dtype=np.int64)
        for i in range(n):
            acc += self.digits[(js * self.norm_exp * q**i) % N]
        sub = self._digits_to_exp(acc)
        # indexed by j where the element is gamma^j
        self.trace_sub = np.append(self.exp_label_array(sub), 0)

    def exp_label_array(self, exps: np.ndarray) -> np.ndarray:
        """GF(q) labels for an array of exponents (all must lie in GF(q))."""
        lut = np.zeros(self.order + 1, dtype=np.int64)
        lut[:] = -1
        for k, lab in self._exp_to_label.items():
            lut[k] = lab  # ZERO lands on the last slot
        out = lut[np.asarray(exps)]
        if (out < 0).any():
            raise ValueError("element not in GF(q)")
        return out

    # -- scalar field operations ----------------------------------------

    def reduce(self, k: int) -> int:
        return ZERO if k == ZERO else k % self.order

    def add(self, x: int, y: int) -> int:
        if x == ZERO:
            return y
        if y == ZERO:
            return x
        z = int(self.zech[(y - x) % self.order])
        return ZERO if z == ZERO else (x + z) % self.order

    def neg(self, x: int) -> int:
        if x == ZERO or self.p == 2:
            return x
        return (x + self.order // 2) % self.order

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if x == ZERO or y == ZERO:
            return ZERO
        return (x + y) % self.order

    def inv(self, x: int) -> int:
        if x == ZERO:
            raise ZeroDivisionError("inverse of zero")
        return (-x) % self.order

    def pow(self, x: int, k: int) -> int:
        if x == ZERO:
            if k < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0 if k == 0 else ZERO
        return (x * k) % self.order

    # -- vectorized counterparts ----------------------------------------

    def vadd(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        z = self.zech[(y - x) % self.order]
        r = np.where(z == ZERO, ZERO, (x + z) % self.order)
        r = np.where(x == ZERO, y, r)
        return np.where(y == ZERO, x, r)

    def vmul(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        return np.where((x == ZERO) | (y == ZERO), ZERO, (x + y) % self.order)

    def vtrace_big(self, x) -> np.ndarray:
        """Labels of Tr_{q^2n -> q}(x) for an exponent array."""
        x = np.asarray(x, dtype=np.int64)
        return self.trace_big[np.where(x == ZERO, self.order, x)]

    def vtrace_sub(self, y) -> np.ndarray:
        """Labels of Tr_{q^n -> q}(y); every y must lie in GF(q^n)."""
        y = np.asarray(y, dtype=np.int64)
        return self.trace_sub[np.where(y == ZERO, self.sub_order, y // self.norm_exp)]

    # -- subfields, trace and norm ---------------------------------------

    def in_subfield(self, x: int) -> bool:
        return x == ZERO or x % self.norm_exp == 0

    def in_base(self, x: int) -> bool:
        return x == ZERO or x % self.base_step == 0

    def label(self, x: int) -> int:
        """GF(q) label of an element of GF(q)."""
        try:
            return self._exp_to_label[self.reduce(x)]
        except KeyError:
            raise ValueError(f"beta^{x} is not in GF(q)") from None

    def from_label(self, lab: int) -> int:
        return int(self.label_to_exp[lab])

    def trace_to_base(self, x: int, source: str = "big") -> int:
        """Absolute trace to GF(q) from GF(q^2n) (``"big"``) or GF(q^n) (``"sub"``)."""
        if source == "big":
            return self.from_label(int(self.vtrace_big(self.reduce(x))))
        if source == "sub":
            if not self.in_subfield(x):
                raise ValueError(f"beta^{x} is not in GF(q^{self.n})")
            return self.from_label(int(self.vtrace_sub(self.reduce(x))))
        raise ValueError(f"unknown subfield tag {source!r}")

    def rel_norm(self, x: int) -> int:
        """x^(q^n + 1), the norm from GF(q^2n) down to GF(q^n)."""
        return self.pow(x, self.norm_exp)

    # -- coordinates -----------------------------------------------------

    def _span_table(self, basis_exps: list[int]) -> tuple[np.ndarray, np.ndarray]:
        # every GF(q)-combination of the basis: (labels, exponents)
        q, k = self.q, len(basis_exps)
        combos = np.indices((q,) * k).reshape(k, -1).T  # (q^k, k), coordinate 0 first
        acc = np.zeros((len(combos), self.dim), dtype=np.int64)
        for i, b in enumerate(basis_exps):
            terms = self.vmul(self.label_to_exp[combos[:, i]], b)
            nz = terms != ZERO
            acc[nz] += self.digits[terms[nz]]
        codes = (acc % self.p) @ self._powers
        return combos, self._log[codes]

    @cached_property
    def coord_table(self) -> np.ndarray:
        """Row k: GF(q) labels of beta^k in the basis 1, beta, ..., beta^(2n-1); last row is ZERO."""
        combos, exps = self._span_table(list(range(2 * self.n)))
        table = np.zeros((self.order + 1, 2 * self.n), dtype=np.int64)
        table[np.where(exps == ZERO, self.order, exps)] = combos
        table.setflags(write=False)
        return table

    @cached_property
    def sub_coord_table(self) -> np.ndarray:
        """Row j: labels of gamma^j in the basis 1, gamma, ..., gamma^(n-1); last row is ZERO."""
        basis = [i * self.norm_exp for i in range(self.n)]
        combos, exps = self._span_table(basis)
        table = np.zeros((self.sub_order + 1, self.n), dtype=np.int64)
        idx = np.where(exps == ZERO, self.sub_order, exps // self.norm_exp)
        table[idx] = combos
        table.setflags(write=False)
        return table

    def coords(self, x: int) -> tuple[int, ...]:
        return tuple(self.coord_table[self.order if x == ZERO else x % self.order].tolist())

    def coords_sub(self, y: int) -> tuple[int, ...]:
        if not self.in_subfield(y):
            raise ValueError(f"beta^{y} is not in GF(q^{self.n})")
        j = self.sub_order if y == ZERO else (y % self.order) // self.norm_exp
        return tuple(self.sub_coord_table[j].tolist())

    def from_coords(self, labels, basis: str = "big") -> int:
        step = 1 if basis == "big" else self.norm_exp
        x = ZERO
        for i, lab in enumerate(labels):
            x = self.add(x, self.mul(self.from_label(int(lab)), i * step))
        return x

    def describe(self) -> dict:
        return {
            "p": self.p,
            "e": self.e,
            "n": self.n,
            "q": self.q,
            "modulus": list(self.params.modulus),
            "beta_order": self.order,
            "gamma_exponent": self.gamma,
            "xi_exponent": self.xi,
            "base_field_generator_exponent": self.base_step,
        }


def build_tower(
    p: int,
    e: int,
    n: int,
    modulus: list[int] | tuple[int, ...] | None = None,
    max_entries: int = DEFAULT_MAX_ENTRIES,
) -> FieldTables:
    """Build tables for GF(p^e) <= GF(p^(en)) <= GF(p^(2en))."""
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if e < 1:
        raise ValueError("e must be a positive integer")
    if n < 2:
        raise ValueError("n must be at least 2")
    degree = 2 * n * e
    if p**degree > max_entries:
        raise ResourceCapError(
            f"GF({p}^{degree}) needs {p**degree} table entries, cap is {max_entries}"
        )
    if modulus is None:
        modulus = find_primitive_polynomial(p, degree)
    else:
        modulus = tuple(int(c) for c in modulus)
        if len(modulus) != degree + 1:
            raise ValueError(f"modulus must have degree {degree}")
        if not is_primitive(modulus, p):
            raise ValueError("modulus is not a primitive polynomial")
    return FieldTables(TowerParams(p, e, n, tuple(modulus)))
