"""Root data and Weyl group combinatorics over an explicit lattice basis.

The lattice Y is Z^d.  ``R`` (n x d) evaluates the simple roots on the basis,
``C`` (d x n) holds the simple coroots as columns, and ``R @ C`` is the
transpose of the Cartan matrix.

>>> rd = build_root_datum({"cartan": [[2, -1], [-1, 2]], "lattice": "coweight"})
>>> reflect(rd, 0, (2, -1))
(-2, 1)
>>> len(weyl_ball(rd, 3))
6
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, NamedTuple, Sequence

import sympy

from .coeffs import ParamCoeff

DEFAULT_ELEMENT_CAP = 200_000

Vec = tuple  # tuple of ints


class RootDatumError(ValueError):
    pass


class ElementCapExceeded(RuntimeError):
    def __init__(self, cap: int, bound: str):
        super().__init__(f"element cap {cap} exceeded while enumerating {bound}")
        self.cap = cap
        self.bound = bound


@dataclass(frozen=True, eq=False)
class WeylElt:
    matrix: tuple  # row-major d*d
    word: tuple = field(compare=False)
    length: int = field(compare=False)

    def __eq__(self, other):
        return isinstance(other, WeylElt) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        w = "".join(f"r{i + 1}" for i in self.word) or "e"
        return f"WeylElt({w})"


@dataclass(frozen=True)
class PosRealCoroot:
    coords: tuple
    q_coords: tuple
    height: int
    class_index: int


class PoincareSeries(NamedTuple):
    value: ParamCoeff
    exact: bool


def _parse_num(x, where: str) -> Fraction:
    try:
        return Fraction(x) if isinstance(x, str) else Fraction(x)
    except (ValueError, TypeError) as exc:
        raise RootDatumError(f"{where}: cannot parse number {x!r}") from exc


def _int_matrix(rows, where: str) -> list[list[int]]:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise RootDatumError(f"{where}: expected a non-empty array of arrays")
    width = len(rows[0])
    out = []
    for k, r in enumerate(rows):
        if len(r) != width:
            raise RootDatumError(f"{where}[{k}]: row length {len(r)} != {width}")
        for j, x in enumerate(r):
            if isinstance(x, bool) or not isinstance(x, int):
                raise RootDatumError(f"{where}[{k}][{j}]: expected integer, got {x!r}")
        out.append(list(r))
    return out


class RootDatum:
    """GCM with a lattice realization, parameter classes and rho.

    Derived data (reflection matrices, height functional, Weyl group cache) is
    computed once; the Weyl cache only ever grows by content-addressed entries.
    """

    def __init__(self, cartan, R, C, rho, parameters: str = "equal",
                 element_cap: int = DEFAULT_ELEMENT_CAP):
        self.cartan = tuple(tuple(r) for r in cartan)
        self.index_count = n = len(cartan)
        self.R = tuple(tuple(r) for r in R)
        self.C = tuple(tuple(r) for r in C)
        self.lattice_dim = d = len(self.C)
        self.rho = tuple(Fraction(x) for x in rho)
        self.parameters = parameters
        self.element_cap = element_cap
        self.coroots = tuple(tuple(self.C[k][j] for k in range(d)) for j in range(n))
        self._validate()
        self.param_classes = self._classes()
        self._build_height()
        self._refl = tuple(self._reflection_matrix(i) for i in range(n))
        self._weyl = _WeylCache(self)
        self._coroot_classes: dict = {}
        self._coroot_height_done = 0

    # config-style field names
    @property
    def roots_on_basis(self):
        return self.R

    @property
    def coroots_in_basis(self):
        return self.C

    def _validate(self):
        A, n, d = self.cartan, self.index_count, self.lattice_dim
        for i in range(n):
            if len(A[i]) != n:
                raise RootDatumError("cartan must be square")
            if A[i][i] != 2:
                raise RootDatumError(f"cartan[{i}][{i}] must be 2")
            for j in range(n):
                if i != j:
                    if A[i][j] > 0:
                        raise RootDatumError(f"cartan[{i}][{j}] must be <= 0")
                    if (A[i][j] == 0) != (A[j][i] == 0):
                        raise RootDatumError(f"cartan[{i}][{j}] and cartan[{j}][{i}] must vanish together")
        if len(self.R) != n or any(len(r) != d for r in self.R):
            raise RootDatumError(f"roots_on_basis must be {n}x{d}")
        if any(len(r) != n for r in self.C):
            raise RootDatumError(f"coroots_in_basis must be {d}x{n}")
        for i in range(n):
            for j in range(n):
                pair = sum(self.R[i][k] * self.C[k][j] for k in range(d))
                if pair != A[j][i]:
                    raise RootDatumError(
                        f"pairing mismatch: alpha_{i + 1}(alpha_{j + 1}^vee) = {pair}, cartan[{j}][{i}] = {A[j][i]}")
        if sympy.Matrix(self.R).rank() < n:
            raise RootDatumError("rows of roots_on_basis are linearly dependent")
        if sympy.Matrix(self.C).rank() < n:
            raise RootDatumError("columns of coroots_in_basis are linearly dependent")
        if len(self.rho) != d:
            raise RootDatumError(f"rho must have length {d}")
        for j in range(n):
            if sum(self.rho[k] * self.C[k][j] for k in range(d)) != 1:
                raise RootDatumError(f"rho(alpha_{j + 1}^vee) must be 1")
        for k in range(d):
            if (2 * self.rho[k]).denominator != 1:
                raise RootDatumError("rho must take integer or half-integer values on the basis")

    def _classes(self) -> tuple:
        """Partition of labels ('s', i), ('t', i) into merged classes."""
        n = self.index_count
        labels = [("s", i) for i in range(n)] + [("t", i) for i in range(n)]
        parent = {x: x for x in labels}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)

        if self.parameters == "equal":
            for x in labels:
                union(x, labels[0])
        elif self.parameters == "auto":
            for i in range(n):
                if any(x % 2 for x in self.R[i]):
                    union(("s", i), ("t", i))
            for i in range(n):
                for j in range(n):
                    if i != j and self.cartan[i][j] == -1 and self.cartan[j][i] == -1:
                        for x in (("t", i), ("s", j), ("t", j)):
                            union(("s", i), x)
        else:
            raise RootDatumError(f"parameters must be 'equal' or 'auto', got {self.parameters!r}")
        groups: dict = {}
        for x in labels:
            groups.setdefault(find(x), []).append(x)
        classes = tuple(tuple(sorted(g)) for _, g in sorted(groups.items()))
        self._class_of = {}
        single = len(classes) == 1
        names = []
        for k, g in enumerate(classes):
            kind, i = g[0]
            if single:
                name = "σ"
            else:
                name = f"σ{i + 1}" if kind == "s" else f"σ'{i + 1}"
            names.append(name)
            for x in g:
                self._class_of[x] = k
        self.class_names = tuple(names)
        self.vars = tuple(sorted(names))
        return classes

    def _build_height(self):
        C = sympy.Matrix(self.C)
        L = (C.T * C).inv() * C.T  # left inverse, n x d
        self._left_inv = [[Fraction(int(x.p), int(x.q)) for x in L.row(i)] for i in range(self.index_count)]
        h = [sum(self._left_inv[i][k] for i in range(self.index_count)) for k in range(self.lattice_dim)]
        self.height_den = lcm(*[x.denominator for x in h]) if h else 1
        self.height_vec = tuple(int(x * self.height_den) for x in h)

    def _reflection_matrix(self, i: int) -> tuple:
        d = self.lattice_dim
        return tuple((1 if r == c else 0) - self.C[r][i] * self.R[i][c] for r in range(d) for c in range(d))

    # parameters

    def class_index(self, kind: str, i: int) -> int:
        return self._class_of[(kind, i)]

    def sigma_name(self, i: int) -> str:
        return self.class_names[self._class_of[("s", i)]]

    def sigma_prime_name(self, i: int) -> str:
        return self.class_names[self._class_of[("t", i)]]

    def sigma(self, i: int, exp: int = 1) -> ParamCoeff:
        return ParamCoeff.monomial({self.sigma_name(i): exp}, 1, self.vars)

    def sigma_prime(self, i: int, exp: int = 1) -> ParamCoeff:
        return ParamCoeff.monomial({self.sigma_prime_name(i): exp}, 1, self.vars)

    def sigma_w(self, w: "WeylElt | Sequence[int]", exp: int = 1) -> ParamCoeff:
        word = w.word if isinstance(w, WeylElt) else w
        exps: dict = {}
        for i in word:
            nm = self.sigma_name(i)
            exps[nm] = exps.get(nm, 0) + exp
        return ParamCoeff.monomial(exps, 1, self.vars)

    def equal_parameters(self) -> bool:
        return len(self.param_classes) == 1

    def one(self) -> ParamCoeff:
        return ParamCoeff.one(self.vars)

    # lattice helpers

    def pair(self, i: int, v: Sequence[int]) -> int:
        """alpha_i(v)."""
        r = self.R[i]
        return sum(r[k] * v[k] for k in range(self.lattice_dim))

    def coroot_coords(self, v: Sequence[int]) -> tuple | None:
        """Integer coordinates of v in the simple coroot basis, or None if v is not in Q^vee."""
        n, d = self.index_count, self.lattice_dim
        x = [sum(self._left_inv[i][k] * v[k] for k in range(d)) for i in range(n)]
        if any(c.denominator != 1 for c in x):
            return None
        xi = tuple(int(c) for c in x)
        if tuple(sum(self.C[k][j] * xi[j] for j in range(n)) for k in range(d)) != tuple(v):
            return None
        return xi

    def from_coroot_coords(self, x: Sequence[int]) -> tuple:
        n, d = self.index_count, self.lattice_dim
        return tuple(sum(self.C[k][j] * x[j] for j in range(n)) for k in range(d))

    def hscaled(self, v: Sequence[int]) -> int:
        """height_den * ht(v), valid for v in the span of the coroots."""
        return sum(a * b for a, b in zip(self.height_vec, v))

    def height(self, v: Sequence[int]) -> Fraction:
        return Fraction(self.hscaled(v), self.height_den)

    def is_dominant(self, lam: Sequence[int]) -> bool:
        return all(self.pair(i, lam) >= 0 for i in range(self.index_count))

    def rho_value(self, v: Sequence[int]) -> Fraction:
        return sum((r * x for r, x in zip(self.rho, v)), Fraction(0))

    def check_vector(self, v, what: str = "vector") -> tuple:
        v = tuple(v)
        if len(v) != self.lattice_dim:
            raise RootDatumError(f"{what} must have {self.lattice_dim} coordinates, got {len(v)}")
        return v

    # Weyl group

    def identity(self) -> WeylElt:
        return self._weyl.layers[0][0]

    def simple(self, i: int) -> WeylElt:
        return self._weyl.element(self._refl[i], 1)

    def act(self, w: WeylElt | tuple, v: Sequence[int]) -> tuple:
        m = w.matrix if isinstance(w, WeylElt) else w
        d = self.lattice_dim
        return tuple(sum(m[r * d + c] * v[c] for c in range(d)) for r in range(d))

    def matmul(self, a: tuple, b: tuple) -> tuple:
        d = self.lattice_dim
        return tuple(sum(a[r * d + k] * b[k * d + c] for k in range(d)) for r in range(d) for c in range(d))

    def mul_simple_right(self, w: WeylElt, i: int) -> WeylElt:
        """Canonical element w r_i."""
        return self._weyl.element(self.matmul(w.matrix, self._refl[i]), w.length + 1)

    def mul_simple_left(self, i: int, w: WeylElt) -> WeylElt:
        return self._weyl.element(self.matmul(self._refl[i], w.matrix), w.length + 1)

    def element_from_word(self, word: Iterable[int]) -> WeylElt:
        m = self.identity().matrix
        k = 0
        for i in word:
            m = self.matmul(m, self._refl[i])
            k += 1
        return self._weyl.element(m, k)

    def inverse(self, w: WeylElt) -> WeylElt:
        return self.element_from_word(reversed(w.word))

    def left_descent(self, w: WeylElt, i: int) -> bool:
        """ell(r_i w) < ell(w), i.e. w^{-1}(alpha_i^vee) is negative."""
        v = self.act(self.inverse(w), self.coroots[i])
        return self.coroot_sign(v) < 0

    def coroot_sign(self, v: Sequence[int]) -> int:
        x = self.coroot_coords(v)
        if x is None:
            raise RootDatumError(f"{v} is not in the coroot lattice")
        if all(c >= 0 for c in x) and any(x):
            return 1
        if all(c <= 0 for c in x) and any(x):
            return -1
        return 0

    # coroot classes

    def coroot_class(self, beta: Sequence[int]) -> int:
        """Index i of a simple coroot in the W-orbit of +-beta (raises if not real)."""
        beta = tuple(beta)
        x = self.coroot_coords(beta)
        if x is None or not any(x):
            raise RootDatumError(f"{beta} is not a real coroot")
        if all(c <= 0 for c in x):
            beta = tuple(-c for c in beta)
            x = tuple(-c for c in x)
        elif not all(c >= 0 for c in x):
            raise RootDatumError(f"{beta} is not a real coroot")
        h = sum(x)
        if beta not in self._coroot_classes and h > self._coroot_height_done:
            for b in positive_real_coroots(self, h):
                self._coroot_classes[b.coords] = b.class_index
            self._coroot_height_done = h
        if beta not in self._coroot_classes:
            raise RootDatumError(f"{beta} is not a real coroot")
        return self._coroot_classes[beta]


class _WeylCache:
    """Breadth-first enumeration by length with ShortLex-minimal words."""

    def __init__(self, rd: RootDatum):
        self.rd = rd
        d = rd.lattice_dim
        ident = tuple(1 if r == c else 0 for r in range(d) for c in range(d))
        e = WeylElt(ident, (), 0)
        self.layers = [[e]]
        self.index = {ident: e}
        self.count = 1
        self.exhausted = False

    def extend_to(self, L: int):
        rd = self.rd
        while len(self.layers) <= L and not self.exhausted:
            nxt = []
            k = len(self.layers)
            for w in self.layers[-1]:
                for i in range(rd.index_count):
                    m = rd.matmul(w.matrix, rd._refl[i])
                    if m in self.index:
                        continue
                    u = WeylElt(m, w.word + (i,), k)
                    self.index[m] = u
                    nxt.append(u)
                    self.count += 1
                    if self.count > rd.element_cap:
                        raise ElementCapExceeded(rd.element_cap, f"Weyl ball of length {k}")
            if not nxt:
                self.exhausted = True
                break
            self.layers.append(nxt)

    def element(self, matrix: tuple, max_length: int) -> WeylElt:
        w = self.index.get(matrix)
        if w is None:
            self.extend_to(max_length)
            w = self.index.get(matrix)
        if w is None:
            raise RootDatumError("matrix is not a Weyl group element of the expected length")
        return w

    def ball(self, L: int) -> list:
        self.extend_to(L)
        return [w for layer in self.layers[: L + 1] for w in layer]


# construction


def build_root_datum(config: dict, element_cap: int | None = None) -> RootDatum:
    """Validate a config mapping and build the datum."""
    if not isinstance(config, dict):
        raise RootDatumError("config must be a JSON object")
    if "cartan" not in config:
        raise RootDatumError("config: missing field 'cartan'")
    A = _int_matrix(config["cartan"], "cartan")
    n = len(A)
    if any(len(r) != n for r in A):
        raise RootDatumError("cartan: must be square")
    lattice = config.get("lattice", "coweight")
    if lattice == "coweight":
        R = [[1 if i == k else 0 for k in range(n)] for i in range(n)]
        C = [[A[j][k] for j in range(n)] for k in range(n)]  # C = A^T
    elif isinstance(lattice, dict):
        for key in ("roots_on_basis", "coroots_in_basis"):
            if key not in lattice:
                raise RootDatumError(f"lattice: missing field {key!r}")
        R = _int_matrix(lattice["roots_on_basis"], "lattice.roots_on_basis")
        C = _int_matrix(lattice["coroots_in_basis"], "lattice.coroots_in_basis")
    else:
        raise RootDatumError(f"lattice: expected 'coweight' or an object, got {lattice!r}")
    d = len(C)
    if len(R) != n or any(len(r) != d for r in R):
        raise RootDatumError(f"lattice.roots_on_basis: expected {n}x{d}")
    if any(len(r) != n for r in C):
        raise RootDatumError(f"lattice.coroots_in_basis: expected {d}x{n}")
    if "rho" in config:
        rho_raw = config["rho"]
        if not isinstance(rho_raw, list):
            raise RootDatumError("rho: expected an array")
        rho = [_parse_num(x, f"rho[{k}]") for k, x in enumerate(rho_raw)]
    else:
        rho = _solve_rho(C, n, d)
    params = config.get("parameters", "equal")
    cap = element_cap if element_cap is not None else config.get("element_cap", DEFAULT_ELEMENT_CAP)
    return RootDatum(A, R, C, rho, params, cap)


def _solve_rho(C, n: int, d: int) -> list:
    M = sympy.Matrix(C).T  # n x d, rows are coroots
    if M.rank() < n:
        raise RootDatumError("rho(alpha_i^vee) = 1 is unsolvable: coroot columns are dependent; "
                             "give an explicit lattice realization and rho")
    if d > n:
        raise RootDatumError("rho(alpha_i^vee) = 1 has no unique solution on this basis; give rho explicitly")
    sol = M.LUsolve(sympy.Matrix([1] * n))
    return [Fraction(int(x.p), int(x.q)) for x in sol]


def load_config(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise RootDatumError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


# operations


def reflect(rd: RootDatum, i: int, v: Sequence[int]) -> tuple:
    if not 0 <= i < rd.index_count:
        raise IndexError(f"index {i} out of range")
    m = rd.pair(i, v)
    return tuple(v[k] - m * rd.C[k][i] for k in range(rd.lattice_dim))


def weyl_ball(rd: RootDatum, L: int) -> list:
    if L < 0:
        raise ValueError("L must be >= 0")
    return rd._weyl.ball(L)


def inversion_coroots(rd: RootDatum, w: WeylElt) -> list:
    out = []
    m = rd.identity().matrix
    for i in w.word:
        beta = rd.act(m, rd.coroots[i])
        x = rd.coroot_coords(beta)
        out.append(PosRealCoroot(beta, x, sum(x), i))
        m = rd.matmul(m, rd._refl[i])
    return out


def positive_real_coroots(rd: RootDatum, N: int) -> list:
    if N < 1:
        raise ValueError("N must be >= 1")
    found: dict = {}
    frontier = []
    for i in range(rd.index_count):
        x = tuple(1 if j == i else 0 for j in range(rd.index_count))
        b = PosRealCoroot(rd.coroots[i], x, 1, i)
        found[b.coords] = b
        frontier.append(b)
    while frontier:
        new = []
        for b in frontier:
            for j in range(rd.index_count):
                c = reflect(rd, j, b.coords)
                if c in found:
                    continue
                x = rd.coroot_coords(c)
                if not all(t >= 0 for t in x) or sum(x) > N:
                    continue
                nb = PosRealCoroot(c, x, sum(x), b.class_index)
                found[c] = nb
                new.append(nb)
        frontier = new
    return sorted(found.values(), key=lambda b: (b.height, tuple(-t for t in b.q_coords)))


def stabilizer_indices(rd: RootDatum, lam: Sequence[int]) -> tuple:
    return tuple(i for i in range(rd.index_count) if rd.pair(i, lam) == 0)


def is_min_coset_rep(rd: RootDatum, w: WeylElt, lam: Sequence[int]) -> bool:
    for i in stabilizer_indices(rd, lam):
        if rd.coroot_sign(rd.act(w, rd.coroots[i])) < 0:
            return False
    return True


def min_coset_reps(rd: RootDatum, lam: Sequence[int], L: int) -> list:
    lam = rd.check_vector(lam, "lambda")
    if not rd.is_dominant(lam):
        raise RootDatumError(f"lambda={lam} is not dominant")
    J = stabilizer_indices(rd, lam)
    out = []
    for w in weyl_ball(rd, L):
        if all(rd.coroot_sign(rd.act(w, rd.coroots[i])) > 0 for i in J):
            out.append(w)
    return out


def parabolic_ball(rd: RootDatum, J: Iterable[int], L: int) -> tuple[list, bool]:
    """Elements of W(J) of length <= L (lengths in W) and whether W(J) was exhausted."""
    J = sorted(set(J))
    e = rd.identity()
    layers = [[e]]
    seen = {e.matrix}
    count = 1
    exhausted = False
    for _ in range(L + 1):
        nxt = []
        for w in layers[-1]:
            for i in J:
                u = rd.mul_simple_right(w, i)
                if u.matrix in seen:
                    continue
                seen.add(u.matrix)
                nxt.append(u)
                count += 1
                if count > rd.element_cap:
                    raise ElementCapExceeded(rd.element_cap, f"parabolic subgroup up to length {len(layers)}")
        if not nxt:
            exhausted = True
            break
        if len(layers) <= L:
            layers.append(nxt)
        else:
            break
    return [w for layer in layers for w in layer], exhausted


def poincare_series(rd: RootDatum, J="full", D: int = 0) -> PoincareSeries:
    """Sum of sigma_w^2 over w in W(J) with length <= D."""
    if D < 0:
        raise ValueError("D must be >= 0")
    J = range(rd.index_count) if J == "full" else J
    elems, exact = parabolic_ball(rd, J, D)
    total = ParamCoeff.zero(rd.vars)
    for w in elems:
        total = total + rd.sigma_w(w, 2)
    return PoincareSeries(total, exact)
