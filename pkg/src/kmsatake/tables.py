"""Symbolic check of the rank-one cancellation tables behind the path recursion.

For a wall of direction alpha_i and mu_0 with alpha_i(mu_0) = n, simplified paths
are grouped by the index k of the first wall on the negative side.  Each group
contributes count * delta_i^{1/2}(mu) * Gamma_i(mu) and the groups must cancel.
Everything is an explicit rational function in sqrt(q), sqrt(q') and
z = e^{alpha_i^vee}, so the totals are checked with exact cancellation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import sympy

SQ, SQP, Z = sympy.symbols("sqrt_q sqrt_qp z", positive=True)


def b_function(s, t, z):
    """b(s, t; z) = ((s - 1/s) + (t - 1/t) z) / (1 - z^2)."""
    return ((s - 1 / s) + (t - 1 / t) * z) / (1 - z ** 2)


def b_q(sq, sqp, z):
    return b_function(1 / sq, 1 / sqp, z) / sq


def c_q(sq, sqp, z):
    return 1 / sq ** 2 - b_q(sq, sqp, z)


def q_star(k: int, sq, sqp):
    """q'^{*k} = q' q q' ... (k factors, starting with q'); 1 for k = 0."""
    out = sympy.Integer(1)
    for j in range(k):
        out *= sqp ** 2 if j % 2 == 0 else sq ** 2
    return out


@dataclass
class TableRow:
    k: int
    count: sympy.Expr
    delta_half: sympy.Expr
    gamma: sympy.Expr

    def to_json(self) -> dict:
        return {"k": self.k, "count": str(self.count), "delta_half": str(self.delta_half),
                "gamma": str(self.gamma)}


@dataclass
class TableCase:
    n: int
    same_first_stripes: bool | None
    equal_parameters: bool
    rows: list
    total: sympy.Expr

    @property
    def passed(self) -> bool:
        return self.total == 0

    def to_json(self) -> dict:
        return {"n": self.n, "case": _case_name(self.same_first_stripes),
                "equal_parameters": self.equal_parameters,
                "rows": [r.to_json() for r in self.rows], "total": str(self.total),
                "passed": self.passed}


@dataclass
class TablesReport:
    n_max: int
    cases: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def to_json(self) -> dict:
        return {"schema": 1, "n_max": self.n_max, "passed": self.passed,
                "cases": [c.to_json() for c in self.cases]}


def _case_name(same) -> str:
    if same is None:
        return "n=0"
    return "s0=s1" if same else "s0!=s1"


def table_rows(n: int, same: bool | None, sq=SQ, sqp=SQP) -> list:
    """Rows (k, count, delta^{1/2}(mu), Gamma_i(mu)/e^{mu_0}) rebuilt from their definitions."""
    q = sq ** 2
    bq = b_q(sq, sqp, Z)
    cq = c_q(sq, sqp, Z)

    def dh(k):
        return (sq * sqp) ** (-k) if k > 0 else sympy.Integer(1)

    def positive_gamma(k):
        # c_q e^{r_i mu} + b_q e^{mu}, mu = mu_0 - k alpha^vee, r_i mu = mu_0 - (n - k) alpha^vee
        return cq * Z ** (-(n - k)) + bq * Z ** (-k)

    rows = []
    if n == 0:
        rows.append(TableRow(-1, sympy.Integer(1), dh(-1), sympy.Integer(-1)))
        rows.append(TableRow(0, q, dh(0), sympy.cancel(positive_gamma(0))))
        return rows
    if not same:
        rows.append(TableRow(-1, sympy.Integer(1), dh(-1), sympy.Integer(-1)))
        rows.append(TableRow(0, q - 1, dh(0), positive_gamma(0)))
        for k in range(1, n):
            cnt = (q_star(k, sq, sqp) - q_star(k - 1, sq, sqp)) * q
            rows.append(TableRow(k, cnt, dh(k), positive_gamma(k)))
        rows.append(TableRow(n, q * q_star(n, sq, sqp), dh(n), positive_gamma(n)))
    else:
        rows.append(TableRow(0, sympy.Integer(1), dh(0), positive_gamma(0)))
        for k in range(1, n):
            cnt = q_star(k, sq, sqp) - q_star(k - 1, sq, sqp)
            rows.append(TableRow(k, cnt, dh(k), -Z ** (-k)))
        rows.append(TableRow(n, q_star(n, sq, sqp), dh(n), -Z ** (-n)))
    return rows


def table_total(rows) -> sympy.Expr:
    return sympy.cancel(sympy.together(sum(r.count * r.delta_half * r.gamma for r in rows)))


def verify_rank_one_tables(n_max: int) -> TablesReport:
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    report = TablesReport(n_max)
    for n in range(n_max + 1):
        # odd n forces q = q'
        sqp = SQ if n % 2 else SQP
        for same in ([None] if n == 0 else [False, True]):
            rows = table_rows(n, same, SQ, sqp)
            report.cases.append(TableCase(n, same, sqp is SQ, rows, table_total(rows)))
    return report


verify_section36_tables = verify_rank_one_tables
