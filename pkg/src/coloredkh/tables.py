"""Local cancellation tables for contracted strands, as data, with a Frobenius replay.

Each table describes the part of an enhanced state S near the crossings of
two contracted strands.  A row lists the labels of the circles of S there,
the terms of d(S) that are Type 1_j panels (codes ``a-*``) and the matching
Type 2_j panels (codes ``b-*``).  Labels are strings over ``1``/``x``; ``"0"``
stands for a zero map.  Marks are +1 (⊕), -1 (⊖) or None (unmarked).

Every row is replayed through m and Δ: a-panels must be exactly the terms
of the a-rule matching the panel's label pattern, b-panels must be terms of
their rule, and ⊕/⊖ counts must balance where the table claims they do.
Rows known to be misprinted are stored twice, as printed and as corrected.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable

# ---------------------------------------------------------------- Frobenius


def mult(u: str, v: str) -> list[str]:
    """m on single labels: 1·1 = 1, 1·x = x·1 = x, x·x = 0."""
    if u == "x" and v == "x":
        return []
    return ["x" if "x" in (u, v) else "1"]


def comult(u: str) -> list[tuple[str, str]]:
    """Δ(1) = 1⊗x + x⊗1, Δ(x) = x⊗x."""
    return [("1", "x"), ("x", "1")] if u == "1" else [("x", "x")]


def degree(labels: str) -> int:
    """Quantum degree of a label word: +1 per 1, -1 per x."""
    return labels.count("1") - labels.count("x")


def matches(pattern: str, labels: str) -> bool:
    return len(pattern) == len(labels) and all(p in ("*", c) for p, c in zip(pattern, labels))


# The rules below take the row's labels in printed order.

def _a_b_D(a, b, c):
    return [a + b + p + q for p, q in comult(c)]


def _a_m(a, b, c):
    return [a + r for r in mult(b, c)]


def _a_D(a, c):
    return [a + p + q for p, q in comult(c)]


def _m2(a, c):
    return mult(a, c)


def _ab_m(a, b, c, d):
    return [a + b + r for r in mult(c, d)]


def _a_m_d(a, b, c, d):
    return [a + r + d for r in mult(b, c)]


def _m_first_then(a, d, c):
    return [r + d for r in mult(a, c)]


def _a_Db_c(a, b, c):
    return [a + p + q + c for p, q in comult(b)]


def _m_ab_then_d(a, b, d):
    return [r + d for r in mult(a, b)]


def _a_m_bd(a, b, d):
    return [a + r for r in mult(b, d)]


def _m_ad_then_b(a, b, d):
    return [r + b for r in mult(a, d)]


def _Da_around(a, d):
    return [p + d + q for p, q in comult(a)]


def _D(a):
    return [p + q for p, q in comult(a)]


def _D_then(a, c):
    return [p + q + c for p, q in comult(a)]


# ---------------------------------------------------------------- records


@dataclass(frozen=True)
class Entry:
    code: str            # "a-1" .. "a-4", "b-1" .. "b-4"
    labels: str          # "0" for a zero entry
    mark: int | None = None
    code_printed: bool = True


@dataclass(frozen=True)
class Row:
    s: str
    entries: tuple[Entry, ...]

    def of(self, prefix: str) -> list[Entry]:
        return [e for e in self.entries if e.code.startswith(prefix)]


@dataclass(frozen=True)
class Erratum:
    row: int             # index into the printed rows
    printed: Row | None
    corrected: Row | None
    note: str


@dataclass(frozen=True)
class Table:
    number: int
    variables: str                       # names of the row labels, in printed order
    a_rule: Callable[..., list[str]]
    patterns: dict[str, str]             # a-code -> label pattern
    b_rules: dict[str, Callable[..., list[str]]]
    printed: tuple[Row, ...]
    errata: tuple[Erratum, ...] = ()
    balance: str = "none"                # "marks", "a-codes" or "none"
    notes: tuple[str, ...] = ()

    @property
    def rows(self) -> tuple[Row, ...]:
        """Rows with every erratum applied."""
        out = list(self.printed)
        for er in self.errata:
            if er.corrected is not None:
                out[er.row] = er.corrected
        return tuple(out)


def _row(s: str, *specs: str) -> Row:
    """Entries as ``"+a-1:x1xx"``, ``"b-1:xx"``, ``"?b-2:xx1"`` (code not printed)."""
    out = []
    for spec in specs:
        code, labels = spec.split(":")
        mark = None
        printed = True
        if code[0] == "?":
            printed, code = False, code[1:]
        if code[0] in "+-":
            mark, code = (1 if code[0] == "+" else -1), code[1:]
        out.append(Entry(code, labels, mark, printed))
    return Row(s, tuple(out))


def _ab(a_code: str, a: str | None, b_code: str, b: str) -> tuple[str, ...]:
    """A row of the first eight tables: at most one a-panel (⊕) and one b-value (⊖)."""
    out = []
    if a is not None:
        out.append(f"+{a_code}:{a}")
    out.append(f"{'' if b == '0' else '-'}{b_code}:{b}")
    return tuple(out)


def _tables_1_to_8() -> list[Table]:
    t = []
    rows = [("x1x", "a-1", "x1xx", "xx"), ("x11", "a-1", "x1x1", "x1"), ("11x", "a-1", "11xx", "1x"),
            ("111", "a-1", "11x1", "11"), ("xx1", "a-2", "xx1x", "xx"), ("1x1", "a-2", "1x1x", "1x"),
            ("xxx", None, None, "0"), ("1xx", None, None, "0")]
    t.append(Table(1, "abc", _a_b_D, {"a-1": "*1x*", "a-2": "*x1*"}, {"b-1": _a_m},
                   tuple(_row(s, *_ab(c or "a-1", a, "b-1", b)) for s, c, a, b in rows)))
    rows = [("x1", "a-2", "x1x", "x"), ("1x", "a-1", "1xx", "x"), ("11", "a-1", "1x1", "1"),
            ("xx", None, None, "0")]
    t.append(Table(2, "ac", _a_D, {"a-1": "1x*", "a-2": "x1*"}, {"b-1": _m2},
                   tuple(_row(s, *_ab(c or "a-1", a, "b-1", b)) for s, c, a, b in rows)))
    rows = [("x1x1", "a-1", "x1x", "xx1"), ("x11x", "a-1", "x1x", "x1x"), ("11x1", "a-1", "11x", "1x1"),
            ("111x", "a-1", "11x", "11x"), ("xx11", "a-2", "xx1", "xx1"), ("1x11", "a-2", "1x1", "1x1"),
            ("xxxx", None, None, "0"), ("xxx1", None, None, "0"), ("xx1x", None, None, "xxx"),
            ("x1xx", None, None, "xxx"), ("x111", None, None, "x11"), ("1xxx", None, None, "0"),
            ("1xx1", None, None, "0"), ("1x1x", None, None, "1xx"), ("11xx", None, None, "1xx"),
            ("1111", None, None, "111")]
    t.append(Table(3, "abcd", _ab_m, {"a-1": "*1x", "a-2": "*x1"}, {"b-1": _a_m_d},
                   tuple(_row(s, *_ab(c or "a-1", a, "b-1", b)) for s, c, a, b in rows)))
    rows = [("x11", "a-2", "x1", "x1"), ("1x1", "a-1", "1x", "1x"), ("11x", "a-1", "1x", "x1"),
            ("xxx", None, None, "0"), ("xx1", None, None, "xx"), ("x1x", None, None, "0"),
            ("1xx", None, None, "xx"), ("111", None, None, "11")]
    t.append(Table(4, "adc", _a_m, {"a-1": "1x", "a-2": "x1"}, {"b-1": _m_first_then},
                   tuple(_row(s, *_ab(c or "a-1", a, "b-1", b)) for s, c, a, b in rows)))
    rows = [("x1x", "a-1", "xx1x", "xx"), ("11x", "a-1", "1x1x", "1x"), ("xx1", "a-2", "xxx1", "xx"),
            ("x11", "a-2", "x1x1", "x1"), ("1x1", "a-2", "1xx1", "1x"), ("111", "a-2", "11x1", "11"),
            ("xxx", None, None, "0"), ("1xx", None, None, "0")]
    t.append(Table(5, "abc", _a_Db_c, {"a-1": "**1x", "a-2": "**x1"}, {"b-2": _a_m},
                   tuple(_row(s, *_ab(c or "a-1", a, "b-2", b)) for s, c, a, b in rows)))
    rows = [("x11x", "a-1", "x1x", "x1x"), ("111x", "a-1", "11x", "11x"), ("x1x1", "a-2", "xx1", "x1x"),
            ("1x11", "a-2", "1x1", "1x1"), ("11x1", "a-2", "1x1", "11x"), ("xx11", "a-2", "xx1", "xx1"),
            ("xxxx", None, None, "0"), ("xx1x", None, None, "xxx"), ("x1xx", None, None, "0"),
            ("xxx1", None, None, "xxx"), ("x111", None, None, "x11"), ("1xxx", None, None, "0"),
            ("1x1x", None, None, "1xx"), ("11xx", None, None, "0"), ("1xx1", None, None, "1xx"),
            ("1111", None, None, "111")]
    six = [_row(s, *_ab(c or "a-1", a, "b-2", b)) for s, c, a, b in rows]
    # this b-value is printed without its panel code
    six[5] = _row("xx11", "+a-2:xx1", "?-b-2:xx1")
    t.append(Table(6, "abdc", _a_m_bd_c, {"a-1": "*1x", "a-2": "*x1"}, {"b-2": _ab_m},
                   tuple(six), notes=("row xx11: b-value printed without a panel code",)))
    rows = [("x1", "a-1", "x1x", "x"), ("1x", "a-2", "1xx", "x"), ("11", "a-2", "1x1", "1"),
            ("xx", None, None, "0")]
    t.append(Table(7, "ab", _a_D, {"a-1": "x1*", "a-2": "1x*"}, {"b-2": _m2},
                   tuple(_row(s, *_ab(c or "a-1", a, "b-2", b)) for s, c, a, b in rows)))
    rows = [("x11", "a-2", "x1", "x1"), ("1x1", "a-1", "1x", "1x"), ("11x", "a-1", "1x", "x1"),
            ("xxx", None, None, "0"), ("xx1", None, None, "xx"), ("x1x", None, None, "0"),
            ("1xx", None, None, "xx"), ("111", None, None, "11")]
    t.append(Table(8, "abd", _a_m_bd, {"a-1": "1x", "a-2": "x1"}, {"b-2": _m_ad_then_b},
                   tuple(_row(s, *_ab(c or "a-1", a, "b-2", b)) for s, c, a, b in rows)))
    return t


def _a_m_bd_c(a, b, d, c):
    return [a + r + c for r in mult(b, d)]


def _tables_9_to_16() -> list[Table]:
    t = []
    t.append(Table(9, "abd", _a_Db_c, {"a-3": "x**1", "a-4": "1**x"},
                   {"b-3": _m_ab_then_d, "b-4": _a_m_bd}, (
        _row("xx1", "+a-3:xxx1", "b-3:0", "-b-4:xx"),
        _row("x11", "+a-3:x1x1", "+a-3:xx11", "-b-3:x1", "-b-4:x1"),
        _row("1xx", "-a-4:1xxx", "+b-3:xx", "b-4:0"),
        _row("11x", "-a-4:11xx", "-a-4:1x1x", "+b-3:1x", "+b-4:1x"),
        _row("xxx", "b-3:0", "b-4:0"),
        _row("x1x", "+b-3:xx", "-b-4:xx"),
        _row("1x1", "-b-3:x1", "+b-4:1x"),
        _row("111", "b-3:11", "b-4:11"),
    ), balance="marks"))
    t.append(Table(10, "ad", _a_D, {"a-3": "x1*", "a-4": "1x*"}, {"b-4": _a_D}, (
        _row("x1", "+a-3:x1x", "-b-4:x1x"),
        _row("1x", "-a-4:1xx", "+b-4:1xx"),
        _row("11", "-a-4:1x1", "+b-4:1x1"),
        _row("xx", "b-4:xxx"),
    ), balance="marks", notes=("rule header names the panels (a-1)/(a-2); the rows use (a-3)/(a-4)",)))
    eleven = (
        _row("x1", "+a-3:x1x", "-b-3:x1x"),
        _row("1x", "-a-4:1xx", "+b-3:1xx"),
        _row("11", "-a-4:11x", "+b-3:11x"),
        _row("xx", "b-3:xxx"),
    )
    t.append(Table(11, "ad", _a_D, {"a-3": "x1*", "a-4": "1x*"}, {"b-3": _Da_around}, eleven, errata=(
        Erratum(2, eleven[2], _row("11", "-a-4:1x1", "+b-3:11x"),
                "(a-4) entry printed as 1⊗1⊗x, which does not have the (a-4) shape; 1⊗x⊗1 does"),
    ), balance="marks"))
    t.append(Table(12, "a", _D, {"a-3": "1x", "a-4": "x1"}, {"b-4": _D}, (
        _row("1", "+a-3:1x", "-a-4:x1", "-b-4:1x", "+b-4:x1"),
        _row("x", "b-4:xx"),
    ), balance="marks"))
    t.append(Table(13, "abc", _a_Db_c, {"a-3": "*1x*", "a-4": "*x1*"}, {}, (
        _row("x1x", "+a-3:x1xx", "-a-4:xx1x"),
        _row("x11", "+a-3:x1x1", "-a-4:xx11"),
        _row("11x", "+a-3:11xx", "-a-4:1x1x"),
        _row("111", "+a-3:11x1", "-a-4:1x11"),
        _row("xxx"), _row("xx1"), _row("1xx"), _row("1x1"),
    ), balance="a-codes"))
    t.append(Table(14, "ac", _D_then, {"a-3": "1x*", "a-4": "x1*"}, {}, (
        _row("1x", "+a-3:1xx", "-a-4:x1x"),
        _row("11", "+a-3:1x1", "-a-4:x11"),
        _row("xx"), _row("x1"),
    ), balance="a-codes"))
    fifteen = (
        _row("x1", "+a-3:x1x", "-a-4:xx1"),
        _row("x1", "+a-3:x1x", "-a-4:xx1"),
        _row("1x"),
        _row("11"),
    )
    t.append(Table(15, "ab", _a_D, {"a-3": "*1x", "a-4": "*x1"}, {}, fifteen, errata=(
        Erratum(1, fifteen[1], _row("11", "+a-3:11x", "-a-4:1x1"),
                "row x⊗1 is printed twice; the second copy stands where the 1⊗1 row belongs"),
        Erratum(3, fifteen[3], _row("xx"),
                "row 1⊗1 is printed with no panels, but a⊗Δ(b) gives both; the empty row is x⊗x"),
    ), balance="a-codes"))
    t.append(Table(16, "a", _D, {"a-3": "1x", "a-4": "x1"}, {}, (
        _row("1", "+a-3:1x", "-a-4:x1"),
        _row("x"),
    ), balance="a-codes"))
    return t


TABLES: dict[int, Table] = {tb.number: tb for tb in _tables_1_to_8() + _tables_9_to_16()}

# ---------------------------------------------------------------- replay

_A_MARK = {"a-1": 1, "a-2": 1, "a-3": 1, "a-4": -1}


@dataclass
class RowReport:
    table: int
    index: int
    s: str
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems


def replay_row(tb: Table, index: int, row: Row, rows: tuple[Row, ...] = ()) -> RowReport:
    rep = RowReport(tb.number, index, row.s)
    labels = tuple(row.s)
    if len(labels) != len(tb.variables):
        rep.problems.append(f"expected {len(tb.variables)} labels")
        return rep
    terms = tb.a_rule(*labels)
    for code, pattern in tb.patterns.items():
        want = Counter(t for t in terms if matches(pattern, t))
        got = Counter(e.labels for e in row.entries if e.code == code)
        if want != got:
            rep.problems.append(f"{code}: listed {sorted(got.elements())}, rule gives {sorted(want.elements())}")
    for e in row.of("a-"):
        if e.mark is not None and e.mark != _A_MARK[e.code]:
            rep.problems.append(f"{e.code} {e.labels}: mark {e.mark:+d}")
    for e in row.of("b-"):
        rule = tb.b_rules.get(e.code)
        if rule is None:
            rep.problems.append(f"{e.code} has no rule in this table")
            continue
        bterms = rule(*labels)
        if e.labels == "0":
            if bterms:
                rep.problems.append(f"{e.code}: listed 0, rule gives {bterms}")
        elif e.labels not in bterms:
            rep.problems.append(f"{e.code}: {e.labels} is not a term of {bterms}")
    if tb.balance == "marks":
        marks = [e.mark for e in row.entries if e.mark is not None]
        if sum(marks):
            rep.problems.append(f"⊕/⊖ unbalanced: {marks}")
    elif tb.balance == "a-codes":
        c = Counter(e.code for e in row.of("a-"))
        if c["a-3"] != c["a-4"]:
            rep.problems.append(f"(a-3)/(a-4) counts differ: {dict(c)}")
    if sum(r.s == row.s for r in rows) > 1:
        rep.problems.append("S appears in more than one row")
    return rep


def replay(tb: Table, printed: bool = False) -> list[RowReport]:
    rows = tb.printed if printed else tb.rows
    return [replay_row(tb, k, r, rows) for k, r in enumerate(rows)]


def replay_all(printed: bool = False) -> list[RowReport]:
    return [rep for tb in TABLES.values() for rep in replay(tb, printed)]


def covers_all_labels(tb: Table, printed: bool = False) -> bool:
    """Does every labelling of the table's circles appear exactly once?"""
    rows = tb.printed if printed else tb.rows
    n = len(tb.variables)
    want = {"".join(w) for w in _words(n)}
    got = [r.s for r in rows]
    return sorted(got) == sorted(want)


def _words(n: int):
    if n == 0:
        yield ""
        return
    for w in _words(n - 1):
        yield w + "1"
        yield w + "x"


# ---------------------------------------------------------------- panel swap


def classify_local(table: int, labels: str) -> str | None:
    """The a-panel code whose pattern a local label word matches, if any."""
    hits = [c for c, p in TABLES[table].patterns.items() if matches(p, labels)]
    return hits[0] if len(hits) == 1 else None


def f_pairs(table: int) -> dict[tuple[str, str, str], tuple[str, str]]:
    """(S, b-code, b-target) -> (a-code, a-target): the panel swap on one table.

    A row's b-panels are paired with its a-panels in listed order, which is
    how the printed tables put them side by side.  The result must be a
    function; a clash raises.
    """
    tb = TABLES[table]
    out: dict[tuple[str, str, str], tuple[str, str]] = {}
    for row in tb.rows:
        bs = [e for e in row.of("b-") if e.labels != "0"]
        for a, b in zip(row.of("a-"), bs):
            key = (row.s, b.code, b.labels)
            val = (a.code, a.labels)
            if out.get(key, val) != val:
                raise ValueError(f"table {table}: ambiguous panel swap for {key}")
            out[key] = val
    return out


def f_map(table: int, s: str, b_code: str, b_labels: str) -> tuple[str, str] | None:
    """Replace a Type 2_j panel by the a-panel of the same row; None if S has no such panel."""
    return f_pairs(table).get((s, b_code, b_labels))
