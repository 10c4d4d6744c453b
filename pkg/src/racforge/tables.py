"""Published reference values and the table reproduction driver.

Every manifest entry carries its provenance as ``(table, cell)``.  Match
flags use rational equality for the classical tables and an absolute
tolerance of 5e-6 for the quantum one (five reported digits).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

from .bounds import closed_form_avg_rac_bound, conjectured_worst_qrac_bound, llm1_values
from .codes import optimal_LLm1_code, worst_success
from .design import Budget, search_avg_optimal, search_worst_achievable
from .serialize import format_number

QUANTUM_TOL = 5e-6
F = Fraction

# Table I: (L, k) -> (optimal average success, closed-form bound)
TABLE_I = {
    (2, 1): (F(3, 4), F(3, 4)),
    (3, 1): (F(3, 4), F(3, 4)),
    (3, 2): (F(5, 6), F(5, 6)),
    (4, 1): (F(11, 16), F(11, 16)),
    (4, 2): (F(13, 16), F(13, 16)),
    (4, 3): (F(7, 8), F(7, 8)),
    (5, 1): (F(11, 16), F(11, 16)),
    (5, 2): (F(31, 40), F(31, 40)),
    (5, 3): (F(17, 20), F(17, 20)),
    (5, 4): (F(9, 10), F(9, 10)),
    (6, 1): (F(21, 32), F(21, 32)),
    (6, 2): (F(3, 4), F(3, 4)),
    (6, 3): (F(5, 6), F(5, 6)),
    (6, 4): (F(7, 8), F(7, 8)),
    (6, 5): (F(11, 12), F(11, 12)),
    (7, 1): (F(21, 32), F(21, 32)),
    (7, 2): (F(163, 224), F(83, 112)),
    (7, 3): (F(89, 112), F(89, 112)),
    (7, 4): (F(7, 8), F(7, 8)),
    (7, 5): (F(25, 28), F(25, 28)),
    (7, 6): (F(13, 14), F(13, 14)),
    (8, 1): (F(163, 256), F(163, 256)),
    (8, 2): (F(367, 512), F(367, 512)),
    (8, 3): (F(199, 256), F(101, 128)),
    (8, 4): (F(53, 64), F(53, 64)),
    (8, 5): (F(57, 64), F(57, 64)),
    (8, 6): (F(29, 32), F(29, 32)),
    (8, 7): (F(15, 16), F(15, 16)),
}

# Table II: achievable worst-case success; (7, 5) only has an interval
TABLE_II = {
    (3, 2): F(2, 3),
    (4, 3): F(3, 4),
    (5, 3): F(2, 3),
    (5, 4): F(4, 5),
    (6, 3): F(2, 3),
    (6, 4): F(3, 4),
    (6, 5): F(5, 6),
    (7, 3): F(4, 7),
    (7, 4): F(3, 4),
    (7, 5): F(3, 4),
    (7, 6): F(6, 7),
}
TABLE_II_OPEN = {(7, 5): (0.75, 0.79766)}

# Table III: (L, k) -> (worst, average, conjectured bound, marks)
# marks: "*" for the (L, L-1) construction, "x" for tensor products,
# "liabotro" for the Pauli construction, "gradient" for numerically
# optimized entries (not reproduced here).
TABLE_III = {
    (2, 1): (0.85355, 0.85355, 0.85355, ("*", "*")),
    (3, 1): (0.78868, 0.78868, 0.78868, ("liabotro", "liabotro")),
    (3, 2): (0.90825, 0.90825, 0.90825, ("*", "*")),
    (4, 1): (None, 0.74148, 0.75000, (None, "gradient")),
    (4, 2): (0.85355, 0.85355, 0.85355, ("x", "x")),
    (4, 3): (0.93301, 0.93301, 0.93301, ("*", "*")),
    (5, 1): (None, 0.71358, 0.72361, (None, "gradient")),
    (5, 2): (0.81115, 0.81463, 0.81623, ("gradient", "x")),
    (5, 3): (0.88730, 0.88730, 0.88730, ("gradient", "gradient")),
    (5, 4): (0.94721, 0.94721, 0.94721, ("*", "*")),
    (6, 1): (None, 0.69405, 0.70412, (None, "gradient")),
    (6, 2): (0.78868, 0.78868, 0.78868, ("x", "x")),
    (6, 3): (0.85355, 0.85355, 0.85355, ("x", "x")),
    (6, 4): (0.90825, 0.90825, 0.90825, ("x", "x")),
    (6, 5): (0.95644, 0.95644, 0.95644, ("*", "*")),
    (7, 1): (None, 0.67864, 0.68898, (None, "gradient")),
    (7, 2): (0.73719, 0.76184, 0.76726, ("gradient", "gradient")),
    (7, 3): (0.82429, 0.82575, 0.82733, ("gradient", "x")),
    (7, 4): (0.85355, 0.87766, 0.87796, ("x", "gradient")),
    (7, 5): (0.92257, 0.92258, 0.92258, ("gradient", "gradient")),
    (7, 6): (0.96291, 0.96291, 0.96291, ("*", "*")),
}

FIELDS = ["table", "L", "k", "quantity", "computed", "paper", "match", "method", "provenance", "note"]


@dataclass
class Row:
    table: str
    L: int
    k: int
    quantity: str
    computed: object
    paper: object
    match: bool | None
    method: str
    provenance: str
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "table": self.table,
            "L": self.L,
            "k": self.k,
            "quantity": self.quantity,
            "computed": "" if self.computed is None else format_number(self.computed),
            "paper": "" if self.paper is None else format_number(self.paper),
            "match": "" if self.match is None else ("yes" if self.match else "no"),
            "method": self.method,
            "provenance": self.provenance,
            "note": self.note,
        }


def rows_to_csv(rows: list[Row]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=FIELDS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r.as_dict())
    return buf.getvalue()


def reproduce_table_1(max_L: int = 6, budget: Budget | None = None, seed: int = 0, jobs: int = 1) -> list[Row]:
    rows = []
    for (L, k), (opt, ub) in sorted(TABLE_I.items()):
        if L > max_L:
            continue
        cell = f"Table I ({L},{k})"
        res = search_avg_optimal(L, k, "bnb", budget, seed=seed, jobs=jobs)
        note = f"{res.optimality}, {res.nodes_explored} nodes"
        rows.append(Row("1", L, k, "avg_optimum", res.success_probability, opt,
                        res.success_probability == opt, "bnb", cell + " optimum", note))
        cf = closed_form_avg_rac_bound(L, k)
        rows.append(Row("1", L, k, "closed_form_bound", cf, ub, cf == ub, "closed-form", cell + " bound"))
    return rows


def reproduce_table_2(max_L: int = 7, budget: Budget | None = None, seed: int = 0, starts: int = 64) -> list[Row]:
    """k = L-1 rows use the parity construction, L <= 4 rows exhaustive
    search, the rest local search (match means at least the published value)."""
    rows = []
    for (L, k), paper in sorted(TABLE_II.items()):
        if L > max_L:
            continue
        cell = f"Table II ({L},{k})"
        if k == L - 1:
            value = worst_success(optimal_LLm1_code(L))
            rows.append(Row("2", L, k, "worst_achievable", value, paper, value == paper, "parity", cell))
            if L <= 4:
                res = search_worst_achievable(L, k, "exhaustive", budget)
                rows.append(Row("2", L, k, "worst_achievable", res.success_probability, paper,
                                res.success_probability == paper, "exhaustive", cell,
                                f"{res.optimality} (deterministic decoders)"))
            continue
        res = search_worst_achievable(L, k, "local", budget, seed=seed, starts=starts)
        value = res.success_probability
        if (L, k) in TABLE_II_OPEN:
            lo, hi = TABLE_II_OPEN[(L, k)]
            rows.append(Row("2", L, k, "worst_achievable", value, paper, None, "local", cell,
                            f"published interval [{lo}, {hi}] after timeout; seed {seed}"))
        else:
            rows.append(Row("2", L, k, "worst_achievable", value, paper, value >= paper, "local", cell,
                            f"seed {seed}, starts {starts}"))
    return rows


def fig2_series(max_L: int) -> list[Row]:
    from .quantum import MAX_QUBITS, llm1_qrac, qrac_success

    rows = []
    for L in range(2, max_L + 1):
        avg, worst, q = llm1_values(L)
        code = optimal_LLm1_code(L) if L <= 10 else None
        if code is not None:
            from .codes import avg_success

            avg_c, worst_c, method = avg_success(code), worst_success(code), "parity-code"
        else:
            avg_c, worst_c, method = avg, worst, "closed-form"
        rows.append(Row("fig2", L, L - 1, "classical_avg", avg_c, None, None, method, "(L,L-1) series"))
        rows.append(Row("fig2", L, L - 1, "classical_worst", worst_c, None, None, method, "(L,L-1) series"))
        if L - 1 <= MAX_QUBITS:
            qa, qw = qrac_success(llm1_qrac(L))
            rows.append(Row("fig2", L, L - 1, "quantum", min(qa, qw), None, None, "llm1-qrac", "(L,L-1) series"))
        else:
            rows.append(Row("fig2", L, L - 1, "quantum", q, None, None, "closed-form", "(L,L-1) series"))
    return rows


def block_library(max_L: int = 8):
    """(L, k, label, builder) of the known-optimal blocks."""
    from .codes import identity_code
    from .quantum import classical_as_quantum, liabotro_qrac, llm1_qrac

    lib = [
        (1, 1, "identity(1,1)", lambda: classical_as_quantum(identity_code(1))),
        (2, 1, "liabotro(2,1)", lambda: liabotro_qrac(2, 1)),
        (3, 1, "liabotro(3,1)", lambda: liabotro_qrac(3, 1)),
    ]
    for m in range(2, max_L):
        lib.append((m + 1, m, f"llm1({m + 1},{m})", lambda m=m: llm1_qrac(m + 1)))
    return lib


def _block_values(L: int, k: int) -> tuple[float, float]:
    if (L, k) == (1, 1):
        return 1.0, 1.0
    if k == 1 and L in (2, 3):
        v = 0.5 + 0.5 * math.sqrt(1 / L)
        return v, v
    v = 0.5 + 0.5 * math.sqrt((L - 1) / L)
    return v, v


def tensor_candidates(L: int, k: int):
    """Ordered multisets of library blocks with sum L and sum k."""
    lib = [(bl, bk, lab) for bl, bk, lab, _ in block_library(L)]

    def rec(start, L_left, k_left):
        if L_left == 0 and k_left == 0:
            yield []
            return
        for idx in range(start, len(lib)):
            bl, bk, _ = lib[idx]
            if bl <= L_left and bk <= k_left:
                for rest in rec(idx, L_left - bl, k_left - bk):
                    yield [idx] + rest

    for combo in rec(0, L, k):
        if len(combo) > 1:
            yield [lib[i] for i in combo]


def best_tensor(L: int, k: int, criterion: str):
    """Best predicted composition by criterion ("avg" or "worst"), or None."""
    best = None
    for combo in tensor_candidates(L, k):
        vals = [_block_values(bl, bk) for bl, bk, _ in combo]
        if criterion == "avg":
            score = sum(bl * v[0] for (bl, _, _), v in zip(combo, vals)) / L
        else:
            score = min(v[1] for v in vals)
        # larger blocks first, the conventional factor order
        combo = sorted(combo, key=lambda t: (-t[0], t[2]))
        if best is None or score > best[0] + 1e-12 or (score > best[0] - 1e-12 and len(combo) < len(best[1])):
            best = (score, combo)
    return best


def build_tensor(combo):
    from .quantum import tensor_compose

    builders = {lab: fn for _, _, lab, fn in block_library(8)}
    parts = []
    for bl, bk, lab in combo:
        parts.append((builders[lab](), bl))
    return tensor_compose(parts)


def reproduce_table_3(max_L: int = 7) -> list[Row]:
    from .bounds import liabotro_value
    from .quantum import liabotro_qrac, llm1_qrac, qrac_success

    rows = []
    for (L, k), (worst_p, avg_p, ub_p, marks) in sorted(TABLE_III.items()):
        if L > max_L:
            continue
        cell = f"Table III ({L},{k})"
        candidates = []  # (avg, worst, method)
        if k == L - 1:
            a, w = qrac_success(llm1_qrac(L))
            candidates.append((a, w, "llm1-qrac"))
        if liabotro_value(L, k).quantum_valid and k == 1:
            a, w = qrac_success(liabotro_qrac(L, k))
            candidates.append((a, w, "liabotro-qrac"))
        for criterion in ("avg", "worst"):
            bt = best_tensor(L, k, criterion)
            if bt is not None:
                code = build_tensor(bt[1])
                a, w = qrac_success(code)
                label = "tensor " + " x ".join(lab for _, _, lab in bt[1])
                candidates.append((a, w, label))
        for col, paper, mark, idx in (("worst", worst_p, marks[0], 1), ("avg", avg_p, marks[1], 0)):
            if paper is None:
                continue
            if not candidates or mark == "gradient":
                best = max(candidates, key=lambda c: c[idx]) if candidates else None
                rows.append(Row("3", L, k, col, None if best is None else best[idx], paper, None, "out-of-scope",
                                cell + " " + col,
                                "gradient-search entry" + ("" if best is None else f"; best covered family {best[2]}")))
                continue
            best = max(candidates, key=lambda c: c[idx])
            rows.append(Row("3", L, k, col, best[idx], paper, abs(best[idx] - paper) <= QUANTUM_TOL,
                            best[2], cell + " " + col, f"mark {mark}"))
        ub = conjectured_worst_qrac_bound(L, k)
        rows.append(Row("3", L, k, "conjectured_bound", ub, ub_p, abs(ub - ub_p) <= QUANTUM_TOL, "closed-form",
                        cell + " conjectural U.B."))
    rows.extend(fig2_series(max_L))
    return rows


def reproduce(table: int, max_L: int, budget: Budget | None = None, seed: int = 0, starts: int = 64,
              jobs: int = 1) -> list[Row]:
    if table == 1:
        return reproduce_table_1(max_L, budget, seed, jobs)
    if table == 2:
        return reproduce_table_2(max_L, budget, seed, starts)
    if table == 3:
        return reproduce_table_3(max_L)
    raise ValueError(f"table must be 1, 2 or 3, got {table}")


def covered_cells(rows: list[Row]) -> list[Row]:
    return [r for r in rows if r.match is not None]


__all__ = [
    "TABLE_I", "TABLE_II", "TABLE_II_OPEN", "TABLE_III", "Row", "rows_to_csv", "reproduce",
    "reproduce_table_1", "reproduce_table_2", "reproduce_table_3", "fig2_series", "best_tensor",
    "build_tensor", "tensor_candidates", "covered_cells",
]
