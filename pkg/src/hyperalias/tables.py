"""Alias tables of a_{0,0,0} on S^3: printed reference entries, computed tables and diffs.

Rows are indexed by s_0 = 1..4 and columns by the A/B membership of
(s_0, s_1): 'A_0,A_1', 'B_0,A_1', 'B_0,B_1'.
"""
from dataclasses import dataclass

from .aliasing import brute_force_aliases, enumerate_aliases, location_columns
from .design import uniform_design
from .harmonics import HarmonicIndex

__all__ = [
    "COLUMNS",
    "PrintedBlock",
    "PRINTED_BLOCKS",
    "computed_block",
    "oracle_block",
    "diff_block",
    "compare_printed",
    "format_table",
    "parse_table",
]

COLUMNS = ("A_0,A_1", "B_0,A_1", "B_0,B_1")
SOURCE = HarmonicIndex(0, (0, 0))


def _idx(ell, m1, m2):
    return HarmonicIndex(ell, (m1, m2))


def _row(*entries):
    return tuple(_idx(*e) for e in entries)


@dataclass(frozen=True)
class PrintedBlock:
    """One block of a printed alias table.

    ``header`` is the (Q, M) pair printed above the block, ``caption`` the
    pair implied by the table caption. ``rows`` maps s_0 to a dict from
    column label to the listed targets, in printed order (duplicates kept).
    """

    table: int
    block: int
    header: tuple
    caption: tuple
    rows: dict


_A, _BA, _BB = COLUMNS

PRINTED_BLOCKS = (
    PrintedBlock(
        1, 1, (2, 1), (2, 1),
        {
            1: {_A: _row((2, 2, -2), (2, 2, 2))},
            2: {
                _BA: _row((4, 2, -2), (4, 2, 2)),
                _BB: _row((4, 4, -4), (4, 4, -2), (4, 2, 0), (4, 4, 2), (4, 4, 4)),
            },
            3: {
                _BA: _row((6, 2, -2), (6, 2, 2)),
                _BB: _row(
                    (6, 4, -4), (6, 4, -2), (6, 2, 0), (6, 4, 2), (6, 4, 4),
                    (6, 6, -6), (6, 6, -4), (6, 6, -2), (6, 6, 0), (6, 6, 2), (6, 6, 4), (6, 6, 6),
                ),
            },
            4: {
                _BA: _row((8, 2, -2), (8, 2, 2)),
                _BB: _row(
                    (8, 4, -4), (8, 4, -2), (8, 4, 0), (8, 4, 2), (8, 4, 4),
                    (8, 6, -6), (8, 6, -4), (8, 6, -2), (8, 6, 0), (8, 6, 2), (8, 6, 4), (8, 6, 6),
                    (8, 8, -8), (8, 8, -6), (8, 8, -4), (8, 8, -2), (8, 8, 0), (8, 8, 2),
                    (8, 8, 4), (8, 8, 6), (8, 8, 8),
                ),
            },
        },
    ),
    PrintedBlock(
        1, 2, (4, 2), (4, 2),
        {
            1: {},
            2: {_BA: _row((4, 4, -4), (4, 4, 4))},
            3: {_BA: _row((6, 4, -4), (6, 4, 4)), _BB: _row((6, 6, -4), (6, 6, 4))},
            4: {
                _BA: _row((8, 4, -4), (8, 4, 4)),
                _BB: _row((8, 8, -8), (8, 4, -4), (8, 8, 0), (8, 8, 4), (8, 8, 8)),
            },
        },
    ),
    PrintedBlock(
        2, 1, (2, 2), (2, 2),
        {
            1: {},
            2: {_BB: _row((4, 4, -4), (4, 4, -2), (4, 2, 0))},
            3: {_BB: _row((6, 4, -4), (6, 4, 0), (6, 4, 4), (6, 6, -4), (6, 6, 0), (6, 6, 4))},
            4: {
                _BB: _row(
                    (8, 4, -4), (8, 4, 0), (8, 4, 4), (8, 6, -4), (8, 6, 0), (8, 6, 4),
                    (8, 8, -8), (8, 8, -4), (8, 8, 0), (8, 8, 4), (8, 8, 8),
                )
            },
        },
    ),
    PrintedBlock(
        2, 2, (4, 2), (4, 4),
        {
            1: {},
            2: {},
            3: {},
            4: {_BB: _row((8, 8, -8), (8, 4, 0), (8, 8, 8))},
        },
    ),
)


def _group(targets_by_s0, Q):
    out = {}
    for s0, targets in targets_by_s0.items():
        row = {}
        for tgt in sorted(targets):
            s = ((tgt.orders[0] - SOURCE.orders[0]) // 2,)
            label = _label(s0, s, Q)
            row.setdefault(label, []).append(tgt)
        out[s0] = {k: tuple(v) for k, v in row.items()}
    return out


def _label(s0, s, Q):
    chain = SOURCE.chain
    offsets = (s0,) + tuple(s)
    return ",".join(
        ("B" if x >= Q[j] - chain[j] else "A") + f"_{j}" for j, x in enumerate(offsets)
    )


def computed_block(Q, M, s0_values=range(1, 5), rule="exact"):
    """Enumerated aliases of a_{0,0,0} grouped by s_0 and column."""
    design = uniform_design(3, [Q, Q], M)
    records = enumerate_aliases(SOURCE, design, max(s0_values), rule, s0_min=min(s0_values))
    rows = {s0: {} for s0 in s0_values}
    for rec in records:
        label = location_columns(rec, design.Q)
        rows[rec.s0].setdefault(label, []).append(rec.target)
    return {s0: {k: tuple(v) for k, v in row.items()} for s0, row in rows.items()}


def oracle_block(Q, M, s0_values=range(1, 5)):
    """Brute-force aliases of a_{0,0,0} grouped the same way."""
    design = uniform_design(3, [Q, Q], M)
    found = brute_force_aliases(SOURCE, design, 2 * max(s0_values))
    by_s0 = {s0: [] for s0 in s0_values}
    for tgt in found:
        s0 = tgt.ell // 2
        if s0 in by_s0:
            by_s0[s0].append(tgt)
    return _group(by_s0, (Q, Q))


def diff_block(printed_rows, reference_rows):
    """Row-by-row differences between two grouped tables.

    Returns {s0: {"missing": [...], "extra": [...], "misplaced": [...],
    "duplicates": [...]}} for rows with any difference; ``missing`` holds
    entries of the reference absent from the printed row.
    """
    out = {}
    for s0 in sorted(set(printed_rows) | set(reference_rows)):
        p = printed_rows.get(s0, {})
        r = reference_rows.get(s0, {})
        p_all = [t for col in p.values() for t in col]
        r_col = {t: c for c, ts in r.items() for t in ts}
        p_col = {}
        for c, ts in p.items():
            for t in ts:
                p_col.setdefault(t, c)
        dups = sorted({t for t in p_all if p_all.count(t) > 1})
        missing = sorted(set(r_col) - set(p_col))
        extra = sorted(set(p_col) - set(r_col))
        misplaced = sorted(
            (t, p_col[t], r_col[t]) for t in set(p_col) & set(r_col) if p_col[t] != r_col[t]
        )
        if missing or extra or misplaced or dups:
            out[s0] = {"missing": missing, "extra": extra, "misplaced": misplaced, "duplicates": dups}
    return out


def _count(diff):
    return sum(len(v["missing"]) + len(v["extra"]) for v in diff.values())


def compare_printed(blocks=PRINTED_BLOCKS):
    """Diff every printed block against the enumeration and the brute-force oracle.

    For each block the oracle is run at the header and the caption
    parameters; ``best_match`` names the pair with fewer set differences.
    """
    report = []
    for b in blocks:
        entry = {"table": b.table, "block": b.block, "header": b.header, "caption": b.caption}
        candidates = {"header": b.header}
        if b.caption != b.header:
            candidates["caption"] = b.caption
        scores = {}
        for name, (Q, M) in candidates.items():
            oracle = oracle_block(Q, M)
            enum = computed_block(Q, M)
            entry[f"vs_oracle_{name}"] = diff_block(b.rows, oracle)
            entry[f"enumeration_vs_oracle_{name}"] = diff_block(enum, oracle)
            scores[name] = _count(entry[f"vs_oracle_{name}"])
        entry["set_differences"] = scores
        entry["best_match"] = min(scores, key=lambda k: (scores[k], k != "header"))
        entry["consistent_parameters"] = b.header == b.caption
        report.append(entry)
    return report


def format_table(rows, Q, M, columns=COLUMNS):
    """Pipe-separated text table, one line per s_0."""
    extra = sorted({c for row in rows.values() for c in row} - set(columns))
    cols = list(columns) + extra
    lines = [f"Q={Q}, M={M}", " | ".join(["s0"] + cols)]
    for s0 in sorted(rows):
        cells = [", ".join(str(t) for t in rows[s0].get(c, ())) for c in cols]
        lines.append(" | ".join([str(s0)] + cells))
    return "\n".join(lines) + "\n"


def parse_table(text):
    """Inverse of ``format_table`` for the row data."""
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    header = [c.strip() for c in lines[1].split("|")]
    cols = header[1:]
    rows = {}
    for ln in lines[2:]:
        cells = [c.strip() for c in ln.split("|")]
        s0 = int(cells[0])
        row = {}
        for c, cell in zip(cols, cells[1:]):
            if cell:
                row[c] = tuple(_parse_index(tok) for tok in cell.split(", "))
        rows[s0] = row
    return rows


def _parse_index(token):
    inner = token.strip()
    if not (inner.startswith("a_{") and inner.endswith("}")):
        raise ValueError(f"not a coefficient label: {token!r}")
    parts = [int(v) for v in inner[3:-1].split(",")]
    return HarmonicIndex(parts[0], tuple(parts[1:]))
