"""Executed query results.

A SolutionTable is either a bindings table (header + rows of optional terms)
or a boolean (ASK) result.  The ``ordered`` flag records whether row order
is semantically meaningful, which is the case exactly when the producing
query carried ORDER BY.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..rdf.terms import Term


@dataclass
class SolutionTable:
    kind: str  # "bindings" | "boolean"
    header: list[str] = field(default_factory=list)
    rows: list[tuple[Term | None, ...]] = field(default_factory=list)
    boolean: bool | None = None
    ordered: bool = False

    def __post_init__(self) -> None:
        if self.kind == "boolean":
            if self.header or self.rows:
                raise ValueError("boolean result cannot carry a header or rows")
            if self.boolean is None:
                raise ValueError("boolean result needs a truth value")
        else:
            for row in self.rows:
                if len(row) != len(self.header):
                    raise ValueError(f"row width {len(row)} does not match header width {len(self.header)}")

    @property
    def row_count(self) -> int:
        return len(self.rows)

    def value_rows(self) -> list[tuple[str, ...]]:
        """Rows as canonical strings in header order; variable names play no
        role, so two tables with different headers but identical value rows
        compare equal.  Absent cells map to the empty string."""
        return [tuple("" if cell is None else cell.n3() for cell in row) for row in self.rows]


def boolean_table(value: bool) -> SolutionTable:
    return SolutionTable(kind="boolean", boolean=value)
