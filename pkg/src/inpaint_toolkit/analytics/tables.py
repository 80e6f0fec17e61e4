from collections.abc import Sequence


def render_table(title: str, header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    """Left-aligned plain-text table under a title line; trailing spaces are trimmed."""
    table = [list(header), *(list(row) for row in rows)]
    widths = [max(len(row[column]) for row in table) for column in range(len(header))]
    lines = [title]
    for row in table:
        lines.append("  ".join(cell.ljust(width) for cell, width in zip(row, widths, strict=True)).rstrip())
    return "\n".join(lines)
