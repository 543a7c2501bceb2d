"""Matrix text format: ``m <dim>`` then ``dim`` rows of integers."""

from .errors import InputError


def parse_matrix(text: str) -> list[list[int]]:
    dim = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if dim is None:
            if tokens[0] != "m" or len(tokens) != 2:
                raise InputError(f"line {lineno}: expected 'm <dim>' header")
            try:
                dim = int(tokens[1])
            except ValueError:
                raise InputError(f"line {lineno}: bad dimension {tokens[1]!r}") from None
            if dim < 0:
                raise InputError(f"line {lineno}: negative dimension")
            continue
        if len(rows) == dim:
            raise InputError(f"line {lineno}: more than {dim} rows")
        if len(tokens) != dim:
            raise InputError(f"line {lineno}: expected {dim} entries, got {len(tokens)}")
        try:
            rows.append([int(t) for t in tokens])
        except ValueError:
            raise InputError(f"line {lineno}: non-integer entry") from None
    if dim is None:
        raise InputError("missing 'm <dim>' header")
    if len(rows) != dim:
        raise InputError(f"expected {dim} rows, got {len(rows)}")
    return rows


def format_matrix(A) -> str:
    lines = [f"m {len(A)}"]
    lines += [" ".join(str(int(x)) for x in row) for row in A]
    return "\n".join(lines) + "\n"
