"""Delimited table reading and writing.

Dialect: comma (or tab) separated, ``.`` decimal point, UTF-8, optional
header row, ``#``-prefixed comment lines carrying the resolved run
configuration.  Missing values are rejected, never imputed.  Files are
written atomically (temp file in the target directory, then rename).
"""

import csv
import io
import math
import os
import sys
import tempfile

import numpy as np

from .errors import DataFormatError, InvalidInputError

FORMATS = ("csv", "tsv", "pretty")


def format_float(v) -> str:
    """Stable text form for numbers; absent values render empty."""
    if v is None:
        return ""
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return f"{v:.12g}"
    return str(v)


def read_rows(path):
    """Raw parsed rows of a delimited file: list of (line_number, fields).

    Blank lines and ``#`` comments are skipped; the delimiter is sniffed
    as tab when the first data line contains one, comma otherwise.
    """
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            raw = fh.read()
    except OSError as exc:
        raise DataFormatError(f"{path}: cannot read file ({exc})") from exc
    lines = raw.splitlines()
    data_lines = [(i + 1, ln) for i, ln in enumerate(lines)
                  if ln.strip() and not ln.lstrip().startswith("#")]
    if not data_lines:
        raise DataFormatError(f"{path}: no data rows")
    delimiter = "\t" if "\t" in data_lines[0][1] else ","
    rows = []
    for lineno, line in data_lines:
        fields = next(csv.reader(io.StringIO(line), delimiter=delimiter))
        rows.append((lineno, fields))
    return rows


def resolve_columns(tokens, names, path):
    """Map selector tokens (name, 1-based index, or a-b range) to 0-based indices."""
    indices = []
    for token in tokens:
        token = token.strip()
        if not token:
            raise DataFormatError(f"{path}: empty column selector")
        if token in names:
            indices.append(names.index(token))
            continue
        try:
            if "-" in token and not token.lstrip("-").isdigit():
                lo_s, hi_s = token.split("-", 1)
                lo, hi = int(lo_s), int(hi_s)
                if not 1 <= lo <= hi <= len(names):
                    raise ValueError
                indices.extend(range(lo - 1, hi))
            else:
                i = int(token)
                if not 1 <= i <= len(names):
                    raise ValueError
                indices.append(i - 1)
        except ValueError:
            raise DataFormatError(
                f"{path}: unknown column {token!r}; use a header name or a "
                f"1-based index up to {len(names)}") from None
    return indices


def read_matrix(path, header: bool = False, columns=None):
    """Numeric matrix from a delimited file.

    Returns (matrix, column_names).  With header=False columns are named
    col1..colN.  `columns` is an optional list of selector tokens (header
    names, 1-based indices, or a-b ranges).  Malformed cells and missing
    values raise DataFormatError naming the offending row and column.
    """
    rows = read_rows(path)
    if header:
        names = [f.strip() for f in rows[0][1]]
        rows = rows[1:]
        if not rows:
            raise DataFormatError(f"{path}: header but no data rows")
    else:
        names = [f"col{i + 1}" for i in range(len(rows[0][1]))]
    width = len(names)
    matrix = np.empty((len(rows), width))
    for r, (lineno, fields) in enumerate(rows):
        if len(fields) != width:
            raise DataFormatError(
                f"{path}: row at line {lineno} has {len(fields)} fields, expected {width}")
        for c, cell in enumerate(fields):
            cell = cell.strip()
            if cell == "":
                raise DataFormatError(
                    f"{path}: missing value at line {lineno}, column {names[c]}")
            try:
                matrix[r, c] = float(cell)
            except ValueError:
                raise DataFormatError(
                    f"{path}: cannot parse {cell!r} as a number at line {lineno}, "
                    f"column {names[c]}") from None
    if columns is not None:
        idx = resolve_columns(columns, names, path)
        matrix = matrix[:, idx]
        names = [names[i] for i in idx]
    return matrix, names


def format_table(colnames, rows, fmt: str = "csv", comments=()) -> str:
    """Render a table with comment header lines in csv, tsv or pretty form."""
    if fmt not in FORMATS:
        raise InvalidInputError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    text_rows = [[format_float(v) for v in row] for row in rows]
    out = io.StringIO()
    for comment in comments:
        out.write(f"# {comment}\n")
    if fmt in ("csv", "tsv"):
        writer = csv.writer(out, delimiter="," if fmt == "csv" else "\t",
                            lineterminator="\n")
        writer.writerow(colnames)
        writer.writerows(text_rows)
        return out.getvalue()
    widths = [max(len(str(colnames[c])), *(len(r[c]) for r in text_rows))
              if text_rows else len(str(colnames[c])) for c in range(len(colnames))]
    cells = [str(c).ljust(w) for c, w in zip(colnames, widths)]
    out.write("  ".join(cells).rstrip() + "\n")
    for row in text_rows:
        display = [(v if v != "" else "--").ljust(w) for v, w in zip(row, widths)]
        out.write("  ".join(display).rstrip() + "\n")
    return out.getvalue()


def write_output(text: str, out_path=None) -> None:
    """Write to stdout, or atomically to a file (temp + rename)."""
    if out_path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out_path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".rdc-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, out_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
