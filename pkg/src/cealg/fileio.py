"""Line-oriented text formats for algebras, certificates and matrices.

Algebra files (``cealg v1``)::

    cealg v1
    field F3
    n 3
    unital 0
    basis 2
    0 1 0
    0 0 0
    0 0 0

    0 0 1
    0 0 0
    0 0 0

Blank lines and ``#`` comments are ignored.  Scalars use the
``-?digits(/digits)?`` syntax, so rational entries stay exact.

Certificate files (``cecert v1``) carry ``field``, ``n``, ``dim``, ``id``,
then an ``E`` block of n rows, ``phi <dim>`` followed by dim matrices
(images of the canonical basis elements, in order) and ``ells <k>``
followed by k lines of dim scalars.
"""

from __future__ import annotations

import logging
from pathlib import Path

from .algebra import MatAlgebra, close_under_multiplication
from .ce import SoSCertificate
from .errors import FormatError, NotClosedError
from .field import FieldSpec
from .linalg import Mat, span_echelon

log = logging.getLogger(__name__)

ALGEBRA_HEADER = "cealg v1"
CERT_HEADER = "cecert v1"


def _lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


class _Reader:
    def __init__(self, text: str, header: str):
        self.lines = _lines(text)
        self.pos = 0
        if not self.lines or self.lines[0] != header:
            raise FormatError(f"missing header {header!r}")
        self.pos = 1

    def peek(self) -> str | None:
        return self.lines[self.pos] if self.pos < len(self.lines) else None

    def next(self) -> str:
        if self.pos >= len(self.lines):
            raise FormatError("unexpected end of file")
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def keyed(self, key: str) -> str:
        line = self.next()
        parts = line.split(None, 1)
        if parts[0] != key or len(parts) != 2:
            raise FormatError(f"expected '{key} <value>', got {line!r}")
        return parts[1]

    def matrix(self, n: int, field: FieldSpec) -> Mat:
        grid = []
        for _ in range(n):
            row = self.next().split()
            if len(row) != n:
                raise FormatError(f"expected {n} entries per row, got {len(row)}")
            grid.append(row)
        try:
            return Mat.parse(grid, field)
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(str(exc)) from exc


def _field(text: str) -> FieldSpec:
    try:
        return FieldSpec.from_label(text)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def _int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise FormatError(f"{what} must be an integer, got {text!r}") from exc


def _format_matrix(m: Mat) -> list[str]:
    return [" ".join(m.field.format(x) for x in row) for row in m.rows]


# ---------------------------------------------------------------------------
# algebras


def dumps_algebra(alg: MatAlgebra) -> str:
    out = [ALGEBRA_HEADER, f"field {alg.field.label}", f"n {alg.n}"]
    if alg.name:
        out.append(f"name {alg.name}")
    out.append(f"unital {int(alg.contains_identity)}")
    out.append(f"basis {alg.dim}")
    for b in alg.basis:
        out.extend(_format_matrix(b))
        out.append("")
    return "\n".join(out) + "\n"


def loads_algebra(text: str, auto_close: bool = False) -> MatAlgebra:
    """Parse an algebra file; the span must be closed unless ``auto_close``."""
    r = _Reader(text, ALGEBRA_HEADER)
    field = _field(r.keyed("field"))
    n = _int(r.keyed("n"), "n")
    if n < 1:
        raise FormatError("n must be positive")
    name = None
    while r.peek() is not None and not r.peek().startswith("basis"):
        key, _, value = r.next().partition(" ")
        if key == "name":
            name = value.strip()
        elif key not in ("unital",):
            raise FormatError(f"unknown key {key!r}")
    count = _int(r.keyed("basis"), "basis count")
    mats = [r.matrix(n, field) for _ in range(count)]
    if r.peek() not in (None, "end"):
        raise FormatError(f"trailing content: {r.peek()!r}")
    space = span_echelon(mats, n=n, field=field)
    try:
        return MatAlgebra(space, name=name)
    except NotClosedError:
        if not auto_close:
            raise
        log.warning("basis is not closed under multiplication; closing it")
        return close_under_multiplication(mats, n=n, field=field, name=name)


def save_algebra(alg: MatAlgebra, path) -> None:
    Path(path).write_text(dumps_algebra(alg))


def load_algebra(path, auto_close: bool = False) -> MatAlgebra:
    return loads_algebra(Path(path).read_text(), auto_close=auto_close)


# ---------------------------------------------------------------------------
# certificates


def dumps_certificate(cert: SoSCertificate) -> str:
    field, n, d = cert.E.field, cert.E.n, len(cert.phi)
    out = [CERT_HEADER, f"field {field.label}", f"n {n}", f"dim {d}", f"id {cert.cert_id}", "E"]
    out.extend(_format_matrix(cert.E))
    out.append(f"phi {d}")
    for m in cert.phi:
        out.extend(_format_matrix(m))
        out.append("")
    out.append(f"ells {len(cert.ells)}")
    for ell in cert.ells:
        out.append(" ".join(field.format(field.coerce(x)) for x in ell))
    return "\n".join(out) + "\n"


def loads_certificate(text: str) -> SoSCertificate:
    r = _Reader(text, CERT_HEADER)
    field = _field(r.keyed("field"))
    n = _int(r.keyed("n"), "n")
    d = _int(r.keyed("dim"), "dim")
    cert_id = r.keyed("id")
    if r.next() != "E":
        raise FormatError("expected 'E' block")
    e = r.matrix(n, field)
    if _int(r.keyed("phi"), "phi count") != d:
        raise FormatError("phi count must equal dim")
    phi = tuple(r.matrix(n, field) for _ in range(d))
    k = _int(r.keyed("ells"), "ells count")
    ells = []
    for _ in range(k):
        toks = r.next().split()
        if len(toks) != d:
            raise FormatError(f"each linear form needs {d} coefficients")
        try:
            ells.append(tuple(field.parse(t) for t in toks))
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(str(exc)) from exc
    return SoSCertificate(phi, e, tuple(ells), cert_id=cert_id)


def save_certificate(cert: SoSCertificate, path) -> None:
    Path(path).write_text(dumps_certificate(cert))


def load_certificate(path) -> SoSCertificate:
    return loads_certificate(Path(path).read_text())


def parse_matrix_text(text: str, field: FieldSpec) -> Mat:
    """``"0 1 0; 0 0 1; 0 0 0"`` -> Mat."""
    grid = [row.split() for row in text.split(";") if row.strip()]
    try:
        return Mat.parse(grid, field)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(str(exc)) from exc
