"""Plain-text instance format.

::

    # comment
    ising <n>
    <i> <j> <value>        # sets J[i][j] and J[j][i]; 1-based
    h <i> <value>          # optional external field

    mrf <k> <n>
    <i1> ... <ik> <value>
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from denselogz.errors import ParseError
from denselogz.model import IsingInstance, MrfInstance


def _int(tok, lineno, what):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected integer {what}, got {tok!r}", lineno) from None


def _float(tok, lineno):
    try:
        v = float(tok)
    except ValueError:
        raise ParseError(f"expected a real value, got {tok!r}", lineno) from None
    if not np.isfinite(v):
        raise ParseError(f"non-finite value {tok!r}", lineno)
    return v


def _index(tok, n, lineno):
    i = _int(tok, lineno, "vertex index")
    if not 1 <= i <= n:
        raise ParseError(f"vertex index {i} outside [1, {n}]", lineno)
    return i - 1


def parse_instance(text: str, name: str = ""):
    """Parse the text format into an :class:`IsingInstance` or :class:`MrfInstance`."""
    header = None
    J = h = None
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if header is None:
            kind = toks[0].lower()
            if kind == "ising" and len(toks) == 2:
                n = _int(toks[1], lineno, "n")
                if n < 1:
                    raise ParseError("n must be >= 1", lineno)
                header = ("ising", n)
                J = np.zeros((n, n))
                h = np.zeros(n)
            elif kind == "mrf" and len(toks) == 3:
                k = _int(toks[1], lineno, "k")
                n = _int(toks[2], lineno, "n")
                if k < 3 or n < 1:
                    raise ParseError("mrf header needs k >= 3 and n >= 1", lineno)
                header = ("mrf", k, n)
            else:
                raise ParseError("expected header 'ising <n>' or 'mrf <k> <n>'", lineno)
            continue
        if header[0] == "ising":
            n = header[1]
            if toks[0].lower() == "h":
                if len(toks) != 3:
                    raise ParseError("field line must be 'h <i> <value>'", lineno)
                h[_index(toks[1], n, lineno)] = _float(toks[2], lineno)
                continue
            if len(toks) != 3:
                raise ParseError("entry line must be '<i> <j> <value>'", lineno)
            i, j = _index(toks[0], n, lineno), _index(toks[1], n, lineno)
            v = _float(toks[2], lineno)
            J[i, j] = v
            J[j, i] = v
        else:
            _, k, n = header
            if len(toks) != k + 1:
                raise ParseError(f"entry line must have {k} indices and a value", lineno)
            idx = tuple(_index(t, n, lineno) for t in toks[:k])
            entries[idx] = _float(toks[k], lineno)
    if header is None:
        raise ParseError("empty instance file (no header)")
    if header[0] == "ising":
        return IsingInstance(J, h, name=name)
    return MrfInstance(header[2], header[1], entries, name=name)


def load_instance(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_instance(text, name=path.name)


def format_instance(instance) -> str:
    """Serialize losslessly (``repr`` of each float)."""
    out = []
    if instance.name:
        out.append(f"# {instance.name}")
    if isinstance(instance, IsingInstance):
        n = instance.n
        out.append(f"ising {n}")
        iu, ju = np.triu_indices(n)
        for i, j in zip(iu, ju):
            v = instance.J[i, j]
            if v != 0.0:
                out.append(f"{i + 1} {j + 1} {float(v)!r}")
        for i in np.flatnonzero(instance.h):
            out.append(f"h {i + 1} {float(instance.h[i])!r}")
    elif isinstance(instance, MrfInstance):
        out.append(f"mrf {instance.k} {instance.n}")
        for idx in sorted(instance.entries):
            out.append(" ".join(str(i + 1) for i in idx) + f" {instance.entries[idx]!r}")
    else:
        raise TypeError(f"cannot format {type(instance).__name__}")
    return "\n".join(out) + "\n"


def save_instance(instance, path) -> None:
    Path(path).write_text(format_instance(instance))
