"""On-disk cache of narrow class groups, one text file per discriminant.

File layout::

    qncg v1 d=<d_K>
    a=<a>
    unit_norm_minus_one=<0|1>
    forms <h>
    <A> <B> <C>          (h lines)
    table
    <k_0> ... <k_{h-1}>  (h lines, row i = products forms[i] * forms[j])

The cache is advisory: unreadable or mismatching files are ignored.
"""
from __future__ import annotations

import os
import tempfile
from pathlib import Path

ENV_VAR = "CHATELET_CACHE_DIR"


def default_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    root = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(root) / "chatelet"


def cache_path(d: int, cache_dir=None) -> Path:
    base = Path(cache_dir) if cache_dir else default_dir()
    return base / f"qncg_{d}.txt"


def dumps(G) -> str:
    lines = [f"qncg v1 d={G.field.d}", f"a={G.field.a}",
             f"unit_norm_minus_one={int(G.unit_norm_minus_one)}", f"forms {G.h_plus}"]
    lines += [f"{f.A} {f.B} {f.C}" for f in G.forms]
    lines.append("table")
    lines += [" ".join(str(k) for k in row) for row in G.table]
    return "\n".join(lines) + "\n"


def loads(text: str, K):
    from .quadfield import Form, NarrowClassGroup
    lines = text.splitlines()
    if not lines or lines[0] != f"qncg v1 d={K.d}":
        raise ValueError("bad header")
    if lines[1] != f"a={K.a}":
        raise ValueError("field mismatch")
    minus = lines[2].split("=")[1] == "1"
    h = int(lines[3].split()[1])
    forms = [Form(*map(int, ln.split())) for ln in lines[4:4 + h]]
    if lines[4 + h] != "table":
        raise ValueError("missing table")
    table = [list(map(int, ln.split())) for ln in lines[5 + h:5 + 2 * h]]
    if len(table) != h or any(len(r) != h for r in table):
        raise ValueError("truncated table")
    return NarrowClassGroup(K, forms, table, minus)


def load(K, cache_dir=None):
    path = cache_path(K.d, cache_dir)
    try:
        return loads(path.read_text(), K)
    except (OSError, ValueError, IndexError):
        return None


def store(G, cache_dir=None) -> None:
    path = cache_path(G.field.d, cache_dir)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".qncg")
        with os.fdopen(fd, "w") as fh:
            fh.write(dumps(G))
        os.replace(tmp, path)
    except OSError:
        pass
