"""JSON files for realizations, charts and Schur data (schema version "1").

Complex numbers are ``[re, im]`` pairs and matrices are lists of rows. Files
are written with one top-level key per line and floats in shortest
round-trip form, so ``save(load(f))`` reproduces a saved file byte for byte.
"""

import json
import re

import numpy as np

from .errors import ParseError, SchurLossError
from .realization import Realization
from .schur import FIXED, FREE, Chart, SchurData

SCHEMA_VERSION = "1"

_KEY_ORDER = {
    "realization": ("schema_version", "kind", "p", "m", "n", "A", "B", "C", "D", "tags"),
    "chart": ("schema_version", "kind", "p", "base", "steps", "D0"),
    "schur_data": ("schema_version", "kind", "p", "base", "steps", "v", "D0"),
}


# -- encoding ----------------------------------------------------------------

def _cnum(x):
    x = complex(x)
    return [float(x.real), float(x.imag)]


def _cvec(v):
    return [_cnum(x) for x in np.asarray(v).reshape(-1)]


def _cmat(a):
    return [[_cnum(x) for x in row] for row in np.asarray(a)]


def _dumps(doc, kind):
    lines = []
    for key in _KEY_ORDER[kind]:
        if key in doc:
            lines.append(f"  {json.dumps(key)}: {json.dumps(doc[key], separators=(',', ':'), allow_nan=False)}")
    return "{\n" + ",\n".join(lines) + "\n}\n"


def dumps_realization(g, tags=None):
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "realization",
        "p": g.p,
        "m": g.m,
        "n": g.n,
        "A": _cmat(g.A),
        "B": _cmat(g.B),
        "C": _cmat(g.C),
        "D": _cmat(g.D),
    }
    if tags:
        doc["tags"] = {k: bool(v) for k, v in sorted(tags.items())}
    return _dumps(doc, "realization")


def _steps_doc(chart):
    return [{"w": _cnum(w), "u": _cvec(u)} for w, u in chart.steps]


def dumps_chart(chart, p):
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "chart",
        "p": p,
        "base": chart.base,
        "steps": _steps_doc(chart),
    }
    if chart.base == FIXED:
        doc["D0"] = _cmat(chart.D0)
    return _dumps(doc, "chart")


def dumps_schur_data(data):
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "schur_data",
        "p": data.p,
        "base": data.chart.base,
        "steps": _steps_doc(data.chart),
        "v": [_cvec(v) for v in data.v],
        "D0": _cmat(data.D0),
    }
    return _dumps(doc, "schur_data")


# -- decoding ----------------------------------------------------------------

class _Doc:
    """Parsed top-level object that remembers the source line of each key."""

    def __init__(self, text):
        def reject(token):
            raise ParseError(f"non-finite number {token} is not allowed")

        try:
            self.obj = json.loads(text, parse_constant=reject)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, line=exc.lineno) from exc
        if not isinstance(self.obj, dict):
            raise ParseError("top level must be a JSON object", line=1)
        self.lines = {}
        for i, line in enumerate(text.splitlines(), start=1):
            m = re.match(r'\s*"([^"]+)"\s*:', line)
            if m and m.group(1) in self.obj and m.group(1) not in self.lines:
                self.lines[m.group(1)] = i

    def error(self, key, message):
        return ParseError(message, field=key, line=self.lines.get(key.split("[")[0].split(".")[0]))

    def get(self, key, required=True):
        if key not in self.obj:
            if required:
                raise ParseError("missing required field", field=key)
            return None
        return self.obj[key]


def _is_number(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _parse_cnum(doc, key, x):
    if not (isinstance(x, list) and len(x) == 2 and all(_is_number(t) for t in x)):
        raise doc.error(key, "complex number must be a [re, im] pair of numbers")
    return complex(x[0], x[1])


def _parse_cvec(doc, key, x, size=None):
    if not isinstance(x, list):
        raise doc.error(key, "expected a list of [re, im] pairs")
    if size is not None and len(x) != size:
        raise doc.error(key, f"expected {size} entries, got {len(x)}")
    return np.array([_parse_cnum(doc, key, t) for t in x], dtype=np.complex128)


def _parse_cmat(doc, key, x, shape):
    rows, cols = shape
    if not isinstance(x, list) or len(x) != rows:
        got = len(x) if isinstance(x, list) else type(x).__name__
        raise doc.error(key, f"expected {rows} rows, got {got}")
    out = np.zeros(shape, dtype=np.complex128)
    for i, row in enumerate(x):
        out[i] = _parse_cvec(doc, f"{key}[{i}]", row, cols)
    return out


def _parse_count(doc, key):
    x = doc.get(key)
    if not (isinstance(x, int) and not isinstance(x, bool) and x >= 0):
        raise doc.error(key, "expected a non-negative integer")
    return x


def _check_header(doc, kind):
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise doc.error("schema_version", f"unsupported schema version {version!r}")
    got = doc.get("kind", required=False)
    if got is not None and got != kind:
        raise doc.error("kind", f"expected a {kind} file, got {got!r}")


def loads_realization(text):
    """Parse a realization file.

    Returns:
        (Realization, tags) where tags is a dict such as ``{"lossless_balanced": True}``.
    """
    doc = _Doc(text)
    _check_header(doc, "realization")
    p, m, n = (_parse_count(doc, k) for k in ("p", "m", "n"))
    mats = {
        key: _parse_cmat(doc, key, doc.get(key), shape)
        for key, shape in (("A", (n, n)), ("B", (n, m)), ("C", (p, n)), ("D", (p, m)))
    }
    tags = doc.get("tags", required=False) or {}
    if not isinstance(tags, dict) or not all(isinstance(v, bool) for v in tags.values()):
        raise doc.error("tags", "tags must be an object of booleans")
    return Realization(mats["A"], mats["B"], mats["C"], mats["D"]), dict(tags)


def _parse_steps(doc, p):
    steps = doc.get("steps")
    if not isinstance(steps, list):
        raise doc.error("steps", "expected a list of {w, u} objects")
    out = []
    for k, s in enumerate(steps):
        key = f"steps[{k}]"
        if not isinstance(s, dict) or "w" not in s or "u" not in s:
            raise doc.error(key, "each step needs fields 'w' and 'u'")
        out.append((_parse_cnum(doc, key + ".w", s["w"]), _parse_cvec(doc, key + ".u", s["u"], p)))
    return out


def _parse_base(doc):
    base = doc.get("base", required=False) or FREE
    if base not in (FREE, FIXED):
        raise doc.error("base", f"base must be 'free' or 'fixed', got {base!r}")
    return base


def _wrap(doc, key, fn):
    # library validation errors surface as parse errors tied to a field
    try:
        return fn()
    except ParseError:
        raise
    except SchurLossError as exc:
        raise doc.error(key, str(exc)) from exc


def loads_chart(text):
    doc = _Doc(text)
    _check_header(doc, "chart")
    p = _parse_count(doc, "p")
    steps = _parse_steps(doc, p)
    base = _parse_base(doc)
    d0 = _parse_cmat(doc, "D0", doc.get("D0"), (p, p)) if base == FIXED else None
    return _wrap(doc, "steps", lambda: Chart(tuple(steps), base, d0))


def loads_schur_data(text):
    doc = _Doc(text)
    _check_header(doc, "schur_data")
    p = _parse_count(doc, "p")
    steps = _parse_steps(doc, p)
    base = _parse_base(doc)
    vs = doc.get("v")
    if not isinstance(vs, list) or len(vs) != len(steps):
        raise doc.error("v", f"expected {len(steps)} Schur vectors")
    vs = [_parse_cvec(doc, f"v[{k}]", x, p) for k, x in enumerate(vs)]
    d0 = _parse_cmat(doc, "D0", doc.get("D0"), (p, p))
    chart = _wrap(doc, "steps", lambda: Chart(tuple(steps), base, d0 if base == FIXED else None))
    return _wrap(doc, "v", lambda: SchurData(chart, tuple(vs), d0))


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def _write(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def load_realization(path):
    return loads_realization(_read(path))


def save_realization(path, g, tags=None):
    _write(path, dumps_realization(g, tags))


def load_chart(path):
    return loads_chart(_read(path))


def save_chart(path, chart, p):
    _write(path, dumps_chart(chart, p))


def load_schur_data(path):
    return loads_schur_data(_read(path))


def save_schur_data(path, data):
    _write(path, dumps_schur_data(data))
