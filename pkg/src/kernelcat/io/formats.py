"""Exchange formats: categories, truncated simplicial categories and lax
algebra data, all as JSON text with a fixed key order."""
from __future__ import annotations

import json
import re

import numpy as np

from ..core.category import CategoryError, FinCategory

CATEGORY_KEYS = ("objects", "morphisms", "identities", "composition", "zero")
SIMPLICIAL_KEYS = ("levels", "faces", "degeneracies", "alpha")
LAX_KEYS = ("category", "K_obj", "K_mor", "phi")
_WS = re.compile(r"\s")


class ParseError(ValueError):
    """Malformed input; ``field`` locates the offending entry."""

    def __init__(self, field, message, line=None):
        loc = field if line is None else f"line {line}: {field}"
        super().__init__(f"{loc}: {message}")
        self.field = field
        self.line = line


def _load(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError("syntax", e.msg, line=e.lineno) from None


def _expect(cond, field, message):
    if not cond:
        raise ParseError(field, message)


def _check_keys(data, allowed, required, field):
    _expect(isinstance(data, dict), field, "expected an object")
    for k in data:
        _expect(k in allowed, f"{field}.{k}" if field else k, "unknown key")
    for k in required:
        _expect(k in data, f"{field}.{k}" if field else k, "missing")


def _check_id(x, field):
    _expect(isinstance(x, str) and x != "" and not _WS.search(x), field, f"invalid id {x!r}")
    return x


# -- categories -------------------------------------------------------------

def category_from_data(data, name="", field="") -> FinCategory:
    pre = f"{field}." if field else ""
    _check_keys(data, CATEGORY_KEYS, CATEGORY_KEYS[:4], field)
    objs = data["objects"]
    _expect(isinstance(objs, list), pre + "objects", "expected an array")
    for i, o in enumerate(objs):
        _check_id(o, f"{pre}objects[{i}]")
    _expect(len(set(objs)) == len(objs), pre + "objects", "duplicate id")
    mors = data["morphisms"]
    _expect(isinstance(mors, list), pre + "morphisms", "expected an array")
    triples = []
    for i, m in enumerate(mors):
        f = f"{pre}morphisms[{i}]"
        _check_keys(m, ("id", "dom", "cod"), ("id", "dom", "cod"), f)
        triples.append((_check_id(m["id"], f + ".id"), m["dom"], m["cod"]))
        _expect(m["dom"] in objs, f + ".dom", f"unknown object {m['dom']!r}")
        _expect(m["cod"] in objs, f + ".cod", f"unknown object {m['cod']!r}")
    ids = [t[0] for t in triples]
    _expect(len(set(ids)) == len(ids), pre + "morphisms", "duplicate id")
    idents = data["identities"]
    _expect(isinstance(idents, dict), pre + "identities", "expected a map")
    for o in objs:
        _expect(o in idents, f"{pre}identities.{o}", "missing")
    for o, m in idents.items():
        _expect(o in objs, f"{pre}identities.{o}", "unknown object")
        _expect(m in ids, f"{pre}identities.{o}", f"unknown morphism {m!r}")
    comp = data["composition"]
    _expect(isinstance(comp, list), pre + "composition", "expected an array")
    dom = {t[0]: t[1] for t in triples}
    cod = {t[0]: t[2] for t in triples}
    seen = {}
    for i, e in enumerate(comp):
        f = f"{pre}composition[{i}]"
        _check_keys(e, ("g", "f", "gf"), ("g", "f", "gf"), f)
        for k in ("g", "f", "gf"):
            _expect(e[k] in dom, f"{f}.{k}", f"unknown morphism {e[k]!r}")
        key = (e["g"], e["f"])
        _expect(dom[e["g"]] == cod[e["f"]], f, f"(g, f) = ({e['g']}, {e['f']}) is not composable")
        _expect(key not in seen, f, f"(g, f) = ({e['g']}, {e['f']}) given twice")
        seen[key] = e["gf"]
    by_dom = {}
    for m in ids:
        by_dom.setdefault(dom[m], []).append(m)
    for fm in ids:
        for gm in by_dom.get(cod[fm], ()):
            _expect((gm, fm) in seen, pre + "composition", f"missing entry for (g, f) = ({gm}, {fm})")
    if "zero" in data:
        _expect(data["zero"] in objs, pre + "zero", f"unknown object {data['zero']!r}")
    try:
        c = FinCategory.from_names(objs, triples, idents, [(g, f, gf) for (g, f), gf in seen.items()], name=name)
    except CategoryError as e:
        raise ParseError(field or "category", str(e)) from None
    c.zero = data.get("zero")
    return c


def parse_category(text, name="") -> FinCategory:
    """A category from its JSON description. The optional ``zero`` is kept
    on the result as ``.zero``. Law violations are not errors here; run
    ``validate_category`` for those."""
    return category_from_data(_load(text), name=name)


def category_to_data(c: FinCategory, zero=None) -> dict:
    out = {
        "objects": list(c.objects),
        "morphisms": [{"id": c.morphisms[m], "dom": c.objects[int(c.dom[m])], "cod": c.objects[int(c.cod[m])]}
                      for m in range(c.n_mor)],
        "identities": {c.objects[a]: c.morphisms[int(c.identity[a])] for a in range(c.n_obj)},
        "composition": [{"g": c.morphisms[g], "f": c.morphisms[f], "gf": c.morphisms[int(gf)]}
                        for (g, f), gf in sorted(c.composition.items(), key=lambda kv: (kv[0][1], kv[0][0]))],
    }
    zero = zero if zero is not None else getattr(c, "zero", None)
    if zero is not None:
        out["zero"] = zero if isinstance(zero, str) else c.objects[int(zero)]
    return out


def _dump(data) -> str:
    """Small flat values on one line, everything else one entry per line;
    stable across runs."""
    return _pretty(data, 0) + "\n"


def _pretty(v, depth, width=100):
    flat = json.dumps(v, ensure_ascii=False)
    if not isinstance(v, (dict, list)):
        return flat
    scalar = all(not isinstance(x, (dict, list)) for x in (v.values() if isinstance(v, dict) else v))
    if scalar and len(flat) + 2 * depth <= width:
        return flat
    pad, inner = " " * depth, " " * (depth + 1)
    if isinstance(v, dict):
        body = [f"{inner}{json.dumps(k, ensure_ascii=False)}: {_pretty(x, depth + 1, width)}" for k, x in v.items()]
        return "{\n" + ",\n".join(body) + "\n" + pad + "}"
    body = [inner + _pretty(x, depth + 1, width) for x in v]
    return "[\n" + ",\n".join(body) + "\n" + pad + "]"


def emit_category(c: FinCategory, zero=None) -> str:
    return _dump(category_to_data(c, zero))


# -- truncated simplicial categories ----------------------------------------

def _functor_tables(entry, S: FinCategory, T: FinCategory, field):
    _check_keys(entry, ("level", "index", "obj_map", "mor_map"), ("level", "index", "obj_map", "mor_map"), field)
    om, mm = entry["obj_map"], entry["mor_map"]
    _expect(isinstance(om, dict), field + ".obj_map", "expected a map")
    _expect(isinstance(mm, dict), field + ".mor_map", "expected a map")
    o = np.full(S.n_obj, -1, dtype=np.int64)
    m = np.full(S.n_mor, -1, dtype=np.int64)
    for k, v in om.items():
        _expect(k in S.obj_index, f"{field}.obj_map.{k}", "unknown source object")
        _expect(v in T.obj_index, f"{field}.obj_map.{k}", f"unknown target object {v!r}")
        o[S.obj(k)] = T.obj(v)
    for k, v in mm.items():
        _expect(k in S.mor_index, f"{field}.mor_map.{k}", "unknown source morphism")
        _expect(v in T.mor_index, f"{field}.mor_map.{k}", f"unknown target morphism {v!r}")
        m[S.mor(k)] = T.mor(v)
    if np.any(o < 0):
        raise ParseError(f"{field}.obj_map", f"missing {S.objects[int(np.argmax(o < 0))]}")
    if np.any(m < 0):
        raise ParseError(f"{field}.mor_map", f"missing {S.morphisms[int(np.argmax(m < 0))]}")
    return o, m


def parse_simplicial(text, name=""):
    """A :class:`TruncatedSimplicialCat` with explicit levels."""
    from ..core.functor import Functor
    from ..simplicial.levels import Op, TableLevel, Transformation, TruncatedSimplicialCat
    data = _load(text)
    _check_keys(data, SIMPLICIAL_KEYS, SIMPLICIAL_KEYS[:3], "")
    _expect(isinstance(data["levels"], list) and data["levels"], "levels", "expected a non-empty array")
    cats = [category_from_data(d, name=f"X{n}", field=f"levels[{n}]") for n, d in enumerate(data["levels"])]
    levels = [TableLevel(c, name=c.name) for c in cats]
    N = len(cats) - 1
    ops = {}
    for kind, shift in (("faces", -1), ("degeneracies", 1)):
        _expect(isinstance(data[kind], list), kind, "expected an array")
        out = {}
        for i, e in enumerate(data[kind]):
            f = f"{kind}[{i}]"
            _expect(isinstance(e, dict) and isinstance(e.get("level"), int) and isinstance(e.get("index"), int),
                    f, "needs integer level and index")
            n, j = e["level"], e["index"]
            _expect(0 <= n <= N and 0 <= n + shift <= N, f + ".level", f"level {n} out of range")
            _expect(0 <= j <= n + max(shift, 0), f + ".index", f"index {j} out of range")
            _expect((n, j) not in out, f, f"({n}, {j}) given twice")
            o, m = _functor_tables(e, cats[n], cats[n + shift], f)
            F = Functor(cats[n], cats[n + shift], o, m, name=f"{kind[0]}{j}", check=False)
            out[(n, j)] = Op.from_functor(F, levels[n], levels[n + shift])
        ops[kind] = out
    alpha = {}
    for i, e in enumerate(data.get("alpha", [])):
        f = f"alpha[{i}]"
        _check_keys(e, ("level", "components"), ("level", "components"), f)
        n = e["level"]
        _expect(isinstance(n, int) and 2 <= n <= N, f + ".level", f"level {n} out of range")
        S, T = cats[n], cats[n - 2]
        comps = np.full(S.n_obj, -1, dtype=np.int64)
        for k, v in e["components"].items():
            _expect(k in S.obj_index, f"{f}.components.{k}", "unknown object")
            _expect(v in T.mor_index, f"{f}.components.{k}", f"unknown morphism {v!r}")
            comps[S.obj(k)] = T.mor(v)
        if np.any(comps < 0):
            raise ParseError(f + ".components", f"missing {S.objects[int(np.argmax(comps < 0))]}")
        alpha[n] = Transformation(levels[n], levels[n - 2], lambda X, c=comps: c[X[:, 0]][:, None], f"alpha{n}")
    return TruncatedSimplicialCat(levels, ops["faces"], ops["degeneracies"], alpha=alpha, relaxed=True,
                                  name=name or "parsed")


def emit_simplicial(x) -> str:
    """Levels must be explicit (see ``simplicial.levels.tabulate``)."""
    from ..simplicial.levels import TableLevel
    for L in x.levels:
        if not isinstance(L, TableLevel):
            raise TypeError("emit_simplicial needs explicit levels; tabulate first")
    cats = [L.C for L in x.levels]

    def functor(key, op, shift):
        n, j = key
        S, T = cats[n], cats[n + shift]
        o = op.obj(np.arange(S.n_obj)[:, None])[:, 0]
        m = op.mor(np.arange(S.n_mor)[:, None])[:, 0]
        return {"level": n, "index": j, "obj_map": {S.objects[a]: T.objects[int(o[a])] for a in range(S.n_obj)},
                "mor_map": {S.morphisms[a]: T.morphisms[int(m[a])] for a in range(S.n_mor)}}

    data = {"levels": [category_to_data(c) for c in cats],
            "faces": [functor(k, op, -1) for k, op in sorted(x.faces.items())],
            "degeneracies": [functor(k, op, 1) for k, op in sorted(x.degeneracies.items())]}
    if x.alpha:
        data["alpha"] = []
        for n, a in sorted(x.alpha.items()):
            S, T = cats[n], cats[n - 2]
            comp = a.at(np.arange(S.n_obj)[:, None])[:, 0]
            data["alpha"].append({"level": n, "components": {S.objects[i]: T.morphisms[int(comp[i])]
                                                             for i in range(S.n_obj)}})
    return _dump(data)


# -- lax algebra data ---------------------------------------------------------

def _square_key(C, A, s):
    return [C.morphisms[int(A.f[s])], C.morphisms[int(A.g[s])], C.morphisms[int(A.h0[s])],
            C.morphisms[int(A.h1[s])]]


def emit_lax(d) -> str:
    """``K`` and ``phi`` of a lax algebra; squares are written as
    ``[f, g, h0, h1]`` with ``g h0 = h1 f``."""
    C, A = d.category, d.arrow
    data = {
        "category": category_to_data(C, zero=d.pointed.zero),
        "K_obj": {C.morphisms[f]: C.objects[int(d.K_obj[f])] for f in range(C.n_mor)},
        "K_mor": [{"square": _square_key(C, A, s), "value": C.morphisms[int(d.K_mor[s])]}
                  for s in range(A.n_squares)],
        "phi": [{"square": _square_key(C, A, s), "value": C.morphisms[int(d.phi[s])]} for s in range(A.n_squares)],
    }
    return _dump(data)


def parse_lax(text):
    """``(LaxAlgebraData, FinCategory)`` from :func:`emit_lax` output. The
    category must carry ``zero``."""
    from ..arrow.lax import LaxAlgebraData
    from ..arrow.pointed import make_pointed
    data = _load(text)
    _check_keys(data, LAX_KEYS, LAX_KEYS, "")
    C = category_from_data(data["category"], field="category")
    _expect(C.zero is not None, "category.zero", "missing")
    p = make_pointed(C, C.zero)
    A = p.arrow
    K_obj = np.full(C.n_mor, -1, dtype=np.int64)
    for k, v in data["K_obj"].items():
        _expect(k in C.mor_index, f"K_obj.{k}", "unknown morphism")
        _expect(v in C.obj_index, f"K_obj.{k}", f"unknown object {v!r}")
        K_obj[C.mor(k)] = C.obj(v)
    if np.any(K_obj < 0):
        raise ParseError("K_obj", f"missing {C.morphisms[int(np.argmax(K_obj < 0))]}")
    tables = {}
    for key in ("K_mor", "phi"):
        out = np.full(A.n_squares, -1, dtype=np.int64)
        for i, e in enumerate(data[key]):
            f = f"{key}[{i}]"
            _check_keys(e, ("square", "value"), ("square", "value"), f)
            sq = e["square"]
            _expect(isinstance(sq, list) and len(sq) == 4 and all(s in C.mor_index for s in sq), f + ".square",
                    "expected four morphism ids")
            s = int(A.square_id(*[C.mor(x) for x in sq]))
            _expect(s >= 0, f + ".square", "not a commuting square")
            _expect(e["value"] in C.mor_index, f + ".value", f"unknown morphism {e['value']!r}")
            _expect(out[s] < 0, f + ".square", "given twice")
            out[s] = C.mor(e["value"])
        if np.any(out < 0):
            s = int(np.argmax(out < 0))
            raise ParseError(key, f"missing square {_square_key(C, A, s)}")
        tables[key] = out
    return LaxAlgebraData(p, K_obj, tables["K_mor"], tables["phi"]), C


__all__ = ["ParseError", "parse_category", "emit_category", "category_from_data", "category_to_data",
           "parse_simplicial", "emit_simplicial", "parse_lax", "emit_lax"]
