"""TOML datum and module files.

A datum file::

    version = 1
    name = "sl2 finite, Gamma = Z/5"

    [lie]
    type = "A1"

    [datum]
    ell = 5
    iplus = [1]
    iminus = [1]
    N_generators = []

    [gamma]
    kind = "abelian"            # abelian | matrix | torus
    invariant_factors = [5]

    [sigma]
    images = [["1/5"]]          # abelian: one torus point per generator

    [delta]
    images = []

For ``kind = "matrix"`` the ``[gamma]`` table carries ``conductor`` and
``[sigma] images`` lists 2x2 matrices of cyclotomic strings in ``z``.
"""

from __future__ import annotations

import re
import sys
from fractions import Fraction

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib
import tomli_w

from .cartan import build_root_system, parse_type
from .cohom import FiniteGroup, GammaModule
from .cyclo import CycParseError, Sl2Elt, format_cyc, parse_cyc
from .datum import SubgroupDatum
from .errors import ValidationError
from .finab import FinAbGroup

FILE_VERSION = 1


class FileError(ValidationError):
    """A problem in an input file, with a position when one is known."""

    def __init__(self, message, path="<input>", line=None, column=None):
        self.path, self.line, self.column = path, line, column
        where = path
        if line is not None:
            where += f":{line}"
            if column is not None:
                where += f":{column}"
        super().__init__([f"{where}: {message}"])


def _locate(text, needle):
    i = text.find(needle)
    if i < 0:
        return None, None
    line = text.count("\n", 0, i) + 1
    col = i - (text.rfind("\n", 0, i) + 1) + 1
    return line, col


def _load(text, path):
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        line = getattr(e, "lineno", None)
        col = getattr(e, "colno", None)
        msg = getattr(e, "msg", str(e))
        if line is None:
            m = re.search(r"line (\d+), column (\d+)", str(e))
            if m:
                line, col = int(m.group(1)), int(m.group(2))
            msg = re.sub(r"\s*\(at line \d+, column \d+\)", "", str(e))
        raise FileError(f"parse error: {msg}", path, line, col) from None


class _Reader:
    def __init__(self, doc, text, path):
        self.doc, self.text, self.path = doc, text, path

    def fail(self, message, needle=None):
        line, col = _locate(self.text, needle) if needle else (None, None)
        raise FileError(message, self.path, line, col)

    def check_keys(self, table, allowed, where):
        for k in table:
            if k not in allowed:
                self.fail(f"unknown key {k!r} in {where}", k)

    def section(self, name, required=True):
        t = self.doc.get(name)
        if t is None:
            if required:
                self.fail(f"missing section [{name}]")
            return {}
        if not isinstance(t, dict):
            self.fail(f"{name} must be a table", name)
        return t

    def int_list(self, table, key, where, default=()):
        v = table.get(key, list(default))
        if not isinstance(v, list) or not all(isinstance(a, int) and not isinstance(a, bool) for a in v):
            self.fail(f"{where}.{key} must be a list of integers", key)
        return v

    def fraction(self, v, where):
        try:
            if isinstance(v, bool):
                raise ValueError
            return Fraction(v) if isinstance(v, (int, str)) else Fraction(str(v))
        except (ValueError, ZeroDivisionError):
            self.fail(f"{where}: {v!r} is not a rational number", str(v))

    def cyc(self, v, m, where):
        s = str(v)
        try:
            return parse_cyc(s, m)
        except CycParseError as e:
            line, col = _locate(self.text, f'"{s}"')
            if line is not None:
                col += 1 + (e.column or 1) - 1
            raise FileError(f"{where}: {e.issues[0] if e.issues else e}", self.path, line, col) from None


def _version(r: _Reader):
    if "version" not in r.doc:
        r.fail("missing required key 'version'")
    if r.doc["version"] != FILE_VERSION:
        r.fail(f"unsupported version {r.doc['version']!r} (expected {FILE_VERSION})", "version")


def parse_datum(text, path="<input>", closure_cap=None) -> SubgroupDatum:
    r = _Reader(_load(text, path), text, path)
    _version(r)
    r.check_keys(r.doc, {"version", "name", "lie", "datum", "gamma", "sigma", "delta"}, "top level")
    lie = r.section("lie")
    r.check_keys(lie, {"type"}, "[lie]")
    try:
        series, rank = parse_type(str(lie.get("type", "")))
        rs = build_root_system(series, rank)
    except ValidationError as e:
        r.fail(f"[lie] type: {e.issues[0] if hasattr(e, 'issues') else e}", "type")
    dat = r.section("datum")
    r.check_keys(dat, {"ell", "iplus", "iminus", "N_generators"}, "[datum]")
    ell = dat.get("ell")
    if not isinstance(ell, int) or isinstance(ell, bool):
        r.fail("[datum] ell must be an integer", "ell")
    iplus = r.int_list(dat, "iplus", "datum")
    iminus = r.int_list(dat, "iminus", "datum")
    Ngens = dat.get("N_generators", [])
    if not isinstance(Ngens, list) or not all(isinstance(g, list) for g in Ngens):
        r.fail("[datum] N_generators must be a list of integer vectors", "N_generators")
    gam = r.section("gamma")
    kind = gam.get("kind", "abelian")
    sig = r.section("sigma", required=kind != "torus")
    r.check_keys(sig, {"images"}, "[sigma]")
    dl = r.section("delta", required=False)
    r.check_keys(dl, {"images"}, "[delta]")
    delta = [[r.fraction(c, "[delta] images") for c in d] for d in dl.get("images", [])]
    common = dict(root_system=rs, ell=ell, iplus=iplus, iminus=iminus, N_generators=Ngens,
                  delta_images=delta, name=str(r.doc.get("name", "")))
    if closure_cap is not None:
        common["closure_cap"] = closure_cap
    if kind == "abelian":
        r.check_keys(gam, {"kind", "invariant_factors"}, "[gamma]")
        factors = r.int_list(gam, "invariant_factors", "gamma")
        pts = [[r.fraction(c, "[sigma] images") for c in p] for p in sig.get("images", [])]
        d = SubgroupDatum(gamma_kind="abelian", gamma_factors=tuple(factors), sigma_torus=pts, **common)
    elif kind == "matrix":
        r.check_keys(gam, {"kind", "conductor"}, "[gamma]")
        m = gam.get("conductor", 1)
        if not isinstance(m, int) or m < 1:
            r.fail("[gamma] conductor must be a positive integer", "conductor")
        mats = []
        for k, M in enumerate(sig.get("images", [])):
            if not (isinstance(M, list) and len(M) == 2 and all(isinstance(row, list) and len(row) == 2 for row in M)):
                r.fail(f"[sigma] image {k + 1} must be a 2x2 matrix")
            ent = [r.cyc(x, m, f"[sigma] image {k + 1}") for row in M for x in row]
            try:
                mats.append(Sl2Elt(*ent))
            except ValidationError as e:
                r.fail(f"[sigma] image {k + 1}: {e.issues[0]}")
        d = SubgroupDatum(gamma_kind="matrix", sigma_matrices=tuple(mats), **common)
    elif kind == "torus":
        r.check_keys(gam, {"kind"}, "[gamma]")
        d = SubgroupDatum(gamma_kind="torus", **common)
    else:
        r.fail(f"unknown gamma kind {kind!r}", "kind")
    problems = d.issues()
    if problems:
        raise ValidationError([f"{path}: {p}" for p in problems])
    return d


def read_datum(path, closure_cap=None) -> SubgroupDatum:
    with open(path, encoding="utf-8") as fh:
        return parse_datum(fh.read(), str(path), closure_cap)


def _frac_str(c):
    return str(Fraction(c))


def datum_to_dict(d: SubgroupDatum) -> dict:
    out = {"version": FILE_VERSION}
    if d.name:
        out["name"] = d.name
    out["lie"] = {"type": d.root_system.code}
    out["datum"] = {"ell": d.ell, "iplus": sorted(d.iplus), "iminus": sorted(d.iminus),
                    "N_generators": [list(g) for g in d.N_generators]}
    if d.gamma_kind == "abelian":
        out["gamma"] = {"kind": "abelian", "invariant_factors": list(d.gamma_factors)}
        out["sigma"] = {"images": [[_frac_str(c) for c in p] for p in d.sigma_torus]}
    elif d.gamma_kind == "matrix":
        m = 1
        for g in d.sigma_matrices:
            m = m * g.m // _gcd(m, g.m)
        out["gamma"] = {"kind": "matrix", "conductor": m}
        out["sigma"] = {"images": [[[format_cyc(x.to_conductor(m)) for x in row] for row in g.rows()]
                                   for g in d.sigma_matrices]}
    else:
        out["gamma"] = {"kind": "torus"}
    if d.delta_images:
        out["delta"] = {"images": [[_frac_str(c) for c in chi] for chi in d.delta_images]}
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def dump_datum(d: SubgroupDatum) -> str:
    return tomli_w.dumps(datum_to_dict(d))


# ---------------------------------------------------------------------------
# Module files


def _group_from_table(r: _Reader, g):
    kind = g.get("kind")
    if kind == "cyclic":
        r.check_keys(g, {"kind", "order"}, "[group]")
        return FiniteGroup.cyclic(int(g.get("order", 1)))
    if kind == "abelian":
        r.check_keys(g, {"kind", "invariant_factors"}, "[group]")
        return FiniteGroup.from_abelian(FinAbGroup(r.int_list(g, "invariant_factors", "group")))
    if kind == "dihedral":
        r.check_keys(g, {"kind", "n"}, "[group]")
        return FiniteGroup.dihedral(int(g["n"]))
    if kind == "quaternion":
        r.check_keys(g, {"kind"}, "[group]")
        return FiniteGroup.quaternion()
    if kind == "symmetric":
        r.check_keys(g, {"kind", "n"}, "[group]")
        return FiniteGroup.symmetric(int(g["n"]))
    if kind == "table":
        r.check_keys(g, {"kind", "table", "identity"}, "[group]")
        try:
            return FiniteGroup(g["table"], identity=int(g.get("identity", 0)))
        except (ValidationError, KeyError, TypeError, IndexError) as e:
            r.fail(f"[group] table: {e}", "table")
    r.fail(f"unknown group kind {kind!r}", "kind")


def parse_module(text, path="<input>"):
    """Returns ``("finite", GammaModule)`` or ``("torus", (gamma, rank, action, on_generators))``."""
    r = _Reader(_load(text, path), text, path)
    _version(r)
    r.check_keys(r.doc, {"version", "name", "group", "module", "torus"}, "top level")
    gamma = _group_from_table(r, r.section("group"))
    if "torus" in r.doc:
        t = r.section("torus")
        r.check_keys(t, {"rank", "action", "action_on"}, "[torus]")
        rank = t.get("rank")
        if not isinstance(rank, int) or rank < 0:
            r.fail("[torus] rank must be a non-negative integer", "rank")
        on_gens = t.get("action_on", "generators") == "generators"
        action = t.get("action")
        return "torus", (gamma, rank, action, on_gens)
    mod = r.section("module")
    r.check_keys(mod, {"invariant_factors", "action", "action_on"}, "[module]")
    try:
        M = FinAbGroup(r.int_list(mod, "invariant_factors", "module"))
        action_on = mod.get("action_on", "generators")
        if action_on not in ("generators", "elements"):
            r.fail("[module] action_on must be 'generators' or 'elements'", "action_on")
        return "finite", GammaModule(gamma, M, mod.get("action"), on_generators=action_on == "generators")
    except ValidationError as e:
        if isinstance(e, FileError):
            raise
        r.fail(f"[module]: {e.issues[0] if getattr(e, 'issues', None) else e}")


def read_module(path):
    with open(path, encoding="utf-8") as fh:
        return parse_module(fh.read(), str(path))
