"""System files and the ``quandle`` command-line driver.

A system file is a sequence of sections::

    [indices]
    s12 s23 s13
    [order]
    s12 < s13
    [perp]
    a | b
    [factor]
    s12 cyclic 2          # 0 means infinite cyclic
    x table s3.table      # path relative to the system file
    [action]
    s13.0: s12 -> s23 (exp*1)
    t.0: x -> x (perm: e c b ...)

``[order]`` lists generating pairs; the transitive closure is taken.
Action entries not listed are the identity.  ``#`` starts a comment.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys as _sys
from dataclasses import dataclass
from pathlib import Path

from . import cayley, constructions, rewrite
from .groups import (Cyclic, GeneratorAction, QuandleError, QuandleSystem, ScaleIso, SystemViolation,
                     TableGroup, TableIso, dotted_subgroup, has_trivial_holonomy,
                     holonomy_group, validate_system)
from .oposet import Oposet, oposet_violations

SCHEMA = 1
SECTIONS = ("indices", "order", "perp", "factor", "action")


class ParseError(ValueError):
    def __init__(self, line: int, col: int, message: str):
        self.line, self.col, self.message = line, col, message
        super().__init__(f"line {line}, col {col}: {message}")


class UnknownIndex(ParseError):
    pass


class DuplicateSection(ParseError):
    pass


# --- parsing --------------------------------------------------------------------------

@dataclass
class _Line:
    number: int
    text: str
    col: int


def _sections(text: str) -> dict[str, list[_Line]]:
    found: dict[str, list[_Line]] = {}
    current = None
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        col = len(body) - len(body.lstrip()) + 1
        body = body.strip()
        header = re.fullmatch(r"\[(\S+)\]", body)
        if header:
            current = header.group(1)
            if current not in SECTIONS:
                raise ParseError(number, col, f"unknown section [{current}]")
            if current in found:
                raise DuplicateSection(number, col, f"section [{current}] appears twice")
            found[current] = []
        elif current is None:
            raise ParseError(number, col, "text before the first section")
        else:
            found[current].append(_Line(number, body, col))
    if "indices" not in found:
        raise ParseError(1, 1, "missing [indices] section")
    return found


def _lookup(pos, name, line: _Line, text_col=None):
    if name not in pos:
        col = line.col + (line.text.find(name) if text_col is None else text_col)
        raise UnknownIndex(line.number, col, f"unknown index {name!r}")
    return pos[name]


def _pairs(lines, pos, sep):
    out = []
    for line in lines:
        parts = [p.strip() for p in line.text.split(sep)]
        if len(parts) != 2 or not all(parts):
            raise ParseError(line.number, line.col, f"expected 'a {sep} b'")
        out.append((_lookup(pos, parts[0], line), _lookup(pos, parts[1], line,
                                                          line.text.rfind(parts[1])), line))
    return out


def read_table(text: str) -> TableGroup:
    """``labels:`` line, optional ``generators:`` line, then one row of labels per element."""
    labels, gens, rows = None, None, []
    for raw in text.splitlines():
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if body.startswith("labels:"):
            labels = body[len("labels:"):].split()
        elif body.startswith("generators:"):
            gens = body[len("generators:"):].split()
        else:
            rows.append(body.split())
    if labels is None:
        raise ValueError("table file needs a 'labels:' line")
    ids = {x: k for k, x in enumerate(labels)}
    table = [[ids[x] for x in row] for row in rows]
    return TableGroup(table, [ids[g] for g in gens] if gens else None, labels)


def write_table(group: TableGroup) -> str:
    lines = ["labels: " + " ".join(group.labels),
             "generators: " + " ".join(group.labels[g] for g in group.generators)]
    lines += [" ".join(group.labels[x] for x in row) for row in group.table]
    return "\n".join(lines) + "\n"


_ACTION = re.compile(r"^(\S+)\.(\d+):\s*(\S+)\s*->\s*(\S+)\s*\((.*)\)$")


def parse_system_file(text: str, base: Path | None = None, tables: dict | None = None,
                      validate: bool = True) -> QuandleSystem:
    """Parse a system file; table factors are read from ``tables`` or from files under ``base``."""
    found = _sections(text)
    names = []
    for line in found["indices"]:
        names.extend(line.text.split())
    if len(set(names)) != len(names):
        dup = next(x for x in names if names.count(x) > 1)
        line = next(l for l in found["indices"] if dup in l.text.split())
        raise ParseError(line.number, line.col + line.text.find(dup), f"index {dup!r} listed twice")
    pos = {name: k for k, name in enumerate(names)}
    n = len(names)

    less = [[False] * n for _ in range(n)]
    perp = [[False] * n for _ in range(n)]
    origin = {}
    for i, j, line in _pairs(found.get("order", []), pos, "<"):
        if i == j:
            raise ParseError(line.number, line.col, f"order axiom fails: {names[i]} < {names[i]} is reflexive")
        less[i][j] = True
        origin.setdefault(("less", i), line)
        origin.setdefault(("less", j), line)
    for k in range(n):
        for i in range(n):
            if less[i][k]:
                for j in range(n):
                    if less[k][j]:
                        less[i][j] = True
    for i, j, line in _pairs(found.get("perp", []), pos, "|"):
        perp[i][j] = perp[j][i] = True
        origin.setdefault(("perp", i), line)
        origin.setdefault(("perp", j), line)
    broken = oposet_violations(less, perp)
    if broken:
        v = broken[0]
        kind = "less" if v.kind in ("NotIrreflexive", "NonTransitive") else "perp"
        line = origin.get((kind, v.witness[0])) or found["indices"][0]
        witness = ", ".join(names[k] for k in v.witness)
        raise ParseError(line.number, line.col, f"oposet axiom {v.kind} fails at ({witness})")
    oposet = Oposet(tuple(names), tuple(map(tuple, less)), tuple(map(tuple, perp)))

    factors: list = [None] * n
    for line in found.get("factor", []):
        parts = line.text.split()
        if len(parts) != 3 or parts[1] not in ("cyclic", "table"):
            raise ParseError(line.number, line.col, "expected 'name cyclic N' or 'name table FILE'")
        i = _lookup(pos, parts[0], line)
        if factors[i] is not None:
            raise ParseError(line.number, line.col, f"factor of {parts[0]} given twice")
        if parts[1] == "cyclic":
            try:
                order = int(parts[2])
            except ValueError:
                raise ParseError(line.number, line.col + line.text.rfind(parts[2]),
                                 "cyclic order must be an integer") from None
            if order < 0:
                raise ParseError(line.number, line.col, "cyclic order must be >= 0")
            factors[i] = Cyclic(order or None)
        else:
            try:
                if tables is not None and parts[2] in tables:
                    source = tables[parts[2]]
                else:
                    source = ((base or Path(".")) / parts[2]).read_text()
                factors[i] = read_table(source)
            except (OSError, ValueError, KeyError) as exc:
                raise ParseError(line.number, line.col + line.text.rfind(parts[2]),
                                 f"table {parts[2]}: {exc}") from None
    missing = [names[k] for k in range(n) if factors[k] is None]
    if missing:
        raise ParseError(found["indices"][0].number, 1, f"no [factor] line for {', '.join(missing)}")

    actions: dict = {}
    for line in found.get("action", []):
        m = _ACTION.match(line.text)
        if not m:
            raise ParseError(line.number, line.col, "expected 'i.gen: j -> k (iso)'")
        i = _lookup(pos, m.group(1), line)
        gen = int(m.group(2))
        j = _lookup(pos, m.group(3), line)
        k = _lookup(pos, m.group(4), line, line.text.find("->") + 2)
        iso = _parse_iso(m.group(5).strip(), factors[j], factors[k], line)
        moves = actions.setdefault((i, gen), GeneratorAction({})).moves
        if j in moves:
            raise ParseError(line.number, line.col, f"{m.group(1)}.{gen} moves {m.group(3)} twice")
        moves[j] = (k, iso)

    system = QuandleSystem(oposet, factors, actions, name="file")
    return validate_system(system) if validate else system


def _parse_iso(text, source, target, line):
    if text.startswith("exp*"):
        if source.kind != "cyclic" or target.kind != "cyclic":
            raise ParseError(line.number, line.col, "exp* isomorphisms need cyclic factors")
        try:
            return ScaleIso(int(text[4:]), source.order or 0)
        except ValueError:
            raise ParseError(line.number, line.col, f"bad multiplier in {text!r}") from None
    if text.startswith("perm:"):
        if source.kind != "table" or target.kind != "table":
            raise ParseError(line.number, line.col, "perm: isomorphisms need table factors")
        images = text[len("perm:"):].split()
        try:
            return TableIso(tuple(target.labels.index(x) for x in images))
        except ValueError:
            raise ParseError(line.number, line.col, f"unknown element in {text!r}") from None
    raise ParseError(line.number, line.col, f"unknown isomorphism {text!r}")


def _format_iso(iso, target):
    if isinstance(iso, ScaleIso):
        return str(iso)
    return "perm: " + " ".join(target.labels[x] for x in iso.images)


def serialize_system(system: QuandleSystem, stem: str = "system") -> tuple[str, dict[str, str]]:
    """Text of the system file and the table files it refers to."""
    names = system.names
    out = ["[indices]", " ".join(names), "[order]"]
    out += [f"{names[i]} < {names[j]}" for i, j in system.oposet.less_pairs()]
    out.append("[perp]")
    out += [f"{names[i]} | {names[j]}" for i, j in system.oposet.perp_pairs()]
    out.append("[factor]")
    tables = {}
    for i, f in enumerate(system.factors):
        if f.kind == "cyclic":
            out.append(f"{names[i]} cyclic {f.order or 0}")
        else:
            fname = f"{stem}.{names[i]}.table"
            tables[fname] = write_table(f)
            out.append(f"{names[i]} table {fname}")
    out.append("[action]")
    for (i, gen) in sorted(system.actions):
        for j, (k, iso) in sorted(system.actions[(i, gen)].moves.items()):
            if j == k and iso.is_identity:
                continue
            out.append(f"{names[i]}.{gen}: {names[j]} -> {names[k]} "
                       f"({_format_iso(iso, system.factors[k])})")
    return "\n".join(out) + "\n", tables


def same_system(a: QuandleSystem, b: QuandleSystem) -> bool:
    """Equal names, relations, factors and generator twists."""
    if a.names != b.names or a.less != b.less or a.perp != b.perp or a.factors != b.factors:
        return False
    return all(a.generator_twist(i, g) == b.generator_twist(i, g)
               for i in range(a.n) for g in range(len(a.factors[i].generators)))


def load_system(path: str) -> QuandleSystem:
    p = Path(path)
    system = parse_system_file(p.read_text(encoding="utf-8"), base=p.parent)
    system.name = p.stem
    return system


# --- constructions by name ------------------------------------------------------------

CONSTRUCTIONS = {
    "cactus": "cactus N",
    "oriented-cactus": "oriented-cactus N",
    "cube-cactus": "cube-cactus N D",
    "graph-cactus": "graph-cactus a,b,c a-b,b-c",
    "graph-product": "graph-product a,b,c a-b,b-c 2,2,0   (0 = infinite cyclic)",
    "semidirect": "semidirect N M K   (Z_N by Z_M, generator multiplies by K)",
    "normal-chain": "normal-chain s3   (S_3 with the chain A_3 <= S_3)",
    "permutation": "permutation 1,2,3 1,2,0[;...]   (point names, then images by position)",
    "trickle": "trickle FILE   (the format printed by convert-trickle)",
}


def _split(text, sep=","):
    return [x for x in text.split(sep) if x]


def construct(kind: str, args: list[str]) -> QuandleSystem:
    """A system from a construction name and its command-line arguments."""
    try:
        if kind == "cactus":
            return constructions.build_cactus(int(args[0]))
        if kind == "oriented-cactus":
            return constructions.build_oriented_cactus(int(args[0]))
        if kind in ("cube-cactus", "higher-cactus"):
            return constructions.build_higher_cactus(int(args[0]), int(args[1]))
        if kind == "graph-cactus":
            vertices = _split(args[0])
            return constructions.build_graph_cactus(vertices, [tuple(e.split("-")) for e in _split(args[1])])
        if kind == "graph-product":
            vertices = _split(args[0])
            edges = [tuple(e.split("-")) for e in _split(args[1])] if len(args) > 1 else []
            orders = [int(x) for x in _split(args[2])] if len(args) > 2 else [0] * len(vertices)
            return constructions.build_graph_product(vertices, edges, orders)
        if kind == "semidirect":
            n, m, k = (int(x) for x in args[:3])
            return constructions.build_semidirect(Cyclic(n or None), Cyclic(m or None), k)
        if kind == "normal-chain" and args == ["s3"]:
            return constructions.s3_normal_chain()
        if kind == "permutation":
            points = _split(args[0])
            perms = [tuple(int(x) for x in _split(p)) for p in _split(args[1], ";")] if len(args) > 1 else []
            return constructions.build_permutation_system(points, perms)
        if kind == "trickle":
            return constructions.trickle_to_quandle(parse_trickle(Path(args[0]).read_text(encoding="utf-8")))
    except IndexError:
        raise UsageError(f"usage: construct {CONSTRUCTIONS.get(kind, kind)}") from None
    builtins = constructions.builtin_systems()
    if kind in builtins and not args:
        return builtins[kind]
    raise UsageError(f"unknown construction {kind!r}; known: {', '.join(CONSTRUCTIONS)} "
                     f"or a built-in name ({', '.join(builtins)})")


def parse_trickle(text: str):
    """Read the sectioned trickle format: vertices, edges, order, labels, maps."""
    lines = {}
    current = None
    for raw in text.splitlines():
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if body.startswith("[") and body.endswith("]"):
            current = body[1:-1]
            lines[current] = []
        elif current is None:
            raise ValueError("text before the first section")
        else:
            lines[current].append(body)
    vertices = [v for line in lines.get("vertices", []) for v in line.split()]
    edges = [tuple(x.strip() for x in line.split("-")) for line in lines.get("edges", [])]
    less = [tuple(x.strip() for x in line.split("<")) for line in lines.get("order", [])]
    mu = {}
    for line in lines.get("labels", []):
        v, label = line.split()
        mu[v] = None if label in ("inf", "0") else int(label)
    phi = {}
    for line in lines.get("maps", []):
        x, rest = line.split(":", 1)
        y, z = (t.strip() for t in rest.split("->"))
        phi.setdefault(x.strip(), {})[y] = z
    return constructions.TrickleGraph(tuple(vertices), frozenset(frozenset(e) for e in edges),
                                      frozenset(less), mu, phi)


def format_trickle(tg) -> str:
    mu = lambda v: "inf" if tg.mu.get(v) is None else str(tg.mu[v])
    out = ["[vertices]", " ".join(map(str, tg.vertices)), "[edges]"]
    out += sorted(" - ".join(sorted(map(str, e))) for e in tg.edges)
    out.append("[order]")
    out += sorted(f"{a} < {b}" for a, b in tg.less)
    out.append("[labels]")
    out += [f"{v} {mu(v)}" for v in tg.vertices]
    out.append("[maps]")
    for x in tg.vertices:
        for y, z in sorted(tg.phi.get(x, {}).items()):
            out.append(f"{x}: {y} -> {z}")
    return "\n".join(out) + "\n"


# --- the driver -----------------------------------------------------------------------

class UsageError(ValueError):
    pass


def _parser() -> argparse.ArgumentParser:
    # accepted before or after the subcommand; SUPPRESS keeps a leading flag from being reset
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable report")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random ranking order")
    ball = argparse.ArgumentParser(add_help=False)
    ball.add_argument("--radius", type=int, default=3)
    ball.add_argument("--cap", type=int, default=None, help="exponent cap for infinite factors")

    p = argparse.ArgumentParser(prog="quandle", description="Quandle products: normal forms and Cayley balls.")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--seed", type=int, default=None, help="random ranking order")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check a system file").add_argument("file")
    for name, extra in (("reduce", ["word"]), ("equal", ["word1", "word2"])):
        q = sub.add_parser(name, parents=[common])
        q.add_argument("file")
        for arg in extra:
            q.add_argument(arg)
    q = sub.add_parser("member", parents=[common], help="membership in a parabolic subgroup")
    q.add_argument("file")
    q.add_argument("word")
    q.add_argument("--subset", required=True, help="comma-separated index names")
    q = sub.add_parser("diaph", parents=[common], help="(i, j)-diaphanous type of a word")
    q.add_argument("file")
    q.add_argument("word")
    q.add_argument("--index", required=True)
    sub.add_parser("holonomy", parents=[common]).add_argument("file")
    for name in ("ball", "verify-qm", "hyperplanes"):
        sub.add_parser(name, parents=[common, ball]).add_argument("file")
    for name in ("decompose", "torsion"):
        q = sub.add_parser(name, parents=[common])
        q.add_argument("file")
        q.add_argument("--radius", type=int, default=4)
        q.add_argument("--cap", type=int, default=None)
    q = sub.add_parser("construct", parents=[common], help="write a built-in system file")
    q.add_argument("kind")
    q.add_argument("args", nargs="*")
    q.add_argument("-o", "--output", default=None)
    sub.add_parser("convert-trickle", parents=[common]).add_argument("file")
    return p


def _cap_for(system, cap):
    if cap is None and not all(f.finite for f in system.factors):
        return 2
    return cap


def _emit(args, payload: dict, text: str, out) -> None:
    if args.json:
        out.write(json.dumps({"schema": SCHEMA, "command": args.command, **payload}) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")


def _indices(system, text, flag):
    out = []
    for name in [x for x in re.split(r"[,\s]+", text) if x]:
        try:
            out.append(system.oposet.index(name))
        except KeyError:
            raise UsageError(f"{flag}: unknown index {name!r}") from None
    return out


def run_command(argv: list[str], out=None) -> int:
    """Run one command; returns the exit code (0 true/ok, 1 false/violation, 2 usage error)."""
    out = out or _sys.stdout
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return _dispatch(args, out)
    except (OSError, KeyError, ValueError, QuandleError) as exc:
        _sys.stderr.write(f"quandle {args.command}: {exc}\n")
        return 2


def _dispatch(args, out) -> int:
    cmd = args.command
    if cmd == "construct":
        system = construct(args.kind, args.args)
        stem = Path(args.output).stem if args.output else system.name or "system"
        text, tables = serialize_system(system, stem)
        if args.output:
            target = Path(args.output)
            target.write_text(text, encoding="utf-8")
            for fname, body in tables.items():
                (target.parent / fname).write_text(body, encoding="utf-8")
        _emit(args, {"name": system.name, "text": text, "tables": tables}, text, out)
        return 0

    if cmd == "validate":
        try:
            system = load_system(args.file)
        except ParseError as exc:
            _emit(args, {"valid": False, "line": exc.line, "col": exc.col, "error": exc.message},
                  f"invalid: {exc}", out)
            return 1
        except SystemViolation as exc:
            _emit(args, {"valid": False, "kind": exc.kind, "witness": str(exc.witness),
                         "error": str(exc)}, f"invalid: {exc}", out)
            return 1
        _emit(args, {"valid": True, "indices": list(system.names)},
              f"valid: {system.n} indices, {len(system.oposet.less_pairs())} order pairs, "
              f"{len(system.oposet.perp_pairs())} orthogonal pairs", out)
        return 0

    try:
        system = load_system(args.file)
    except SystemViolation as exc:
        raise UsageError(f"invalid system: {exc}") from None
    rng = random.Random(args.seed) if args.seed is not None else None

    if cmd == "reduce":
        word = rewrite.parse_word(system, args.word)
        braid = rewrite.ranked_normal_form(system, word, rng)
        text = rewrite.format_word(system, braid)
        length = len(rewrite.linear(braid))
        _emit(args, {"normal_form": text, "length": length}, f"{text}  (length {length})", out)
        return 0

    if cmd == "equal":
        a = rewrite.ranked_normal_form(system, rewrite.parse_word(system, args.word1), rng)
        b = rewrite.ranked_normal_form(system, rewrite.parse_word(system, args.word2), rng)
        same = a == b
        _emit(args, {"equal": same, "normal_forms": [rewrite.format_word(system, a),
                                                      rewrite.format_word(system, b)]},
              "equal" if same else "different", out)
        return 0 if same else 1

    if cmd == "member":
        word = rewrite.parse_word(system, args.word)
        subset = _indices(system, args.subset, "--subset")
        inside = rewrite.parabolic_membership(system, word, subset)
        _emit(args, {"member": inside}, "member" if inside else "not a member", out)
        return 0 if inside else 1

    if cmd == "diaph":
        word = rewrite.parse_word(system, args.word)
        (i,) = _indices(system, args.index, "--index")
        j = rewrite.diaphanous_type(system, word, i)
        name = None if j is None else system.names[j]
        _emit(args, {"diaphanous": j is not None, "final_index": name},
              f"({system.names[i]}, {name})-diaphanous" if name else "not diaphanous", out)
        return 0 if j is not None else 1

    if cmd == "holonomy":
        rows, payload = [], {}
        for i in range(system.n):
            hol = holonomy_group(system, i)
            dotted = dotted_subgroup(system, i)
            payload[system.names[i]] = {"holonomy": sorted(str(x) for x in hol),
                                        "dotted_index": dotted.index}
            rows.append(f"{system.names[i]}: holonomy {{{', '.join(sorted(str(x) for x in hol))}}}, "
                        f"dotted subgroup index {dotted.index}")
        trivial = has_trivial_holonomy(system)
        rows.append("trivial holonomy" if trivial else "nontrivial holonomy")
        _emit(args, {"trivial": trivial, "indices": payload}, "\n".join(rows), out)
        return 0 if trivial else 1

    if cmd in ("ball", "verify-qm", "hyperplanes"):
        cap = _cap_for(system, args.cap)
        ball = cayley.enumerate_ball(system, args.radius, cap)
        if cmd == "ball":
            data = cayley.ball_to_json(ball)
            sphere = [ball.dist.count(d) for d in range(args.radius + 1)]
            _emit(args, {k: v for k, v in data.items() if k != "schema"},
                  f"{ball.size} vertices, {len(ball.edges)} edges; spheres {sphere}", out)
            return 0
        if cmd == "verify-qm":
            report = cayley.verify_quasi_median(ball)
            lines = [f"{c.name}: {'pass' if c.passed else 'FAIL'} ({c.checked} checked"
                     + (f", {c.boundary_resolved} resolved at the root" if c.boundary_resolved else "")
                     + ")" + ("" if c.passed else f" witness {c.failures[0]}") for c in report.checks]
            lines.append("quasi-median: " + ("pass" if report.passed else "FAIL"))
            _emit(args, report.as_dict(), "\n".join(lines), out)
            return 0 if report.passed else 1
        planes = cayley.hyperplanes(ball)
        sizes = sorted((len(h.edges) for h in planes), reverse=True)
        _emit(args, {"count": len(planes), "hyperplanes": [sorted(h.edges) for h in planes]},
              f"{len(planes)} hyperplanes in a ball of {ball.size} vertices; edge counts {sizes}", out)
        return 0

    if cmd == "decompose":
        report = cayley.semidirect_decomposition(system, args.radius, args.cap)
        lines = [f"minimal indices: {', '.join(report.minimal)}"]
        lines += [f"{k}: {'pass' if v else 'FAIL'}" for k, v in report.checks.items()]
        if report.order is not None:
            lines.append(f"|Q| = {report.order} = {report.kernel_order} * {report.quotient_order}")
        _emit(args, report.as_dict(), "\n".join(lines), out)
        return 0 if report.passed else 1

    if cmd == "torsion":
        report = cayley.torsion_primes(system, args.radius, args.cap)
        how = "exact" if report.exact else f"sampled over {report.sampled} elements"
        _emit(args, report.as_dict(),
              f"torsion primes {sorted(report.primes)} ({how}); factor primes {sorted(report.expected)}",
              out)
        return 0 if report.consistent else 1

    if cmd == "convert-trickle":
        try:
            tg = constructions.quandle_to_trickle(system)
        except (constructions.NonCyclicFactor, constructions.NontrivialHolonomy) as exc:
            _emit(args, {"converted": False, "error": str(exc)}, f"not a trickle group: {exc}", out)
            return 1
        _emit(args, {"converted": True, "text": format_trickle(tg)}, format_trickle(tg), out)
        return 0

    raise UsageError(f"unknown command {cmd}")


def main() -> None:
    raise SystemExit(run_command(_sys.argv[1:]))


if __name__ == "__main__":
    main()
