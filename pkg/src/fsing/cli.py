"""Script language, command dispatch and reporting.

A script is a ring line, optional ``let`` bindings and one command::

    ring p=5 vars=x,y mod=x*y minprimes=x|y
    let m = ideal(x, y)
    tau T=full E=2

Batch files hold several scripts separated by lines consisting of ``---``.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import re
import sys
from fractions import Fraction
from typing import Any

from . import config
from .cartier import CartierMap, CoefficientPair, Full, Generated, compose
from .decompose import VerificationFailed, decompose_tau
from .ffpoly import ParseError, Ring, check_prime
from .frob import FLAGS, RingPresentation, fedder_is_fpure, hom_module_generators
from .gb import Ideal
from .testideal import TestIdealResult, fpt_search, tau_algebra

EXIT_OK, EXIT_ERROR, EXIT_UNCERTIFIED = 0, 1, 2

COMMANDS = {
    "tau": {"T", "a", "t", "E"},
    "decompose": {"T", "a", "t", "E"},
    "fpt": {"f", "D", "E"},
    "fedder": {"at"},
    "homgens": {"e"},
    "compose": set(),
}
REQUIRED = {"fpt": {"f", "D"}, "fedder": {"at"}, "homgens": {"e"}}

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_INT = re.compile(r"\d+\Z")
_RAT = re.compile(r"(\d+)/(\d+)\Z")


# -- script values -----------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class MapSpec:
    e: int
    u: str

    def __str__(self) -> str:
        return f"map(e={self.e}, u={self.u})"


@dataclasses.dataclass(frozen=True)
class IdealSpec:
    gens: tuple

    def __str__(self) -> str:
        return f"ideal({', '.join(self.gens)})"


@dataclasses.dataclass(frozen=True)
class RingDecl:
    p: int
    vars: tuple
    mod: tuple = ()
    flags: tuple = ()
    minprimes: tuple | None = None

    def __str__(self) -> str:
        parts = [f"ring p={self.p}", f"vars={','.join(self.vars)}"]
        if self.mod:
            parts.append("mod=" + ";".join(self.mod))
        if self.flags:
            parts.append("flags=" + ",".join(self.flags))
        if self.minprimes is not None:
            parts.append("minprimes=" + "|".join(";".join(P) for P in self.minprimes))
        return " ".join(parts)

    def build(self) -> RingPresentation:
        return RingPresentation(self.p, self.vars, self.mod, self.flags, self.minprimes)


@dataclasses.dataclass(frozen=True)
class Command:
    name: str
    args: tuple = ()        # (key, value) pairs in source order
    maps: tuple = ()        # positional maps (compose)

    def get(self, key: str, default=None):
        for k, v in self.args:
            if k == key:
                return v
        return default

    def __str__(self) -> str:
        parts = [self.name]
        parts.extend(str(m) for m in self.maps)
        for k, v in self.args:
            parts.append(f"{k}={_render(v)}")
        return " ".join(parts)


def _render(v) -> str:
    if isinstance(v, tuple):
        return "gens(" + ", ".join(str(m) for m in v) + ")"
    return str(v)


@dataclasses.dataclass(frozen=True)
class InputScript:
    ring: RingDecl
    bindings: tuple
    command: Command

    def __str__(self) -> str:
        lines = [str(self.ring)]
        lines.extend(f"let {name} = {spec}" for name, spec in self.bindings)
        lines.append(str(self.command))
        return "\n".join(lines) + "\n"


# -- parsing -----------------------------------------------------------------

def _words(line: str, offset: int):
    """Split a line into (key or None, value, value offset), respecting parentheses."""
    i, n = 0, len(line)
    while i < n:
        if line[i].isspace():
            i += 1
            continue
        start, depth = i, 0
        while i < n and (depth or not line[i].isspace()):
            if line[i] == "(":
                depth += 1
            elif line[i] == ")":
                depth -= 1
                if depth < 0:
                    raise ParseError("unbalanced ')'", offset + i)
            i += 1
        if depth:
            raise ParseError("unbalanced '('", offset + start)
        tok = line[start:i]
        m = re.match(r"([A-Za-z_][A-Za-z0-9_]*)=", tok)
        if m and not tok.startswith(("map(", "ideal(", "gens(")):
            yield m.group(1), tok[m.end():], offset + start + m.end()
        else:
            yield None, tok, offset + start


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.S: Ring | None = None
        self.names: set = set()

    def poly(self, src: str, pos: int) -> str:
        # canonical text without spaces, so printed scripts tokenize again
        try:
            return str(self.S.parse(src)).replace(" ", "")
        except ParseError as exc:
            at = pos + (exc.pos or 0)
            raise ParseError(exc.reason, at, self.text) from None

    def poly_list(self, src: str, pos: int, sep: str) -> tuple:
        out, k = [], 0
        for piece in src.split(sep):
            lead = len(piece) - len(piece.lstrip())
            if not piece.strip():
                raise ParseError("empty polynomial", pos + k, self.text)
            out.append(self.poly(piece, pos + k + lead))
            k += len(piece) + 1
        return tuple(out)

    def integer(self, src: str, pos: int, what: str) -> int:
        if not _INT.match(src):
            raise ParseError(f"{what} must be a positive integer", pos, self.text)
        return int(src)

    def rational(self, src: str, pos: int) -> Fraction:
        m = _RAT.match(src)
        if m:
            if int(m.group(2)) == 0:
                raise ParseError("zero denominator", pos, self.text)
            return Fraction(int(m.group(1)), int(m.group(2)))
        if _INT.match(src):
            return Fraction(int(src))
        raise ParseError("rationals are num/den", pos, self.text)

    def call(self, src: str, pos: int, head: str) -> tuple:
        """Body of ``head(...)`` and its offset."""
        if not (src.startswith(head + "(") and src.endswith(")")):
            raise ParseError(f"expected {head}(...)", pos, self.text)
        return src[len(head) + 1:-1], pos + len(head) + 1

    def map_spec(self, src: str, pos: int) -> MapSpec:
        body, bpos = self.call(src, pos, "map")
        m = re.match(r"\s*e\s*=\s*(\d+)\s*,\s*u\s*=\s*", body)
        if not m:
            raise ParseError("maps are written map(e=<n>, u=<poly>)", pos, self.text)
        return MapSpec(int(m.group(1)), self.poly(body[m.end():], bpos + m.end()))

    def map_list(self, src: str, pos: int) -> tuple:
        body, bpos = self.call(src, pos, "gens")
        maps, depth, start = [], 0, 0
        for i, ch in enumerate(body + ","):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                piece = body[start:i]
                lead = len(piece) - len(piece.lstrip())
                maps.append(self.map_spec(piece.strip(), bpos + start + lead))
                start = i + 1
        return tuple(maps)

    def ideal_ref(self, src: str, pos: int):
        if src.startswith("ideal("):
            body, bpos = self.call(src, pos, "ideal")
            return IdealSpec(self.poly_list(body, bpos, ","))
        if not _IDENT.match(src):
            raise ParseError("expected a bound name or ideal(...)", pos, self.text)
        if src not in self.names:
            raise ParseError(f"unbound name {src!r}", pos, self.text)
        return src

    def ring_line(self, line: str, offset: int) -> RingDecl:
        kv = {}
        for key, val, pos in _words(line[4:], offset + 4):
            if key is None or key in kv:
                raise ParseError(f"unexpected {val!r} in ring declaration", pos, self.text)
            kv[key] = (val, pos)
        unknown = set(kv) - {"p", "vars", "mod", "flags", "minprimes"}
        if unknown:
            key = sorted(unknown)[0]
            raise ParseError(f"unknown ring option {key!r}", kv[key][1], self.text)
        if "p" not in kv or "vars" not in kv:
            raise ParseError("ring needs p=<prime> and vars=<names>", offset, self.text)
        pv, ppos = kv["p"]
        p = self.integer(pv, ppos, "p")
        try:
            check_prime(p)
        except ValueError as exc:
            raise ParseError(str(exc), ppos, self.text) from None
        vv, vpos = kv["vars"]
        names = tuple(vv.split(","))
        for k, nm in enumerate(names):
            if not _IDENT.match(nm):
                raise ParseError(f"bad variable name {nm!r}", vpos, self.text)
        if len(set(names)) != len(names):
            raise ParseError("repeated variable name", vpos, self.text)
        self.S = Ring(p, names)
        mod = self.poly_list(*kv["mod"], ";") if "mod" in kv else ()
        flags = ()
        if "flags" in kv:
            fv, fpos = kv["flags"]
            flags = tuple(fv.split(","))
            bad = [f for f in flags if f not in FLAGS]
            if bad:
                raise ParseError(f"unknown flag {bad[0]!r}", fpos, self.text)
        minprimes = None
        if "minprimes" in kv:
            mv, mpos = kv["minprimes"]
            primes, k = [], 0
            for chunk in mv.split("|"):
                primes.append(self.poly_list(chunk, mpos + k, ";"))
                k += len(chunk) + 1
            minprimes = tuple(primes)
        return RingDecl(p, names, mod, flags, minprimes)

    def command(self, line: str, offset: int) -> Command:
        name = line.split(None, 1)[0]
        if name not in COMMANDS:
            raise ParseError(f"unknown command {name!r}", offset, self.text)
        allowed = COMMANDS[name]
        args, maps, seen = [], [], set()
        for key, val, pos in _words(line[len(name):], offset + len(name)):
            if key is None:
                if name != "compose":
                    raise ParseError(f"unexpected {val!r}", pos, self.text)
                maps.append(self.map_spec(val, pos))
                continue
            if key not in allowed:
                raise ParseError(f"{name} does not take {key}=", pos, self.text)
            if key in seen:
                raise ParseError(f"repeated option {key}=", pos, self.text)
            seen.add(key)
            if key == "T":
                v = "full" if val == "full" else self.map_list(val, pos)
            elif key in ("a", "at"):
                v = self.ideal_ref(val, pos)
            elif key == "t":
                v = self.rational(val, pos)
                if v <= 0:
                    raise ParseError("t must be positive", pos, self.text)
            elif key == "f":
                v = self.poly(val, pos)
            else:
                v = self.integer(val, pos, key)
                if v < 1:
                    raise ParseError(f"{key} must be positive", pos, self.text)
            args.append((key, v))
        missing = REQUIRED.get(name, set()) - seen
        if missing:
            raise ParseError(f"{name} needs {', '.join(sorted(missing))}", offset, self.text)
        if name == "compose" and len(maps) != 2:
            raise ParseError("compose takes exactly two maps", offset, self.text)
        return Command(name, tuple(args), tuple(maps))

    def script(self, base: int = 0, text: str | None = None) -> InputScript:
        text = self.text if text is None else text
        ring = None
        bindings = []
        command = None
        offset = base
        for raw in text.splitlines(keepends=True):
            line = raw.split("#", 1)[0].rstrip()
            lead = len(line) - len(line.lstrip())
            pos = offset + lead
            body = line.strip()
            offset += len(raw)
            if not body:
                continue
            if command is not None:
                raise ParseError("only one command per script", pos, self.text)
            if ring is None:
                if not re.match(r"ring(\s|$)", body):
                    raise ParseError("a script starts with a ring declaration", pos, self.text)
                ring = self.ring_line(body, pos)
            elif re.match(r"let(\s|$)", body):
                m = re.match(r"let\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*", body)
                if not m:
                    raise ParseError("expected let <name> = ideal(...)", pos, self.text)
                rest = body[m.end():]
                body_, bpos = self.call(rest, pos + m.end(), "ideal")
                bindings.append((m.group(1), IdealSpec(self.poly_list(body_, bpos, ","))))
                self.names.add(m.group(1))
            else:
                command = self.command(body, pos)
        if ring is None:
            raise ParseError("empty script", base, self.text)
        if command is None:
            raise ParseError("script has no command", offset, self.text)
        return InputScript(ring, tuple(bindings), command)


def parse_script(text: str) -> InputScript:
    return _Parser(text).script()


def parse_batch(text: str) -> list:
    """Scripts separated by ``---`` lines."""
    out, chunk, start, offset = [], [], 0, 0
    for raw in text.splitlines(keepends=True):
        if raw.strip() == "---":
            out.append(_Parser(text).script(start, "".join(chunk)))
            chunk, start = [], offset + len(raw)
        else:
            chunk.append(raw)
        offset += len(raw)
    if "".join(chunk).strip() or not out:
        out.append(_Parser(text).script(start, "".join(chunk)))
    return out


# -- running -----------------------------------------------------------------

@dataclasses.dataclass
class Report:
    exit_code: int
    text: str
    data: dict

    def render(self, mode: str) -> str:
        return json.dumps(self.data, indent=2) if mode == "json" else self.text


def _ideal(R: RingPresentation, spec, bindings: dict) -> Ideal:
    if isinstance(spec, str):
        spec = bindings[spec]
    return Ideal(R.S, spec.gens)


def _tau_text(label: str, res: TestIdealResult) -> list:
    lines = [f"{label} = {res.ideal}",
             f"  degree bound E = {res.degree_bound}, iterations = {res.iterations}",
             f"  test element c = {res.test_element.c}"]
    if res.certified:
        lines.append(f"  certified: {res.note}")
    else:
        lines.append(f"  note: certified up to degree {res.degree_bound} ({res.note})")
    return lines


def _algebra(R: RingPresentation, cmd: Command, E: int):
    T = cmd.get("T", "full")
    if T == "full":
        return Full(E)
    return Generated(tuple(CartierMap.make(R, m.e, m.u) for m in T))


def _coeff(R, cmd, bindings):
    a = cmd.get("a")
    t = cmd.get("t", Fraction(1))
    if a is None:
        if t != 1:
            raise ValueError("t= needs a coefficient ideal a=")
        return CoefficientPair.trivial(R)
    return CoefficientPair(_ideal(R, a, bindings), t)


def _execute(script: InputScript) -> Report:
    R = script.ring.build()
    bindings = dict(script.bindings)
    cmd = script.command
    cfg = config.current()
    E = cmd.get("E", cfg.degree_bound)
    if cmd.name == "tau":
        res = tau_algebra(R, _algebra(R, cmd, E), _coeff(R, cmd, bindings), E=E)
        code = EXIT_OK if res.certified else EXIT_UNCERTIFIED
        return Report(code, "\n".join(_tau_text("tau", res)), res.to_json())
    if cmd.name == "decompose":
        res = decompose_tau(R, _algebra(R, cmd, E), _coeff(R, cmd, bindings), E)
        lines = _tau_text("tau", res.full_tau)
        lines.append(f"  generators: {', '.join(str(g) for g in res.generators)}")
        for k, pc in enumerate(res.pieces):
            lines.append(f"piece {k}: word {list(pc.word)}, {pc.map}")
            lines.extend("  " + s for s in _tau_text("tau", pc.tau))
            lines.append("  divisor: " + (pc.divisor.note if pc.divisor else
                                           f"unavailable ({pc.divisor_note})"))
        lines.append(f"verified: {str(res.verified).lower()}")
        code = EXIT_OK if res.full_tau.certified else EXIT_UNCERTIFIED
        return Report(code, "\n".join(lines), res.to_json())
    if cmd.name == "fpt":
        res = fpt_search(R, cmd.get("f"), cmd.get("D"), E)
        lines = [f"fpt = {res.threshold}",
                 f"  tau = R at {res.below}, tau != R at {res.threshold} (D = {res.denominator_bound}, E = {E})",
                 f"  nu = {res.nu}"]
        return Report(EXIT_OK, "\n".join(lines), res.to_json())
    if cmd.name == "fedder":
        m = _ideal(R, cmd.get("at"), bindings)
        ok = fedder_is_fpure(R, m)
        return Report(EXIT_OK, f"F-pure at {m}: {str(ok).lower()}",
                      {"fpure": ok, "at": [str(g) for g in m.groebner()]})
    if cmd.name == "homgens":
        e = cmd.get("e")
        gens = hom_module_generators(R, e)
        lines = [f"Hom(F^{e}_* R, R) is generated by u·Tr^{e} for u in:"]
        lines.extend(f"  {u}" for u in gens)
        return Report(EXIT_OK, "\n".join(lines),
                      {"e": e, "generators": [str(u) for u in gens]})
    phi, psi = (CartierMap.make(R, m.e, m.u) for m in cmd.maps)
    out = compose(phi, psi)
    return Report(EXIT_OK, str(out), out.to_json())


def run(script: InputScript, cfg: config.SessionConfig | None = None) -> Report:
    """Execute one script; errors become exit code 1 with a message."""
    with config.using(cfg):
        try:
            return _execute(script)
        except VerificationFailed as exc:
            data = {"error": str(exc), "transcript": exc.transcript}
            return Report(EXIT_ERROR, f"error: {exc}\n{json.dumps(exc.transcript, indent=2)}",
                          data)
        except (ArithmeticError, ValueError, RuntimeError, KeyError) as exc:
            msg = exc.args[0] if exc.args else type(exc).__name__
            return Report(EXIT_ERROR, f"error: {msg}", {"error": str(msg)})


def main(argv: list | None = None) -> int:
    ap = argparse.ArgumentParser(prog="fsing", description="Test ideals of Cartier algebras.")
    ap.add_argument("--script", metavar="FILE", help="script file (default: stdin)")
    ap.add_argument("--json", action="store_true", help="emit JSON")
    ap.add_argument("--degree-bound", type=int, metavar="E", help="default degree bound")
    ap.add_argument("--budget", type=int, metavar="N", help="S-pair budget per Groebner basis")
    args = ap.parse_args(argv)
    try:
        cfg = config.SessionConfig.from_env()
        changes: dict[str, Any] = {}
        if args.json:
            changes["output_mode"] = "json"
        if args.degree_bound is not None:
            changes["degree_bound"] = args.degree_bound
        if args.budget is not None:
            changes["spair_budget"] = args.budget
        cfg = cfg.replace(**changes)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.script:
        with open(args.script, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    try:
        scripts = parse_batch(text)
    except ParseError as exc:
        if cfg.output_mode == "json":
            print(json.dumps({"error": str(exc)}))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    codes = []
    for k, script in enumerate(scripts):
        rep = run(script, cfg)
        if k and cfg.output_mode == "text":
            print("---")
        stream = sys.stderr if rep.exit_code == EXIT_ERROR and cfg.output_mode == "text" else sys.stdout
        print(rep.render(cfg.output_mode), file=stream)
        codes.append(rep.exit_code)
    if EXIT_ERROR in codes:
        return EXIT_ERROR
    return EXIT_UNCERTIFIED if EXIT_UNCERTIFIED in codes else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
