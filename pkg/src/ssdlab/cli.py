"""Command-line front end.

    ssdlab [shared options] <subcommand> [options]

Shared options (``--ring``, ``--idempotent``, ``--format``, ``--seed``,
``--budget``, ``--workers``, ``--config``, ``--timing``) may appear before or
after the subcommand.  Values from ``--config`` (a JSON object) are overridden
by flags.  Exit status: 0 positive verdict, 1 negative verdict, 2 usage or
resource error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Optional

from . import derivations as dv
from .hypotheses import check_family
from .maps import (BuiltinMap, CompositeMap, RingMap, identity_map, is_additive, is_automorphism, is_endomorphism,
                   make_tabulated, zero_map)
from .peirce import cell_product_check, independence_check, make_frame, round_trip_check
from .ring_core import RingError, RingSpec, find_idempotents, make_ring, validate_axioms
from .search import (HYPOTHESES, RELAXATIONS, SearchConfig, counterexample_hunt, preferred_idempotents,
                     reproduce_worked_examples, select_frame, verify_additivity_theorem, verify_generalized_theorem)

SUBCOMMANDS = ("ring", "idempotents", "peirce", "verify-map", "check-assumptions", "search", "verify-theorem",
               "hunt", "reproduce-examples")
MAP_CHECKS = ("additive", "endomorphism", "automorphism", "skew-semi", "generalized", "semi", "skew",
              "derivation")
FORMATS = ("text", "json-lines")
G_FAMILIES = ("identity", "zero", "all-endomorphisms", "all-automorphisms", "all-tables")
ALPHA_FAMILIES = ("identity", "all-automorphisms")

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


class ConfigError(RingError):
    pass


class ParseError(ConfigError):
    def __init__(self, text: str, pos: int, expected: str):
        found = text[pos:pos + 8] or "end of input"
        super().__init__(f"parse error in {text!r} at position {pos}: expected {expected}, found {found!r}")
        self.text, self.pos, self.expected = text, pos, expected


# --------------------------------------------------------------------------
# literal grammar
#
#   ring := "zn:" INT | "m2:" ring | "ut2:" ring | "prod(" ring "," ring ")" | "qm2"
#   map  := "zero" | "identity" | "flip" | "signconj" | "scaledflip:" RATIONAL
#         | "table:[" INT ("," INT)* "]" | "compose(" map "," map ")"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def eat(self, token: str) -> bool:
        self._skip()
        if self.text.startswith(token, self.pos):
            self.pos += len(token)
            return True
        return False

    def expect(self, token: str) -> None:
        if not self.eat(token):
            raise ParseError(self.text, self.pos, repr(token))

    def integer(self, signed: bool = False) -> int:
        self._skip()
        start = self.pos
        if signed and self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        digits = self.text[start:self.pos]
        if not digits.lstrip("+-"):
            self.pos = start
            raise ParseError(self.text, start, "an integer")
        return int(digits)

    def rational(self) -> Fraction:
        num = self.integer(signed=True)
        if self.eat("/"):
            start = self.pos
            den = self.integer()
            if den == 0:
                raise ParseError(self.text, start, "a non-zero denominator")
            return Fraction(num, den)
        return Fraction(num)

    def end(self) -> None:
        self._skip()
        if self.pos != len(self.text):
            raise ParseError(self.text, self.pos, "end of input")

    def ring(self) -> RingSpec:
        if self.eat("zn:"):
            return RingSpec.zn(self.integer())
        if self.eat("m2:"):
            return RingSpec.matrix2(self.ring())
        if self.eat("ut2:"):
            return RingSpec.ut2(self.ring())
        if self.eat("prod("):
            left = self.ring()
            self.expect(",")
            right = self.ring()
            self.expect(")")
            return RingSpec.product(left, right)
        if self.eat("qm2"):
            return RingSpec.rational_matrix2()
        self._skip()
        raise ParseError(self.text, self.pos, "one of 'zn:', 'm2:', 'ut2:', 'prod(', 'qm2'")

    def map(self) -> tuple:
        if self.eat("compose("):
            outer = self.map()
            self.expect(",")
            inner = self.map()
            self.expect(")")
            return ("compose", outer, inner)
        if self.eat("table:["):
            images = [self.integer()]
            while self.eat(","):
                images.append(self.integer())
            self.expect("]")
            return ("table", tuple(images))
        if self.eat("scaledflip:"):
            return ("scaledflip", self.rational())
        for word in ("signconj", "identity", "zero", "flip"):
            if self.eat(word):
                return (word,)
        self._skip()
        raise ParseError(self.text, self.pos,
                         "one of 'zero', 'identity', 'flip', 'signconj', 'scaledflip:', 'table:[', 'compose('")


def parse_ring(text: str) -> RingSpec:
    p = _Parser(text)
    spec = p.ring()
    p.end()
    return spec


def parse_map(text: str) -> tuple:
    p = _Parser(text)
    ast = p.map()
    p.end()
    return ast


def build_map(ast: tuple, ring) -> RingMap:
    kind = ast[0]
    if kind == "compose":
        return CompositeMap(build_map(ast[1], ring), build_map(ast[2], ring))
    if kind == "table":
        return make_tabulated(ring, list(ast[1]))
    if kind == "scaledflip":
        return BuiltinMap(ring, "scaled_flip", ast[1])
    if kind in ("zero", "identity"):
        return identity_map(ring) if kind == "identity" else zero_map(ring)
    return BuiltinMap(ring, {"flip": "flip_conj", "signconj": "sign_conj"}[kind])


def map_from_literal(text: str, ring) -> RingMap:
    return build_map(parse_map(text), ring)


# --------------------------------------------------------------------------
# configuration


@dataclass
class CliConfig:
    subcommand: Optional[str] = None
    ring: Optional[str] = None
    idempotent: str = "first-nontrivial"
    map: Optional[str] = None
    check: str = "additive"
    g: Optional[str] = None
    alpha: Optional[str] = None
    d: Optional[str] = None
    hypothesis: Optional[str] = None
    target: str = "skew_semi"
    g_family: Optional[str] = None
    alpha_family: Optional[str] = None
    relax: tuple = ()
    format: str = "text"
    seed: int = 0
    budget: Optional[int] = None
    workers: int = 1
    timing: bool = False
    ring_spec: Optional[RingSpec] = field(default=None, repr=False)


_FILE_KEYS = tuple(f.name for f in fields(CliConfig) if f.name != "ring_spec")


def _shared_parser() -> argparse.ArgumentParser:
    sp = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    sp.add_argument("--ring", default=S, help="ring literal, e.g. zn:6, m2:zn:2, prod(zn:2,zn:2), qm2")
    sp.add_argument("--idempotent", default=S, help="'first-nontrivial', an element index or label")
    sp.add_argument("--format", default=S, choices=FORMATS)
    sp.add_argument("--seed", default=S, type=int)
    sp.add_argument("--budget", default=S, type=int,
                    help="identity-instance budget for searches; sample budget for structural checks")
    sp.add_argument("--workers", default=S, type=int)
    sp.add_argument("--config", default=S, help="JSON file with configuration keys")
    sp.add_argument("--timing", default=S, action="store_true", help="include elapsed seconds in reports")
    return sp


def build_parser() -> argparse.ArgumentParser:
    shared = _shared_parser()
    S = argparse.SUPPRESS
    parser = argparse.ArgumentParser(prog="ssdlab", parents=[shared],
                                     description="Finite-ring checks of multiplicative skew semi-derivations.")
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")

    def add(name, help_text):
        p = sub.add_parser(name, parents=[shared], help=help_text, argument_default=S)
        p.set_defaults(subcommand=name)
        return p

    add("ring", "build a ring and validate its axioms")
    add("idempotents", "list idempotents of a finite ring")
    add("peirce", "Peirce decomposition and its invariants for the selected idempotent")
    p = add("verify-map", "check a map property or a defining identity")
    p.add_argument("--map", dest="map")
    p.add_argument("--check", choices=MAP_CHECKS)
    for name in ("g", "alpha", "d"):
        p.add_argument(f"--{name}", dest=name)
    p = add("check-assumptions", "evaluate a hypothesis family for a map g")
    p.add_argument("--hypothesis", choices=HYPOTHESES[1:])
    p.add_argument("--g", dest="g")
    p.add_argument("--d", dest="d")
    for name, help_text in (("search", "enumerate maps for one explicit (g, alpha)"),
                            ("verify-theorem", "check additivity over admissible (g, alpha) families"),
                            ("hunt", "search for non-additive maps under relaxed identities")):
        p = add(name, help_text)
        p.add_argument("--target", choices=("skew_semi", "generalized"))
        p.add_argument("--hypothesis", choices=HYPOTHESES)
        p.add_argument("--relax", action="append", choices=RELAXATIONS)
        if name == "search":
            for m in ("g", "alpha", "d"):
                p.add_argument(f"--{m}", dest=m)
        else:
            p.add_argument("--g-family", dest="g_family", help=f"one of {', '.join(G_FAMILIES)} or map literals "
                                                                "separated by ';'")
            p.add_argument("--alpha-family", dest="alpha_family")
    add("reproduce-examples", "re-run the two worked 2x2 matrix examples exactly")
    return parser


def _load_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path!r} is not valid JSON: {exc.msg} (line {exc.lineno})") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path!r} must hold a JSON object")
    unknown = sorted(set(data) - set(_FILE_KEYS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return data


def _validate(cfg: CliConfig) -> CliConfig:
    if cfg.subcommand is None:
        raise ConfigError("no subcommand given")
    if cfg.subcommand not in SUBCOMMANDS:
        raise ConfigError(f"unknown subcommand {cfg.subcommand!r}")
    if cfg.format not in FORMATS:
        raise ConfigError(f"format must be one of {', '.join(FORMATS)}")
    for name in ("seed", "workers", "budget"):
        v = getattr(cfg, name)
        if v is not None and (not isinstance(v, int) or isinstance(v, bool)):
            raise ConfigError(f"{name} must be an integer")
    if cfg.workers <= 0:
        raise ConfigError("workers must be a positive integer")
    if cfg.budget is not None and cfg.budget <= 0:
        raise ConfigError("budget must be a positive integer")
    if cfg.check not in MAP_CHECKS:
        raise ConfigError(f"check must be one of {', '.join(MAP_CHECKS)}")
    if cfg.hypothesis is not None and cfg.hypothesis not in HYPOTHESES:
        raise ConfigError(f"unknown hypothesis family {cfg.hypothesis!r}")
    bad = sorted(set(cfg.relax) - set(RELAXATIONS))
    if bad:
        raise ConfigError(f"unknown relaxations: {', '.join(bad)}")
    if cfg.ring is None:
        if cfg.subcommand != "reproduce-examples":
            raise ConfigError("--ring is required")
        cfg.ring = "qm2"
    spec = parse_ring(cfg.ring)
    if cfg.subcommand == "reproduce-examples" and spec.kind != "rational_matrix2":
        raise ConfigError("reproduce-examples runs on the rational matrix ring (--ring qm2)")
    for name in ("map", "g", "alpha", "d"):
        text = getattr(cfg, name)
        if text is not None:
            parse_map(text)
    for name in ("g_family", "alpha_family"):
        text = getattr(cfg, name)
        if text is not None and text not in G_FAMILIES:
            for part in text.split(";"):
                parse_map(part)
    cfg.ring_spec = spec
    make_ring(spec)  # surfaces size and parameter errors before any work is done
    return cfg


def parse_config(argv=None) -> CliConfig:
    """Parse flags (and an optional ``--config`` file) into a validated CliConfig.

    Raises ``ConfigError`` on bad values; argparse itself exits with status 2
    on malformed flags.
    """
    ns = vars(build_parser().parse_args(argv))
    values: dict = {}
    if "config" in ns:
        values.update(_load_file(ns.pop("config")))
    if "relax" in values:
        values["relax"] = tuple(values["relax"])
    for key, v in ns.items():
        if key == "subcommand" and v is None:
            continue
        values[key] = tuple(v) if key == "relax" else v
    return _validate(CliConfig(**values))


# --------------------------------------------------------------------------
# dispatch


def _frame_for(ring, selector):
    if ring.tabulated:
        if isinstance(selector, str) and selector.lstrip("-").isdigit():
            selector = int(selector)
        return select_frame(ring, selector)
    if selector in (None, "first-nontrivial"):
        return make_frame(ring, ring.unit(1, 1))
    try:
        rows = json.loads(selector)
        value = (rows[0][0], rows[0][1], rows[1][0], rows[1][1])
        value = tuple(Fraction(v) for v in value)
    except (ValueError, TypeError, IndexError, KeyError):
        raise ConfigError(f"idempotent on qm2 must be the label [[a,b],[c,d]], got {selector!r}") from None
    return make_frame(ring, ring.element(value))


def _sample_budget(cfg, default=200):
    return cfg.budget if cfg.budget is not None else default


def _family(text, ring, default):
    text = text or default
    if text in G_FAMILIES:
        return text
    return [map_from_literal(part, ring) for part in text.split(";")]


def _search_config(cfg: CliConfig, ring, **kw) -> SearchConfig:
    base = dict(ring=cfg.ring_spec, idempotent=cfg.idempotent, target=cfg.target,
                node_budget=cfg.budget or 10 ** 8, worker_count=cfg.workers, relaxations=frozenset(cfg.relax),
                seed=cfg.seed)
    base.update(kw)
    return SearchConfig(**base)


def _cmd_ring(cfg, ring):
    rep = validate_axioms(ring, sample_budget=_sample_budget(cfg), seed=cfg.seed)
    return {"report": "ring", "ring": str(ring.spec), "order": ring.order if ring.tabulated else None,
            "tabulated": ring.tabulated, "axioms": rep.to_dict(), "holds": rep.holds}


def _cmd_idempotents(cfg, ring):
    items = [{"index": e.value, "element": str(e), "trivial": trivial} for e, trivial in find_idempotents(ring)]
    preferred = preferred_idempotents(ring)
    return {"report": "idempotents", "ring": str(ring.spec), "idempotents": items,
            "nontrivial": sum(not i["trivial"] for i in items),
            "first_nontrivial": str(preferred[0]) if preferred else None,
            "holds": bool(preferred)}


def _cmd_peirce(cfg, ring):
    frame = _frame_for(ring, cfg.idempotent)
    b = _sample_budget(cfg, 40)
    checks = [round_trip_check(frame, b, cfg.seed), independence_check(frame, b, cfg.seed),
              cell_product_check(frame, b, cfg.seed)]
    out = {"report": "peirce", "ring": str(ring.spec), "e": str(frame.e1), "e2": str(frame.e2)}
    if ring.tabulated:
        out["cells"] = {f"{i}{j}": [str(x) for x in frame.cells[(i, j)]] for i, j in frame.cells}
    out["checks"] = [c.to_dict() for c in checks]
    out["holds"] = all(c.holds for c in checks)
    return out


def _need(cfg, name, default=None):
    text = getattr(cfg, name) or default
    if text is None:
        raise ConfigError(f"--{name} is required for {cfg.subcommand}")
    return text


def _cmd_verify_map(cfg, ring):
    m = map_from_literal(_need(cfg, "map"), ring)
    b = _sample_budget(cfg)
    out = {"report": "verify-map", "ring": str(ring.spec), "map": m.literal, "check": cfg.check}
    if cfg.check in ("additive", "endomorphism", "automorphism"):
        fn = {"additive": is_additive, "endomorphism": is_endomorphism, "automorphism": is_automorphism}[cfg.check]
        rep = fn(m, budget=b, seed=cfg.seed).to_dict()
        result = rep[cfg.check]
        out.update(result=rep, holds=result is True, unknown=result is None)
        return out
    dom = dv.IdentityDomain.default_for(ring, seed=cfg.seed, budget=b)
    g = map_from_literal(_need(cfg, "g", "identity"), ring)
    alpha = map_from_literal(_need(cfg, "alpha", "identity"), ring)
    if cfg.check == "skew-semi":
        rep = dv.check_mult_skew_semi_derivation(m, g, alpha, dom)
    elif cfg.check == "generalized":
        d = map_from_literal(_need(cfg, "d", "zero"), ring)
        rep = dv.check_mult_generalized_ssd(m, d, g, alpha, dom)
        out["d"] = d.literal
    elif cfg.check == "semi":
        rep = dv.check_mult_semi_derivation(m, g, dom)
    elif cfg.check == "skew":
        rep = dv.check_mult_skew_derivation(m, alpha, dom)
    else:
        rep = dv.check_mult_derivation(m, dom)
    if cfg.check in ("skew-semi", "generalized", "semi"):
        out["g"] = g.literal
    if cfg.check in ("skew-semi", "generalized", "skew"):
        out["alpha"] = alpha.literal
    out.update(result=rep.to_dict(), holds=rep.holds, unknown=False)
    return out


def _cmd_check_assumptions(cfg, ring):
    frame = _frame_for(ring, cfg.idempotent)
    g = map_from_literal(_need(cfg, "g", "identity"), ring)
    family = cfg.hypothesis or "standing"
    d = map_from_literal(cfg.d, ring) if cfg.d else None
    rep = check_family(family, g, frame, d=d)
    out = {"report": "assumptions", "ring": str(ring.spec), "e": str(frame.e1), "g": g.literal,
           "hypothesis": family}
    if d is not None:
        out["d"] = d.literal
    out.update(result=rep.to_dict(), holds=rep.overall)
    return out


def _search_out(rep, cfg):
    out = rep.to_dict(timing=cfg.timing)
    out["holds"] = rep.verdict in ("confirmed", "none-found")
    return out


def _cmd_search(cfg, ring):
    g = map_from_literal(_need(cfg, "g", "identity"), ring)
    alpha = map_from_literal(_need(cfg, "alpha", "identity"), ring)
    kw = dict(g_family=[g], alpha_family=[alpha], hypothesis=cfg.hypothesis or "none")
    if cfg.d:
        kw["d_family"] = [map_from_literal(cfg.d, ring)]
    sc = _search_config(cfg, ring, **kw)
    if sc.target == "generalized":
        rep = verify_generalized_theorem(sc, kind="search")
    else:
        rep = verify_additivity_theorem(sc, kind="search")
    return _search_out(rep, cfg)


def _families(cfg, ring):
    return dict(g_family=_family(cfg.g_family, ring, "identity"),
                alpha_family=_family(cfg.alpha_family, ring, "all-automorphisms"),
                hypothesis=cfg.hypothesis or "standing")


def _cmd_verify_theorem(cfg, ring):
    sc = _search_config(cfg, ring, **_families(cfg, ring))
    rep = verify_generalized_theorem(sc) if sc.target == "generalized" else verify_additivity_theorem(sc)
    return _search_out(rep, cfg)


def _cmd_hunt(cfg, ring):
    return _search_out(counterexample_hunt(_search_config(cfg, ring, **_families(cfg, ring))), cfg)


def _cmd_reproduce(cfg, ring):
    out = {"ring": str(ring.spec), **reproduce_worked_examples(seed=cfg.seed, budget=_sample_budget(cfg))}
    out["holds"] = out["all_match"]
    return out


_COMMANDS = {
    "ring": _cmd_ring, "idempotents": _cmd_idempotents, "peirce": _cmd_peirce, "verify-map": _cmd_verify_map,
    "check-assumptions": _cmd_check_assumptions, "search": _cmd_search, "verify-theorem": _cmd_verify_theorem,
    "hunt": _cmd_hunt, "reproduce-examples": _cmd_reproduce,
}


def run(cfg: CliConfig) -> tuple[int, dict]:
    """Dispatch ``cfg`` and return ``(exit status, report dict)``."""
    ring = make_ring(cfg.ring_spec)
    report = _COMMANDS[cfg.subcommand](cfg, ring)
    return (EXIT_OK if report["holds"] else EXIT_NEGATIVE), report


# --------------------------------------------------------------------------
# rendering


def to_json_line(report: dict) -> str:
    return json.dumps(report, separators=(",", ":"))


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def _is_flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (list, dict)) for x in v)


def _render(value, indent: int, lines: list) -> None:
    pad = "  " * indent
    if isinstance(value, dict):
        for key, v in value.items():
            if isinstance(v, dict) and v:
                lines.append(f"{pad}{key}:")
                _render(v, indent + 1, lines)
            elif isinstance(v, list) and v and not _is_flat(v):
                lines.append(f"{pad}{key}: ({len(v)})")
                _render(v, indent + 1, lines)
            elif isinstance(v, list):
                lines.append(f"{pad}{key}: [{', '.join(_scalar(x) for x in v)}]")
            elif isinstance(v, dict):
                lines.append(f"{pad}{key}: {{}}")
            else:
                lines.append(f"{pad}{key}: {_scalar(v)}")
    else:
        for item in value:
            if isinstance(item, dict):
                sub: list = []
                _render(item, indent + 1, sub)
                lines.append(f"{pad}- {sub[0].strip()}" if sub else f"{pad}- {{}}")
                lines.extend(sub[1:])
            elif isinstance(item, list):
                lines.append(f"{pad}- [{', '.join(_scalar(x) for x in item)}]")
            else:
                lines.append(f"{pad}- {_scalar(item)}")


def _headline(report: dict) -> str:
    kind = report.get("report", "report")
    verdict = report.get("theorem_verdict")
    if verdict is None:
        verdict = "holds" if report.get("holds") else "fails"
    where = report.get("ring", "")
    return f"{kind} [{where}]: {verdict}"


def render_text(report: dict) -> str:
    """Human-readable rendering computed only from the report dict.

    ``render_text(json.loads(to_json_line(r)))`` equals ``render_text(r)``.
    """
    lines = [_headline(report)]
    body = {k: v for k, v in report.items() if k != "report"}
    _render(body, 1, lines)
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
        status, report = run(cfg)
    except SystemExit as exc:  # argparse usage errors and --help
        return int(exc.code or 0)
    except (RingError, ValueError) as exc:
        print(f"ssdlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = to_json_line(report) + "\n" if cfg.format == "json-lines" else render_text(report)
    try:
        sys.stdout.write(text)
        sys.stdout.flush()
    except BrokenPipeError:
        sys.stderr.close()
    return status


if __name__ == "__main__":
    sys.exit(main())
