"""Command-line front end: check, gen, represent, sample and corpus runs."""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from typing import Sequence

from dimscale.errors import DimScaleError, ParseError, PreconditionError, SizeGuardError
from dimscale.espalier import (
    ESP_AXIOMS,
    drng,
    gen_equipotency,
    gen_group_action,
    gen_subspace_lattice,
    named_generators,
    validate_espalier,
)
from dimscale.monoid import DEFAULT_MAX_SIZE, MonoidTable, validate_pcm
from dimscale.scale import AXIOMS, DEFAULT_GAMMA_CAP, check_scale, finitary_unit, type_decomposition
from dimscale.targets import TYPE_KIND, chain, make_function_scale, product_scale, sample_checks, two_gamma
from dimscale.textio import emit, load
from dimscale.values import Ordinal, ValueMonoid

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(DimScaleError):
    pass


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _line(name: str, ok: bool, witness: str = "") -> str:
    return f"{name} {_verdict(ok)}" + (f": {witness}" if witness and not ok else "")


# -- check ----------------------------------------------------------------------

def check_scale_lines(t: MonoidTable, max_size: int) -> tuple[list[str], bool]:
    out = [f"size {t.n}"]
    pcm = validate_pcm(t, max_size)
    out.append(_line("pcm", pcm.ok, "; ".join(str(v) for v in pcm.violations[:3])))
    if not pcm.ok:
        return out, False
    rep = check_scale(t, max_size)
    for ax in AXIOMS:
        v = rep.verdicts[ax]
        out.append(_line(ax, v.ok, str(v.witness)))
    out.append(_line("route-M", rep.m_route))
    out.append(_line("route-N", rep.n_route))
    return out, rep.ok


def check_lines(obj, max_size: int) -> tuple[list[str], bool]:
    if isinstance(obj, MonoidTable):
        lines, ok = check_scale_lines(obj, max_size)
        return ["kind pcm"] + lines, ok
    rep = validate_espalier(obj, max_size)
    out = ["kind esp", f"size {obj.n}"]
    for ax in ESP_AXIOMS:
        v = rep.verdicts[ax]
        out.append(_line(ax, v.ok, v.witness))
    if not rep.ok:
        return out, False
    q = drng(obj)
    out.append("drng " + " ".join(q.scale.labels))
    lines, ok = check_scale_lines(q.scale, max_size)
    return out + ["drng-" + s for s in lines], ok


# -- represent ------------------------------------------------------------------

def represent_lines(t: MonoidTable, gamma_cap: int) -> tuple[list[str], bool]:
    from dimscale.represent import epsilon_table, omega_atoms, roundtrip, verify_embedding

    atoms = omega_atoms(t)
    td = type_decomposition(t)
    E = finitary_unit(t)
    out = [f"atoms {len(atoms)}"]
    for a in atoms:
        members = " ".join(t.labels[x] for x in sorted(a.projection.range_ideal))
        out.append(f"atom:{a.index} type:{a.type} range: {members}")
    for name, part in (("S_I", td.S_I), ("S_II", td.S_II), ("S_III", td.S_III)):
        out.append(f"{name} " + " ".join(t.labels[x] for x in sorted(part)))
    out.append("unit " + " ".join(t.labels[e] for e in E))
    for x, f in enumerate(epsilon_table(t, E, gamma_cap)):
        out.append(f"element {t.labels[x]}")
        out += ["  " + s for s in f.lines()]
    ver = verify_embedding(t, E, gamma_cap)
    for name, c in ver.clauses.items():
        out.append(_line(f"verify {name}", c.ok, c.witness))
    rt = roundtrip(t, E, gamma_cap)
    out.append(_line("roundtrip", rt.ok, rt.detail))
    return out, ver.ok and rt.ok


def _as_scale(obj, max_size: int) -> MonoidTable:
    if isinstance(obj, MonoidTable):
        return obj
    rep = validate_espalier(obj, max_size)
    if not rep.ok:
        raise PreconditionError(f"espalier fails {', '.join(rep.failures())}")
    return drng(obj).scale


# -- gen ------------------------------------------------------------------------

def _ints(args: Sequence[str], count: int, name: str) -> list[int]:
    if len(args) != count:
        raise UsageError(f"{name} takes {count} integer argument(s)")
    try:
        return [int(a) for a in args]
    except ValueError:
        raise UsageError(f"{name}: arguments must be integers") from None


def parse_point(text: str) -> tuple[str, ValueMonoid]:
    """``TYPE[:N=bound][:g=gamma]``, e.g. ``I:N=3``, ``III:g=1``, ``II:g=w``."""
    tag, *opts = text.split(":")
    if tag not in TYPE_KIND:
        raise UsageError(f"unknown point type {tag!r}")
    bound = gamma = None
    for opt in opts:
        key, _, val = opt.partition("=")
        try:
            if key == "N":
                bound = Fraction(val)
            elif key == "g":
                gamma = Ordinal.parse(val)
            else:
                raise UsageError(f"unknown point option {key!r}")
        except (ValueError, PreconditionError):
            raise UsageError(f"bad point option {opt!r}") from None
    try:
        return tag, ValueMonoid(TYPE_KIND[tag], bound=bound, gamma=gamma)
    except PreconditionError as exc:
        raise UsageError(str(exc)) from None


def generate(name: str, args: Sequence[str], max_size: int):
    if name == "equipotency":
        (n,) = _ints(args, 1, name)
        return gen_equipotency(n)
    if name == "two-gamma":
        (g,) = _ints(args, 1, name)
        if not 0 <= g <= 8:
            raise UsageError("two-gamma needs 0 <= gamma <= 8")
        return two_gamma(g)
    if name == "chain":
        (n,) = _ints(args, 1, name)
        if not 0 <= n < max_size:
            raise UsageError(f"chain needs 0 <= n < {max_size}")
        return chain(n)
    if name == "subspace":
        q, n = _ints(args, 2, name)
        return gen_subspace_lattice(q, n)
    if name == "group-action":
        if len(args) != 3:
            raise UsageError("group-action takes N GROUP POWER")
        n, power = _ints([args[0], args[2]], 2, name)
        return gen_group_action(n, named_generators(n, args[1]), power)
    if name == "function":
        if not args:
            raise UsageError("function takes one point description per point (TYPE[:N=..][:g=..])")
        points = [parse_point(a) for a in args]
        fs = make_function_scale([p[0] for p in points], [p[1] for p in points])
        if not fs.enumerable:
            raise UsageError("function scale is not enumerable")
        return fs.table
    if name == "product":
        if not args:
            raise UsageError("product takes generator names like chain/2 two-gamma/1")
        parts = []
        for a in args:
            gname, *gargs = a.split("/")
            part = generate(gname, gargs, max_size)
            if not isinstance(part, MonoidTable):
                raise UsageError("product factors must be scales")
            parts.append(part)
        return product_scale(parts, max_size)
    raise UsageError(f"unknown generator {name!r}")


GENERATORS = ("equipotency", "two-gamma", "chain", "subspace", "group-action", "function", "product")


# -- commands -------------------------------------------------------------------

def cmd_check(ns) -> int:
    obj = load(ns.path)
    lines, ok = check_lines(obj, ns.max_size)
    lines.append(f"result {_verdict(ok)}")
    print("\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_gen(ns) -> int:
    obj = generate(ns.generator, ns.args, ns.max_size)
    sys.stdout.write(emit(obj))
    return EXIT_OK


def cmd_represent(ns) -> int:
    obj = load(ns.path)
    lines, ok = check_lines(obj, ns.max_size)
    if not ok:
        print("\n".join(lines + ["result FAIL"]))
        return EXIT_FAIL
    t = _as_scale(obj, ns.max_size)
    rep, ok = represent_lines(t, ns.gamma_cap)
    print("\n".join(rep + [f"result {_verdict(ok)}"]))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_sample(ns) -> int:
    points = [parse_point(a) for a in ns.points]
    fs = make_function_scale([p[0] for p in points], [p[1] for p in points])
    rep = sample_checks(fs, ns.samples, ns.seed)
    out = [f"points {' '.join(ns.points)}", f"seed {ns.seed}"]
    for name, count in rep.checked.items():
        bad = sum(1 for v in rep.violations if v[0] == name)
        out.append(f"{name} checked {count} violations {bad}")
    out.append("M2 not checked: completeness is out of reach of sampling")
    out.append(f"result {_verdict(rep.ok)}")
    print("\n".join(out))
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_corpus(ns) -> int:
    if ns.write:
        from dimscale.corpus import write_corpus
        for path in write_corpus(ns.directory):
            print(f"wrote {os.path.basename(path)}", file=sys.stderr)
    names = sorted(f for f in os.listdir(ns.directory) if f.endswith((".pcm", ".esp")))
    if not names:
        raise UsageError(f"no instance files in {ns.directory}")
    worst = EXIT_OK
    out = []
    for name in names:
        out.append(f"== {name}")
        obj = load(os.path.join(ns.directory, name))
        lines, ok = check_lines(obj, ns.max_size)
        out += lines
        if ok:
            rep, ok = represent_lines(_as_scale(obj, ns.max_size), ns.gamma_cap)
            out += rep
        out.append(f"result {_verdict(ok)}")
        if not ok:
            worst = EXIT_FAIL
    out.append(f"files {len(names)} result {_verdict(worst == EXIT_OK)}")
    print("\n".join(out))
    return worst


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-size", type=int, default=DEFAULT_MAX_SIZE)
    common.add_argument("--gamma-cap", type=int, default=DEFAULT_GAMMA_CAP)
    common.add_argument("--samples", type=int, default=10_000)
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="dimscale", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("check", parents=[common], help="validate a pcm or esp file")
    p.add_argument("path")
    p.set_defaults(func=cmd_check)
    p = sub.add_parser("gen", parents=[common], help=f"generate an instance: {', '.join(GENERATORS)}")
    p.add_argument("generator")
    p.add_argument("args", nargs="*")
    p.set_defaults(func=cmd_gen)
    p = sub.add_parser("represent", parents=[common], help="print the functional representation")
    p.add_argument("path")
    p.set_defaults(func=cmd_represent)
    p = sub.add_parser("sample", parents=[common], help="sampled checks on a rational function scale")
    p.add_argument("points", nargs="+")
    p.set_defaults(func=cmd_sample)
    p = sub.add_parser("corpus", parents=[common], help="check and represent every file in a directory")
    p.add_argument("directory")
    p.add_argument("--write", action="store_true", help="regenerate the built-in corpus first")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return ns.func(ns)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, PreconditionError, SizeGuardError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DimScaleError as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
