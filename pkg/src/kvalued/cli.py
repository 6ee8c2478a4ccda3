"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 verification failure,
3 a size cap was hit.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .core import (DEFAULT_CAP, NAUTOMATON, TRANSDUCER, CapExceeded, Morphism,
                   canonical_completion, trim, verify_morphism)
from .decompose import NotKValued, decompose_k_valued, morphic_decompose
from .lagsep import lag_sep_covering, select_psi
from .lexorder import order_from_flag
from .multiskim import characteristic_form, multi_skim, skim_layers
from .oracle import (ambiguity_up_to, behaviour, count_successful, equivalent_up_to,
                     eval_relation, eval_series, words_up_to)
from .textio import ParseError, read_machine, serialize_machine, write_machine


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@dataclass
class RunReport:
    command: str
    params: dict
    stages: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def lines(self) -> list[str]:
        out = [f"command\t{self.command}"]
        out += [f"param\t{k}\t{v}" for k, v in self.params.items()]
        out += [f"stage\t{k}\t{s}\t{t}" for k, (s, t) in self.stages.items()]
        out += [f"verdict\t{k}\t{'ok' if v else 'FAIL'}" for k, v in self.verdicts.items()]
        out.append(f"time\t{self.wall_time:.3f}s")
        return out


def show_word(u: str) -> str:
    return u or "_"


def show_value(v) -> str:
    if isinstance(v, frozenset):
        return "{" + ",".join(show_word(w) for w in sorted(v, key=lambda w: (len(w), w))) + "}"
    if isinstance(v, bool):
        return "1" if v else "0"
    return str(v)


def _emit(text: str, out: Optional[str]):
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_eval(args, report):
    m = read_machine(args.machine)
    for u in args.words:
        u = "" if u == "_" else u
        print(f"{show_word(u)}\t{show_value(behaviour(m, u))}")
    return 0


def cmd_oracle(args, report):
    m = read_machine(args.machine)
    ell = args.max_len
    if args.mode == "eval":
        for u in words_up_to(m.alphabet, ell):
            print(f"{show_word(u)}\t{show_value(behaviour(m, u))}")
        return 0
    if args.mode == "valuedness":
        if m.kind != TRANSDUCER:
            raise UsageError("valuedness needs a transducer")
        for u in words_up_to(m.alphabet, ell):
            print(f"{show_word(u)}\t{len(eval_relation(m, u))}")
        return 0
    if args.mode == "ambiguity":
        f = eval_series if m.kind == NAUTOMATON else count_successful
        for u in words_up_to(m.alphabet, ell):
            print(f"{show_word(u)}\t{f(m, u)}")
        amb = ambiguity_up_to(m, ell)
        report.verdicts[f"max_ambiguity={amb.value}"] = True
        return 0
    if args.other is None:
        raise UsageError("equiv needs a second machine")
    other = read_machine(args.other)
    alphabet = sorted(set(m.alphabet) | set(other.alphabet))
    for u in words_up_to(alphabet, ell):
        same = equivalent_up_to_word(m, other, u)
        print(f"{show_word(u)}\t{'same' if same else 'differ'}")
    ok, _ = equivalent_up_to(m, other, ell)
    report.verdicts["equivalent"] = ok
    return 0 if ok else 2


def equivalent_up_to_word(m1, m2, u) -> bool:
    if m1.kind == TRANSDUCER:
        return eval_relation(m1, u) == eval_relation(m2, u)
    return behaviour(m1, u) == behaviour(m2, u)


def cmd_skim(args, report):
    a = read_machine(args.machine)
    base = characteristic_form(a)
    order = order_from_flag(base, args.order)
    res = multi_skim(a, args.k, order, cap=args.cap_states)
    report.stages["skim"] = (res.machine.n_states, res.machine.n_transitions)
    report.verdicts["covering"] = verify_morphism(res.projection, "covering")
    _emit(serialize_machine(res.machine), args.out)
    if args.emit_layers:
        out = Path(args.emit_layers)
        out.mkdir(parents=True, exist_ok=True)
        layers, (rest, _) = skim_layers(res)
        for i, (layer, _) in enumerate(layers):
            write_machine(layer, out / f"layer_{i}.naut")
        write_machine(rest, out / "rest.naut")
    return 0 if all(report.verdicts.values()) else 2


def cmd_lagsep(args, report):
    t = read_machine(args.machine)
    order = order_from_flag(t, args.order)
    res = lag_sep_covering(t, args.n, order, cap=args.cap_states)
    report.stages["lagsep"] = (res.machine.n_states, res.machine.n_transitions)
    report.verdicts["covering"] = verify_morphism(res.projection, "covering")
    m = res.machine
    if args.select_psi:
        m, _ = select_psi(res)
    if args.trim:
        m, _ = trim(m)
    report.stages["emitted"] = (m.n_states, m.n_transitions)
    _emit(serialize_machine(m), args.out)
    return 0 if all(report.verdicts.values()) else 2


def parse_letter_map(path) -> dict[str, str]:
    """Lines ``b bb`` map a letter to a word (``-`` for the empty word)."""
    letter_map = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        tokens = line.split("#", 1)[0].split()
        if not tokens:
            continue
        if len(tokens) != 2:
            raise ParseError(f"{path}:{lineno}: expected 'LETTER WORD'")
        letter_map[tokens[0]] = "" if tokens[1] == "-" else tokens[1]
    return letter_map


def cmd_decompose(args, report):
    t = read_machine(args.machine)
    order = order_from_flag(t, args.order)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.morphism:
        letter_map = parse_letter_map(args.morphism)
        res = morphic_decompose(t, letter_map, args.k, check_len=args.max_len, N=args.n,
                                order=order, cap=args.cap_states)
        components, checks, metrics = res.components, res.checks, dict(res.base.metrics)
        report.params["K"] = res.K
        for i, c in enumerate(components):
            metrics[f"morphic_component_{i}"] = (c.n_states, c.n_transitions)
    else:
        res = decompose_k_valued(t, args.k, N=args.n, order=order, check_len=args.max_len,
                                 cap=args.cap_states)
        components, checks, metrics = res.components, res.checks, res.metrics
        for i, mor in enumerate(res.morphisms):
            checks[f"component_{i}_immersion"] = verify_morphism(mor, "immersion")
    for i, c in enumerate(components):
        write_machine(c, out / f"component_{i}.trans")
    (out / "metrics.txt").write_text("".join(f"{k}\t{s}\t{n}\n" for k, (s, n) in metrics.items()))
    report.stages.update(metrics)
    report.verdicts.update(checks)
    return 0 if all(checks.values()) else 2


def read_map(path, source, target) -> Morphism:
    """Lines ``state SRC TGT`` (state names) and ``trans I J`` (transition ids)."""
    smap: dict[int, int] = {}
    tmap: dict[int, int] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        tokens = line.split("#", 1)[0].split()
        if not tokens:
            continue
        try:
            if tokens[0] == "state" and len(tokens) == 3:
                smap[source.state_index(tokens[1])] = target.state_index(tokens[2])
            elif tokens[0] == "trans" and len(tokens) == 3:
                tmap[int(tokens[1])] = int(tokens[2])
            else:
                raise ValueError
        except ValueError:
            raise ParseError(f"{path}:{lineno}: bad map line") from None
    if sorted(smap) != list(range(source.n_states)) or sorted(tmap) != list(range(source.n_transitions)):
        raise ParseError(f"{path}: map is not total on the source")
    return Morphism(source, target, tuple(smap[i] for i in range(source.n_states)),
                    tuple(tmap[i] for i in range(source.n_transitions)))


def cmd_verify(args, report):
    source, target = read_machine(args.source), read_machine(args.target)
    f = read_map(args.map, source, target)
    if args.kind == "immersion":
        f = canonical_completion(f)
    ok = verify_morphism(f, args.kind)
    report.verdicts[args.kind] = ok
    print(f"{args.kind}\t{'ok' if ok else 'FAIL'}")
    return 0 if ok else 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-len", type=int, default=8, help="oracle word-length bound")
    common.add_argument("--cap-states", type=int, default=DEFAULT_CAP)
    common.add_argument("--order", default="file", help="file | reverse | perm:<ids>")
    common.add_argument("--seed", type=int, default=0, help="accepted for reproducible scripts")
    common.add_argument("--report", action="store_true", help="print a run report on stderr")

    p = _Parser(prog="kvalued", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("eval", parents=[common], help="behaviour on given words")
    s.add_argument("machine")
    s.add_argument("words", nargs="+", help="'_' is the empty word")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("oracle", parents=[common], help="brute-force tables")
    s.add_argument("mode", choices=["eval", "valuedness", "ambiguity", "equiv"])
    s.add_argument("machine")
    s.add_argument("other", nargs="?")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("skim", parents=[common], help="multi-skimming covering")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--emit-layers", metavar="DIR")
    s.add_argument("--out")
    s.add_argument("machine")
    s.set_defaults(func=cmd_skim)

    s = sub.add_parser("lagsep", parents=[common], help="lag-separation covering")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--select-psi", action="store_true")
    s.add_argument("--trim", action="store_true")
    s.add_argument("--out")
    s.add_argument("machine")
    s.set_defaults(func=cmd_lagsep)

    s = sub.add_parser("decompose", parents=[common], help="k-valued decomposition")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--morphism", metavar="LETTER_MAP")
    s.add_argument("--out", required=True)
    s.add_argument("machine")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("verify", parents=[common], help="check a morphism file")
    kind = s.add_mutually_exclusive_group(required=True)
    kind.add_argument("--covering", dest="kind", action="store_const", const="covering")
    kind.add_argument("--morphism", dest="kind", action="store_const", const="morphism")
    kind.add_argument("--immersion", dest="kind", action="store_const", const="immersion")
    s.add_argument("source")
    s.add_argument("target")
    s.add_argument("map")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # --help exits 0, argument errors exit 1
        return exc.code if isinstance(exc.code, int) else 1
    report = RunReport(args.command, {k: v for k, v in vars(args).items()
                                      if k not in ("func", "command")})
    start = time.perf_counter()
    try:
        code = args.func(args, report)
    except (ParseError, UsageError, NotKValued, OSError, ValueError) as exc:
        print(f"kvalued: error: {exc}", file=sys.stderr)
        code = 2 if isinstance(exc, NotKValued) else 1
    except CapExceeded as exc:
        print(f"kvalued: {exc}", file=sys.stderr)
        code = 3
    report.wall_time = time.perf_counter() - start
    if args.report:
        print("\n".join(report.lines()), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
