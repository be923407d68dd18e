"""Command-line interface: module files, basis listings, Ext tables, verifiers.

Output is plain TSV with '#' header comment lines and is deterministic:
identical invocations produce byte-identical bytes.  Exit codes: 0 success,
1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass

from . import ext as ex
from . import lambda_algebra as la
from . import steenrod as st
from .f2linalg import BitMatrix
from .unstable import INF, FiniteUModule, FreeDescriptor, free_module, validate


@dataclass
class CommandResult:
    code: int  # 0 success, 1 verification failure, 2 usage/parse error
    stdout: str


class ModuleFileError(Exception):
    pass


def parse_module_file(text: str) -> FiniteUModule:
    """Parse the line-oriented module format.

    Grammar ('#' starts a comment):
        umodule NAME
        k INT            (or 'inf')
        maxdeg INT
        gen LABEL DEG
        sq J SRC = DST [+ DST]* | 0
    Unspecified actions are zero.  Raises ModuleFileError on syntax problems;
    the caller is responsible for running validate().
    """
    name = ""
    k: float | None = None
    maxdeg: int | None = None
    gens: list[tuple[str, int]] = []
    sq_lines: list[tuple[int, str, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "umodule":
                name = parts[1] if len(parts) > 1 else ""
            elif parts[0] == "k":
                k = INF if parts[1] in ("inf", "infinity") else int(parts[1])
            elif parts[0] == "maxdeg":
                maxdeg = int(parts[1])
            elif parts[0] == "gen":
                gens.append((parts[1], int(parts[2])))
            elif parts[0] == "sq":
                j = int(parts[1])
                src = parts[2]
                if parts[3] != "=":
                    raise ModuleFileError(f"line {lineno}: expected '='")
                rhs = " ".join(parts[4:])
                if rhs == "0":
                    targets: list[str] = []
                else:
                    targets = [x.strip() for x in rhs.split("+")]
                    if not all(targets):
                        raise ModuleFileError(f"line {lineno}: empty summand")
                sq_lines.append((j, src, targets))
            else:
                raise ModuleFileError(f"line {lineno}: unknown directive {parts[0]!r}")
        except (IndexError, ValueError) as exc:
            raise ModuleFileError(f"line {lineno}: {exc}") from exc
    if k is None or maxdeg is None:
        raise ModuleFileError("missing 'k' or 'maxdeg' declaration")
    if k is not INF and k < 0:
        raise ModuleFileError("k must be nonnegative")

    dims: dict[int, int] = {}
    labels: dict[int, list[str]] = {}
    position: dict[str, tuple[int, int]] = {}
    for label, deg in gens:
        if label in position:
            raise ModuleFileError(f"duplicate generator label {label!r}")
        if not (0 <= deg <= maxdeg):
            raise ModuleFileError(f"generator {label!r} degree {deg} outside [0, {maxdeg}]")
        position[label] = (deg, dims.get(deg, 0))
        dims[deg] = dims.get(deg, 0) + 1
        labels.setdefault(deg, []).append(label)

    mod = FiniteUModule(k=k, max_deg=maxdeg, dims=dims, labels=labels, name=name)
    dense: dict[tuple[int, int], list[list[int]]] = {}
    for j, src, targets in sq_lines:
        if src not in position:
            raise ModuleFileError(f"unknown source label {src!r}")
        d, col = position[src]
        if j < 0 or (k is not INF and j >= k):
            raise ModuleFileError(f"sq {j} out of range for k = {k}")
        if j >= d:
            raise ModuleFileError(f"sq {j} on degree {d} is determined, not declarable")
        td = 2 * d - j
        key = (j, d)
        if key not in dense:
            dense[key] = [[0] * dims.get(d, 0) for _ in range(dims.get(td, 0))]
        for tgt in targets:
            if tgt not in position:
                raise ModuleFileError(f"unknown target label {tgt!r}")
            tdeg, trow = position[tgt]
            if tdeg != td:
                raise ModuleFileError(
                    f"sq {j} {src}: target {tgt!r} has degree {tdeg}, expected {td}"
                )
            dense[key][trow][col] ^= 1
    for key, rows in dense.items():
        if not rows or not rows[0]:
            continue
        mat = BitMatrix.from_dense(rows)
        if not mat.is_zero():
            mod.action[key] = mat
    return mod


def render_module_file(mod: FiniteUModule, name: str) -> str:
    """Serialize a module in the file format (inverse of parse_module_file)."""
    lines = [f"umodule {name}"]
    lines.append("k inf" if mod.k is INF else f"k {int(mod.k)}")
    lines.append(f"maxdeg {mod.max_deg}")
    for d in mod.degrees():
        for label in mod.labels[d]:
            lines.append(f"gen {label} {d}")
    for (j, d) in sorted(mod.action):
        mat = mod.action[(j, d)].to_dense()
        td = 2 * d - j
        for c in range(mat.shape[1]):
            hits = [mod.labels[td][r] for r in range(mat.shape[0]) if mat[r, c]]
            if hits:
                lines.append(f"sq {j} {mod.labels[d][c]} = " + " + ".join(hits))
    return "\n".join(lines) + "\n"


def _fmt_word(w: tuple[int, ...]) -> str:
    return " ".join(f"l{i}" for i in w) if w else "1"


def _fmt_table(table: ex.ExtTable) -> str:
    lines = [f"# window s<={table.s_max} a<={table.a_max}", f"# via {table.via}"]
    lines.append("s\ta\tdim")
    for s, a, n in table.rows():
        lines.append(f"{s}\t{a}\t{n}")
    return "\n".join(lines) + "\n"


def _load_module(path: str) -> FiniteUModule:
    with open(path, encoding="utf-8") as fh:
        return parse_module_file(fh.read())


def _parse_k(text: str) -> float:
    return INF if text in ("inf", "infinity") else int(text)


def run(argv: list[str]) -> CommandResult:
    threads = os.environ.get("LAMBDAK_THREADS")
    if threads is not None:
        try:
            if int(threads) < 1:
                return CommandResult(2, "LAMBDAK_THREADS must be a positive integer\n")
        except ValueError:
            return CommandResult(2, "LAMBDAK_THREADS must be a positive integer\n")

    parser = argparse.ArgumentParser(prog="topsquares", add_help=True)
    sub = parser.add_subparsers(dest="cmd")

    p = sub.add_parser("adem", help="normalize a product of upper squares")
    p.add_argument("squares", nargs="+", metavar="SqN")

    p = sub.add_parser("lambda-basis", help="basis of a truncated lambda sphere complex")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=str, required=True)
    p.add_argument("--smax", type=int, default=None)
    p.add_argument("--tmax", type=int, default=None)

    p = sub.add_parser("free-basis", help="emit a free module as a module file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=str, required=True)
    p.add_argument("--maxdeg", type=int, required=True)

    p = sub.add_parser("ext", help="Ext tables")
    extsub = p.add_subparsers(dest="ext_cmd")
    q = extsub.add_parser("sphere")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--k", type=str, required=True)
    q.add_argument("--smax", type=int, default=None)
    q.add_argument("--amax", type=int, default=None)
    q = extsub.add_parser("module")
    q.add_argument("file")
    q.add_argument("--via", choices=["lambda", "resolution", "both"], default="lambda")
    q.add_argument("--smax", type=int, default=None)
    q.add_argument("--amax", type=int, default=None)

    p = sub.add_parser("resolve", help="minimal free resolution generator table")
    p.add_argument("file")
    p.add_argument("--max-s", type=int, required=True)
    p.add_argument("--maxdeg", type=int, default=None)

    p = sub.add_parser("verify", help="verification suite")
    vsub = p.add_subparsers(dest="verify_cmd")
    q = vsub.add_parser("d2")
    q.add_argument("--m", type=int, default=None)
    q.add_argument("--k", type=str, default=None)
    q.add_argument("--file", default=None)
    q.add_argument("--smax", type=int, default=None)
    q.add_argument("--amax", type=int, default=None)
    q.add_argument("--tmax", type=int, default=None)
    q = vsub.add_parser("ehp")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--k", type=int, required=True)
    q = vsub.add_parser("lower-adem")
    q.add_argument("--nmax", type=int, default=8)
    q = vsub.add_parser("stabilization")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--kmax", type=int, required=True)
    q.add_argument("--smax", type=int, default=3)
    q = vsub.add_parser("hdim")
    q.add_argument("file")

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return CommandResult(2 if exc.code else 0, "")

    try:
        return _dispatch(args)
    except ModuleFileError as exc:
        return CommandResult(2, f"parse error: {exc}\n")
    except (ValueError, OSError) as exc:
        return CommandResult(2, f"error: {exc}\n")


def _dispatch(args) -> CommandResult:
    if args.cmd == "adem":
        word = []
        for token in args.squares:
            if not token.startswith("Sq"):
                return CommandResult(2, f"expected SqN tokens, got {token!r}\n")
            word.append(int(token[2:]))
        elem = st.adem_normalize(tuple(word))
        if not elem:
            return CommandResult(0, "0\n")
        terms = sorted(elem, reverse=True)
        out = " + ".join(" ".join(f"Sq{j}" for j in w) if w else "1" for w in terms)
        return CommandResult(0, out + "\n")

    if args.cmd == "lambda-basis":
        k = _parse_k(args.k)
        words = la.lambda_k_m_basis(args.m, k, s_max=args.smax, t_max=args.tmax)
        return CommandResult(0, "".join(_fmt_word(w) + "\n" for w in words))

    if args.cmd == "free-basis":
        k = _parse_k(args.k)
        mod = free_module(FreeDescriptor(n=args.n, k=k, max_deg=args.maxdeg))
        ktxt = "inf" if k is INF else int(k)
        return CommandResult(0, render_module_file(mod, f"F_{ktxt}_{args.n}"))

    if args.cmd == "ext":
        if args.ext_cmd == "sphere":
            k = _parse_k(args.k)
            table = ex.ext_sphere(args.m, k, s_max=args.smax, a_max=args.amax)
            return CommandResult(0, _fmt_table(table))
        if args.ext_cmd == "module":
            mod = _load_module(args.file)
            issues = validate(mod)
            if issues:
                return CommandResult(1, "".join(f"invalid: {x}\n" for x in issues))
            s_max = args.smax if args.smax is not None else (
                mod.max_deg if mod.k is INF else int(mod.k)
            )
            a_max = args.amax if args.amax is not None else mod.max_deg
            if args.via == "lambda":
                return CommandResult(0, _fmt_table(ex.ext_via_lambda(mod, s_max, a_max)))
            if args.via == "resolution":
                return CommandResult(0, _fmt_table(ex.ext_via_resolution(mod, s_max, a_max)))
            t1 = ex.ext_via_lambda(mod, s_max, a_max)
            t2 = ex.ext_via_resolution(mod, s_max, a_max)
            out = _fmt_table(t1) + _fmt_table(t2)
            if not t1.agrees_with(t2):
                return CommandResult(1, out + "# MISMATCH between lambda and resolution\n")
            return CommandResult(0, out + "# tables agree\n")
        return CommandResult(2, "usage: topsquares ext {sphere,module} ...\n")

    if args.cmd == "resolve":
        mod = _load_module(args.file)
        issues = validate(mod)
        if issues:
            return CommandResult(1, "".join(f"invalid: {x}\n" for x in issues))
        maxdeg = args.maxdeg if args.maxdeg is not None else mod.max_deg
        res = ex.minimal_resolution(mod, s_max=args.max_s, max_deg=maxdeg)
        lines = [f"# window s<={args.max_s} a<={maxdeg}", "s\ta\tgens"]
        for (s, a), n in sorted(res.generator_counts().items()):
            lines.append(f"{s}\t{a}\t{n}")
        return CommandResult(0, "\n".join(lines) + "\n")

    if args.cmd == "verify":
        return _dispatch_verify(args)

    return CommandResult(2, "usage: topsquares COMMAND ... (see --help)\n")


def _dispatch_verify(args) -> CommandResult:
    if args.verify_cmd == "d2":
        # d^2 = 0 is asserted during construction; building is the check
        if args.file is not None:
            mod = _load_module(args.file)
            issues = validate(mod)
            if issues:
                return CommandResult(1, "".join(f"invalid: {x}\n" for x in issues))
            a_max = args.amax if args.amax is not None else mod.max_deg
            s_max = args.smax if args.smax is not None else (
                a_max if mod.k is INF else int(mod.k) + 1
            )
            la.module_complex(mod, s_max=s_max, a_max=a_max)
            return CommandResult(0, "d2 ok\n")
        if args.m is None or args.k is None:
            return CommandResult(2, "verify d2 needs --file or both --m and --k\n")
        k = _parse_k(args.k)
        if k is INF and args.tmax is None:
            return CommandResult(2, "verify d2 with k inf needs --tmax\n")
        la.sphere_complex(args.m, k, s_max=args.smax, t_max=args.tmax)
        return CommandResult(0, "d2 ok\n")

    if args.verify_cmd == "ehp":
        ok = ex.ehp_cochain_check(args.m, args.k) and ex.ehp_sphere_euler_check(args.m, args.k)
        return CommandResult(0 if ok else 1, "ehp ok\n" if ok else "ehp FAILED\n")

    if args.verify_cmd == "lower-adem":
        bad = []
        for n in range(1, args.nmax + 1):
            for j in range(0, n):
                for i in range(0, 2 * n - j):
                    if not st.verify_lower_adem(i, j, n):
                        bad.append((i, j, n))
        if bad:
            return CommandResult(1, "".join(f"fails at {t}\n" for t in bad))
        return CommandResult(0, "lower-adem ok\n")

    if args.verify_cmd == "stabilization":
        from .unstable import sphere

        window = max(args.m, args.n) + 1
        mod = sphere(args.m, INF, max_deg=window)
        report = ex.stabilization_check(
            mod, args.n, range(0, args.kmax + 1), s_max=args.smax
        )
        if report:
            return CommandResult(1, "".join(x + "\n" for x in report))
        return CommandResult(0, "stabilization ok\n")

    if args.verify_cmd == "hdim":
        mod = _load_module(args.file)
        issues = validate(mod)
        if issues:
            return CommandResult(1, "".join(f"invalid: {x}\n" for x in issues))
        report = ex.hdim_check(mod)
        if report:
            return CommandResult(1, "".join(x + "\n" for x in report))
        return CommandResult(0, "hdim ok\n")

    return CommandResult(2, "usage: topsquares verify {d2,ehp,lower-adem,stabilization,hdim}\n")


def main() -> None:
    result = run(sys.argv[1:])
    sys.stdout.write(result.stdout)
    sys.exit(result.code)


if __name__ == "__main__":
    main()
