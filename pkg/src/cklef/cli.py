"""Command-line interface: document parsing, reports, and subcommands.

Input documents describe a transition matrix and named endomorphisms::

    # comments run to end of line
    n = 3
    A = 110 111 011

    [t1]
    1,1 <- 2,1
    2 <- 1

    [t2]
    3,2 <- e

Each block ``[<name><i>]`` lists the presentation pairs ``nu <- mu`` of
generator ``i`` of endomorphism ``<name>``; ``e`` is the empty word, and a
bare digit string like ``233`` may abbreviate ``2,3,3`` when n <= 9.

Subcommands: validate, index, ktheory, k0map, lefschetz, zeta, compose,
power.  Exit codes: 0 success, 1 domain/validation failure, 2 parse error.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .endo import (
    GeometricEndomorphism,
    build_endomorphism,
    compose,
    path_map,
    power,
)
from .errors import CkError, CkSyntaxError, UnallowableWord, UnknownLetter
from .index import (
    fredholm_index_truncated,
    gamma_parts,
    index_polynomial_parts,
    index_series,
    index_series_counted,
    propagation,
)
from .ktheory import (
    generator_class,
    induced_k0,
    k_groups,
    k0_reduce,
    lefschetz_number,
    zeta_coefficients,
    zeta_reconstruct,
)
from .sft_core import TransitionMatrix, Word, is_allowable, validate_matrix
from .word_algebra import adjoint, multiply, support


# ---------------------------------------------------------------------------
# Document model and parser.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CkDocument:
    matrix: TransitionMatrix
    endos: dict[str, list[list[tuple[Word, Word]]]]

    def build(self, name: str) -> GeometricEndomorphism:
        return build_endomorphism(self.matrix, self.endos[name])

    def default_name(self) -> str:
        if not self.endos:
            raise CkError("document defines no endomorphism")
        return next(iter(self.endos))


_BLOCK_RE = re.compile(r"^\[([A-Za-z_][A-Za-z_0-9]*)\]$")


def _split_block_label(label: str, n: int, line_no: int) -> tuple[str, int]:
    """Split '<name><index>' taking the shortest trailing digit-run in 1..n.

    For n <= 9 this is simply the final digit, so names may themselves end
    in digits (as the power/compose emitters produce).
    """
    for cut in range(len(label) - 1, 0, -1):
        suffix = label[cut:]
        if not suffix.isdigit():
            break
        if 1 <= int(suffix) <= n:
            return label[:cut], int(suffix)
    raise CkSyntaxError(
        f"block [{label}] must end in a generator index 1..{n}", line_no, 1
    )


def _strip_comment(line: str) -> str:
    cut = line.find("#")
    return line if cut < 0 else line[:cut]


def _parse_word(text: str, n: int, line_no: int, col: int) -> Word:
    text = text.strip()
    if text == "e":
        return ()
    if "," in text:
        parts = text.split(",")
    elif text.isdigit() and n <= 9:
        parts = list(text)
    else:
        parts = [text]
    letters = []
    for part in parts:
        part = part.strip()
        if not part.isdigit():
            raise CkSyntaxError(f"expected a letter, got {part!r}", line_no, col)
        letter = int(part)
        if not 1 <= letter <= n:
            raise UnknownLetter(letter, (line_no, col))
        letters.append(letter)
    return tuple(letters)


def parse_document(text: str) -> CkDocument:
    """Parse the document format, attaching line/column positions to errors."""
    lines = text.splitlines()
    pos = 0

    def next_content() -> tuple[int, str] | None:
        nonlocal pos
        while pos < len(lines):
            stripped = _strip_comment(lines[pos]).strip()
            pos += 1
            if stripped:
                return pos, stripped
        return None

    got = next_content()
    if got is None:
        raise CkSyntaxError("empty document", 1, 1)
    line_no, line = got
    m = re.match(r"^n\s*=\s*(\d+)$", line)
    if not m:
        raise CkSyntaxError("expected 'n = <int>'", line_no, 1)
    n = int(m.group(1))

    got = next_content()
    if got is None:
        raise CkSyntaxError("expected 'A = <rows>'", line_no + 1, 1)
    line_no, line = got
    m = re.match(r"^A\s*=\s*(.+)$", line)
    if not m:
        raise CkSyntaxError("expected 'A = <rows>'", line_no, 1)
    row_texts = m.group(1).split()
    if len(row_texts) != n:
        raise CkSyntaxError(f"expected {n} rows, got {len(row_texts)}", line_no, 1)
    rows = []
    for r in row_texts:
        if len(r) != n or any(c not in "01" for c in r):
            raise CkSyntaxError(
                f"row {r!r} must be {n} characters of 0/1", line_no, 1
            )
        rows.append(tuple(int(c) for c in r))
    matrix = validate_matrix(rows)

    blocks: dict[str, dict[int, list[tuple[Word, Word]]]] = {}
    current: list[tuple[Word, Word]] | None = None
    while True:
        got = next_content()
        if got is None:
            break
        line_no, line = got
        bm = _BLOCK_RE.match(line)
        if bm:
            name, idx = _split_block_label(bm.group(1), n, line_no)
            per_endo = blocks.setdefault(name, {})
            if idx in per_endo:
                raise CkSyntaxError(
                    f"duplicate block [{name}{idx}]", line_no, 1
                )
            current = per_endo.setdefault(idx, [])
            continue
        if current is None:
            raise CkSyntaxError("expected a '[name<i>]' block header", line_no, 1)
        if "<-" not in line:
            raise CkSyntaxError("expected '<nu> <- <mu>'", line_no, 1)
        left, _, right = line.partition("<-")
        raw = lines[line_no - 1]
        nu = _parse_word(left, n, line_no, raw.find(left.strip()) + 1)
        mu_col = raw.find("<-") + 3
        mu = _parse_word(right, n, line_no, mu_col)
        for w, col in ((nu, 1), (mu, mu_col)):
            if not is_allowable(matrix, w):
                raise UnallowableWord(w, (line_no, col))
        current.append((nu, mu))

    endos: dict[str, list[list[tuple[Word, Word]]]] = {}
    for name, per_endo in blocks.items():
        missing = [i for i in range(1, n + 1) if i not in per_endo]
        if missing:
            raise CkSyntaxError(
                f"endomorphism {name!r} is missing generator blocks {missing}",
                len(lines),
                1,
            )
        endos[name] = [per_endo[i] for i in range(1, n + 1)]
    return CkDocument(matrix=matrix, endos=endos)


def format_word(w: Word) -> str:
    return "e" if not w else ",".join(str(x) for x in w)


def render_document(doc: CkDocument) -> str:
    out = [f"n = {doc.matrix.n}"]
    out.append("A = " + " ".join("".join(str(v) for v in row) for row in doc.matrix.rows))
    for name, pair_lists in doc.endos.items():
        for i, pairs in enumerate(pair_lists, start=1):
            out.append("")
            out.append(f"[{name}{i}]")
            for nu, mu in pairs:
                out.append(f"{format_word(nu)} <- {format_word(mu)}")
    return "\n".join(out) + "\n"


def document_of(
    matrix: TransitionMatrix, name: str, endo: GeometricEndomorphism
) -> CkDocument:
    return CkDocument(
        matrix=matrix, endos={name: [list(pairs) for pairs in endo.raw_images]}
    )


# ---------------------------------------------------------------------------
# Reports: aligned human text plus a round-trippable key-value rendering.
# ---------------------------------------------------------------------------

Value = "int | Fraction | str | bool | tuple[int, ...]"


@dataclass
class Report:
    command: str
    items: list[tuple[str, object]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def add(self, key: str, value) -> None:
        self.items.append((key, value))

    def warn(self, message: str) -> None:
        self.warnings.append(message)

    def render_text(self) -> str:
        lines = [f"command: {self.command}"]
        width = max((len(k) for k, _ in self.items), default=0)
        for key, value in self.items:
            lines.append(f"  {key.ljust(width)}  {_show(value)}")
        for w in self.warnings:
            lines.append(f"  warning: {w}")
        return "\n".join(lines) + "\n"

    def render_structured(self) -> str:
        lines = [f"command\tstr\t{self.command}"]
        for key, value in self.items:
            tag, text = _encode(value)
            lines.append(f"{key}\t{tag}\t{text}")
        for i, w in enumerate(self.warnings):
            lines.append(f"warning.{i}\tstr\t{w}")
        return "\n".join(lines) + "\n"


def _show(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, tuple):
        return "(" + ", ".join(str(v) for v in value) + ")"
    return str(value)


def _encode(value) -> tuple[str, str]:
    if isinstance(value, bool):
        return "bool", "true" if value else "false"
    if isinstance(value, int):
        return "int", str(value)
    if isinstance(value, Fraction):
        return "frac", f"{value.numerator}/{value.denominator}"
    if isinstance(value, tuple):
        return "ints", ",".join(str(int(v)) for v in value)
    return "str", str(value)


def parse_structured(text: str) -> dict[str, object]:
    """Inverse of :meth:`Report.render_structured`, bit-exact on values."""
    out: dict[str, object] = {}
    for raw in text.splitlines():
        if not raw.strip():
            continue
        key, tag, payload = raw.split("\t", 2)
        if tag == "int":
            out[key] = int(payload)
        elif tag == "bool":
            out[key] = payload == "true"
        elif tag == "frac":
            p, q = payload.split("/")
            out[key] = Fraction(int(p), int(q))
        elif tag == "ints":
            out[key] = tuple(int(v) for v in payload.split(",")) if payload else ()
        else:
            out[key] = payload
    return out


# ---------------------------------------------------------------------------
# Subcommand implementations.  Each returns a Report.
# ---------------------------------------------------------------------------


def _endo_from(doc: CkDocument, name: str | None) -> tuple[str, GeometricEndomorphism]:
    chosen = name or doc.default_name()
    if chosen not in doc.endos:
        raise CkError(f"no endomorphism named {chosen!r} in the document")
    return chosen, doc.build(chosen)


def cmd_validate(doc: CkDocument, args) -> Report:
    name, endo = _endo_from(doc, args.endo)
    report = Report(command="validate")
    report.add("endomorphism", name)
    report.add("n", doc.matrix.n)
    report.add("irreducible", doc.matrix.irreducible)
    report.add("k", endo.k)
    report.add("valid", endo.valid)
    for i in doc.matrix.alphabet:
        t = endo.image_element(i)
        rng = support(multiply(t, adjoint(t)))
        cylinders = " ".join(format_word(w) for w in sorted(rng.members))
        report.add(f"range.{i}", f"depth {rng.depth}: {cylinders}")
    if not endo.valid:
        report.warn("presentation fails the Cuntz-Krieger checks")
    return report


def _series_report(endo: GeometricEndomorphism, depth: int | None):
    if depth is not None:
        return index_series_counted(endo, depth)
    return index_series_counted(endo)


def cmd_index(doc: CkDocument, args) -> Report:
    name, endo = _endo_from(doc, args.endo)
    endo.require_valid()
    report = Report(command="index")
    report.add("endomorphism", name)
    bound = propagation(endo)
    report.add("propagation", bound)
    method = args.method
    series = None
    if method in ("series", "all"):
        series = _series_report(endo, args.depth)
        for k in sorted(series.per_k):
            report.add(f"index.k{k}", series.per_k[k])
        report.add("series.value", series.stabilized_value)
        report.add("series.depth", series.params["depth"])
    if method in ("gamma", "all"):
        psi = path_map(endo)
        m = args.m if args.m is not None else endo.k + bound
        shrink, stretch = gamma_parts(psi, m)
        report.add("gamma.m", m)
        report.add("gamma.shrink", shrink)
        report.add("gamma.stretch", stretch)
        report.add("gamma.value", shrink - stretch)
    if method in ("polynomial", "all"):
        n_param = args.N if args.N is not None else max(bound, 1)
        if args.m is not None:
            m = args.m
        else:
            # smallest admissible exponent for this presentation
            m = 1 + n_param + endo.k
        pos, neg = index_polynomial_parts(endo, m, n_param)
        report.add("polynomial.m", m)
        report.add("polynomial.N", n_param)
        report.add("polynomial.positive", pos)
        report.add("polynomial.negative", neg)
        report.add("polynomial.value", pos - neg)
    if method in ("fredholm", "all"):
        psi = path_map(endo)
        depth = args.depth if args.depth is not None else endo.k + 2 * bound + 2
        report.add("fredholm.depth", depth)
        report.add("fredholm.value", fredholm_index_truncated(psi, depth))
    return report


def _describe_group(rank: int, torsion: tuple[int, ...]) -> str:
    parts = ["Z"] * rank + [f"Z/{d}" for d in torsion]
    return " + ".join(parts) if parts else "0"


def cmd_ktheory(doc: CkDocument, args) -> Report:
    kt = k_groups(doc.matrix)
    report = Report(command="ktheory")
    report.add("invariant.factors", kt.invariant_factors)
    report.add("K0", _describe_group(kt.rank_k0_free, kt.torsion))
    report.add("K1", _describe_group(kt.rank_k1, ()))
    for i in doc.matrix.alphabet:
        cls = generator_class(kt, i)
        report.add(f"class.e{i}.free", cls.free)
        if cls.torsion:
            report.add(f"class.e{i}.torsion", cls.torsion)
    return report


def cmd_k0map(doc: CkDocument, args) -> Report:
    name, endo = _endo_from(doc, args.endo)
    endo.require_valid()
    ind = induced_k0(endo)
    report = Report(command="k0map")
    report.add("endomorphism", name)
    for r, row in enumerate(ind.on_generators, start=1):
        report.add(f"T.row{r}", row)
    for r, row in enumerate(ind.free_part, start=1):
        report.add(f"M0.row{r}", row)
    report.add("well.defined", True)
    return report


def _parse_k1_matrix(text: str, size: int):
    if text.strip() == "" and size == 0:
        return []
    rows = [r for r in text.split(";") if r.strip() != ""]
    out = [[int(v) for v in row.split(",")] for row in rows]
    if len(out) != size or any(len(r) != size for r in out):
        raise CkError(f"--k1-matrix must be {size}x{size} (rows ';'-separated)")
    return out


def cmd_lefschetz(doc: CkDocument, args) -> Report:
    name, endo = _endo_from(doc, args.endo)
    endo.require_valid()
    kt = k_groups(doc.matrix)
    report = Report(command="lefschetz")
    report.add("endomorphism", name)
    if args.k1_matrix is not None:
        m1 = _parse_k1_matrix(args.k1_matrix, kt.rank_k1)
        result = lefschetz_number(endo, k1_action=m1)
        series = index_series_counted(endo)
        report.add("mode", "supplied")
        report.add("trace.K0", result.trace_k0)
        report.add("trace.K1", result.trace_k1)
        report.add("lefschetz", result.value)
        report.add("index", series.stabilized_value)
        report.add(
            "theorem.check",
            "PASS" if result.value == series.stabilized_value else "FAIL",
        )
    else:
        result = lefschetz_number(endo)
        report.add("mode", "DERIVED")
        report.warn(
            "K1 trace DERIVED from the index via the Lefschetz identity, "
            "not computed independently"
        )
        report.add("trace.K0", result.trace_k0)
        report.add("trace.K1.derived", result.trace_k1)
        report.add("lefschetz", result.value)
        report.add("index", result.index)
    return report


def cmd_zeta(doc: CkDocument, args) -> Report:
    name, endo = _endo_from(doc, args.endo)
    endo.require_valid()
    kt = k_groups(doc.matrix)
    terms = args.terms
    report = Report(command="zeta")
    report.add("endomorphism", name)
    coeffs = zeta_coefficients(endo, terms)
    report.add("coefficients", tuple(coeffs))
    rf = zeta_reconstruct(coeffs, kt.rank_k1, kt.rank_k0_free)
    report.add("numerator", " ".join(str(c) for c in rf.numerator))
    report.add("denominator", " ".join(str(c) for c in rf.denominator))
    predicted = rf.expand(terms + 3)[terms + 1 :]
    report.add("predicted.next", " ".join(str(c) for c in predicted))
    return report


def _write_out(doc: CkDocument, args, report: Report) -> None:
    text = render_document(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        report.add("out", args.out)
    else:
        report.add("document", "\n" + text)


def cmd_compose(doc: CkDocument, args) -> Report:
    name_e, e = _endo_from(doc, args.endo)
    name_f, f = _endo_from(doc, getattr(args, "with"))
    composite = compose(e, f)
    report = Report(command="compose")
    out_name = args.name or f"{name_e}{name_f}"
    report.add("endomorphism", f"{name_e} after {name_f}")
    report.add("k", composite.k)
    _write_out(document_of(doc.matrix, out_name, composite), args, report)
    return report


def cmd_power(doc: CkDocument, args) -> Report:
    name, endo = _endo_from(doc, args.endo)
    result = power(endo, args.n)
    report = Report(command="power")
    out_name = args.name or f"{name}p{args.n}"
    report.add("endomorphism", f"{name}^{args.n}")
    report.add("k", result.k)
    _write_out(document_of(doc.matrix, out_name, result), args, report)
    return report


# ---------------------------------------------------------------------------
# Entry point.
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cklef",
        description="Lefschetz indices of geometric endomorphisms of Cuntz-Krieger algebras",
    )
    parser.add_argument("--structured", action="store_true",
                        help="emit the machine-readable key-value rendering")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("file", help="input document ('-' for stdin)")
        p.add_argument("--endo", help="endomorphism name (default: first in file)")

    p = sub.add_parser("validate", help="run the Cuntz-Krieger checks")
    common(p)
    p = sub.add_parser("index", help="Lefschetz index of the path map")
    common(p)
    p.add_argument("--method", choices=["series", "gamma", "polynomial", "fredholm", "all"],
                   default="all")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--depth", type=int, default=None)
    p = sub.add_parser("ktheory", help="K-groups of the algebra")
    p.add_argument("file")
    p = sub.add_parser("k0map", help="induced map on K0")
    common(p)
    p = sub.add_parser("lefschetz", help="Lefschetz number vs index")
    common(p)
    p.add_argument("--k1-matrix", dest="k1_matrix", default=None,
                   help="K1 action, rows ';'-separated, entries ','-separated")
    p = sub.add_parser("zeta", help="zeta coefficients and rational reconstruction")
    common(p)
    p.add_argument("--terms", type=int, default=5)
    p = sub.add_parser("compose", help="compose two endomorphisms into a new document")
    common(p)
    p.add_argument("--with", required=True, help="inner endomorphism name")
    p.add_argument("--out", default=None)
    p.add_argument("--name", default=None)
    p = sub.add_parser("power", help="iterate an endomorphism into a new document")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--name", default=None)
    return parser


_COMMANDS = {
    "validate": cmd_validate,
    "index": cmd_index,
    "ktheory": cmd_ktheory,
    "k0map": cmd_k0map,
    "lefschetz": cmd_lefschetz,
    "zeta": cmd_zeta,
    "compose": cmd_compose,
    "power": cmd_power,
}


def run(argv: Sequence[str], stdin_text: str | None = None) -> tuple[str, int]:
    """Run one CLI invocation; returns (output text, exit code)."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.file == "-":
            text = stdin_text if stdin_text is not None else sys.stdin.read()
        else:
            with open(args.file, "r", encoding="utf-8") as fh:
                text = fh.read()
        doc = parse_document(text)
    except (CkSyntaxError, UnknownLetter, UnallowableWord, OSError) as exc:
        return f"parse error: {exc}\n", 2
    try:
        report = _COMMANDS[args.subcommand](doc, args)
    except CkError as exc:
        return f"error: {exc}\n", 1
    out = report.render_structured() if args.structured else report.render_text()
    return out, 0


def main() -> None:
    out, code = run(sys.argv[1:])
    sys.stdout.write(out)
    sys.exit(code)
