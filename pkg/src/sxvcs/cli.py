"""Command-line front end.

Exit codes: 0 success, 2 verification failure or refusal, 3 I/O error,
4 usage or malformed input.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path

from . import existence, imaging, oracle
from .access import StructureParseError, forbidden_family, format_set, parse_structure, qualified_matrix, to_mask
from .builder2n import build_optimal_2n
from .gf2 import BitMatrix, EnumerationTooLarge
from .scheme import (
    InconsistentSystem,
    LinearScheme,
    SchemeKind,
    check_security_pw,
    classify,
    scheme_from_json,
    scheme_to_dict,
    scheme_to_json,
)

EXIT_OK = 0
EXIT_FAIL = 2
EXIT_IO = 3
EXIT_USAGE = 4
EXHAUSTIVE_LIMIT = 20


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_IO) from None


def _write(path: str | None, data: str | bytes) -> None:
    if path is None:
        sys.stdout.write(data if isinstance(data, str) else data.decode())
        return
    try:
        p = Path(path)
        if isinstance(data, bytes):
            p.write_bytes(data)
        else:
            p.write_text(data, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}", EXIT_IO) from None


def _load_structure(path: str):
    try:
        s = parse_structure(_read_text(path))
    except StructureParseError as exc:
        raise CliError(f"{path}: {exc}", EXIT_USAGE) from None
    for w in s.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return s


def _load_scheme(path: str) -> tuple[LinearScheme, dict]:
    text = _read_text(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON ({exc.msg})", EXIT_USAGE) from None
    try:
        return scheme_from_json(text), data
    except InconsistentSystem as exc:
        raise CliError(f"{path}: {exc}", EXIT_FAIL) from None
    except (ValueError, TypeError) as exc:
        raise CliError(f"{path}: {exc}", EXIT_USAGE) from None


def _read_image(path: str) -> imaging.ShareImage:
    try:
        return imaging.read_pbm(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_IO) from None
    except imaging.PBMError as exc:
        raise CliError(f"{path}: {exc}", EXIT_USAGE) from None


def _write_image(img: imaging.ShareImage, path: str) -> None:
    _write(path, imaging.format_pbm(img))


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


# -- analyze ------------------------------------------------------------------------


def _verdict_or_refusal(fn, s) -> existence.ExistenceVerdict | str:
    try:
        return fn(s)
    except existence.ExistenceTooLarge as exc:
        return f"refused: {exc}"


def _verdict_text(v) -> str:
    if isinstance(v, str):
        return v
    if not v.exists:
        return f"no ({v.reason})"
    exact = "" if v.minimal_exact else " (upper bound)"
    return f"yes, minimal m = {v.minimal_m}{exact}"


def cmd_analyze(args) -> int:
    s = _load_structure(args.structure)
    fam = forbidden_family(s)
    e1 = _verdict_or_refusal(existence.exists_expansion1, s)
    es = _verdict_or_refusal(lambda st: existence.exists_sxvcs(st, fam), s)
    payload = {
        "n": s.n,
        "minimal_qualified": s.minimal_sets(),
        "maximal_forbidden": fam.maximal_sets(),
        "exists_expansion1": e1 if isinstance(e1, str) else e1.as_dict(),
        "exists_sxvcs": es if isinstance(es, str) else es.as_dict(),
    }
    lines = [
        f"participants: {s.n}",
        "minimal qualified: " + " ".join(format_set(q) for q in s.minimal_qualified),
        "maximal forbidden: " + " ".join(format_set(f) for f in fam.maximal_forbidden),
        f"expansion-1 scheme: {_verdict_text(e1)}",
        f"noise-free scheme: {_verdict_text(es)}",
    ]
    if not isinstance(es, str) and es.certificate is not None:
        lines.append("certificate B1: " + " ".join(es.certificate.to_strings()))
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


# -- build -----------------------------------------------------------------------------


def _pad_columns(cert: BitMatrix, m: int) -> BitMatrix:
    cols = cert.columns()
    extra = [cols[i % len(cols)] for i in range(m - len(cols))]
    return BitMatrix.from_columns(cols + extra, cert.nrows)


def _exhaustive_b1(s, m: int) -> BitMatrix | None:
    """First ``B1`` in lexicographic order with nonzero rows that passes the security test."""
    q = qualified_matrix(s)
    if q.t * m > EXHAUSTIVE_LIMIT:
        raise CliError(f"exhaustive search over {q.t}x{m} matrices exceeds 2^{EXHAUSTIVE_LIMIT}", EXIT_USAGE)
    fam = forbidden_family(s)
    zero = BitMatrix.zeros(q.t, m)
    for rows in itertools.product(range(1, 1 << m), repeat=q.t):
        b1 = BitMatrix(q.t, m, rows)
        try:
            cand = LinearScheme.build(s, [zero], [b1], q)
        except InconsistentSystem:
            continue
        if check_security_pw(cand, fam).passed:
            return b1
    return None


def _parse_b1(text: str, t: int) -> BitMatrix:
    rows = [r for r in text.replace(";", ",").split(",") if r.strip()]
    try:
        b1 = BitMatrix.from_strings([r.strip() for r in rows])
    except ValueError as exc:
        raise CliError(f"--b1: {exc}", EXIT_USAGE) from None
    if b1.nrows != t:
        raise CliError(f"--b1 has {b1.nrows} rows, the structure needs {t}", EXIT_USAGE)
    return b1


def _finish_build(args, s: LinearScheme) -> int:
    cls = classify(s)
    if cls.kind is not SchemeKind.SXVCS or not cls.perfect_white:
        for d in cls.diagnostics or [f"built scheme classifies as {cls.name}"]:
            print(f"error: {d}", file=sys.stderr)
        return EXIT_FAIL
    _write(args.out, scheme_to_json(s, cls))
    if args.out:
        print(f"wrote {args.out}: m={s.m}, class {cls.name}, average contrast {cls.contrast.average}")
    return EXIT_OK


def cmd_build(args) -> int:
    s = _load_structure(args.structure)
    q = qualified_matrix(s)
    if args.b1:
        b1 = _parse_b1(args.b1, q.t)
    elif args.exhaustive:
        if args.m is None:
            raise CliError("--exhaustive needs --m", EXIT_USAGE)
        b1 = _exhaustive_b1(s, args.m)
        if b1 is None:
            print(f"error: no valid B1 with m={args.m}", file=sys.stderr)
            return EXIT_FAIL
    else:
        try:
            v = existence.exists_sxvcs(s)
        except existence.ExistenceTooLarge as exc:
            raise CliError(str(exc), EXIT_FAIL) from None
        if not v.exists:
            print(f"error: no noise-free scheme exists: {v.reason}", file=sys.stderr)
            return EXIT_FAIL
        m = v.minimal_m if args.m is None else args.m
        if m < v.minimal_m:
            note = "" if v.minimal_exact else " (search bound, not proven minimal)"
            print(f"error: no valid B1 with m={m}; the smallest pixel expansion is {v.minimal_m}{note}", file=sys.stderr)
            return EXIT_FAIL
        b1 = _pad_columns(v.certificate, m)
    try:
        scheme = LinearScheme.build(s, [BitMatrix.zeros(q.t, b1.ncols)], [b1], q)
    except InconsistentSystem as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return _finish_build(args, scheme)


def cmd_build2n(args) -> int:
    if args.n < 2:
        raise CliError("--n must be at least 2", EXIT_USAGE)
    return _finish_build(args, build_optimal_2n(args.n))


# -- imaging -----------------------------------------------------------------------------


def cmd_encode(args) -> int:
    s, _ = _load_scheme(args.scheme)
    cls = classify(s)
    if not cls.is_scheme:
        for d in cls.diagnostics:
            print(f"error: {d}", file=sys.stderr)
        return EXIT_FAIL
    secret = _read_image(args.secret)
    if secret.width == 0 or secret.height == 0:
        raise CliError("secret image is empty", EXIT_USAGE)
    layout = imaging.SubpixelLayout.named(args.layout, s.m)
    shares = imaging.encode(secret, s, layout, seed=args.seed)
    out = Path(args.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CliError(f"cannot create {out}: {exc.strerror}", EXIT_IO) from None
    for i, sh in enumerate(shares, start=1):
        _write_image(sh, str(out / f"share_{i}.pbm"))
    print(f"wrote {len(shares)} shares of {shares[0].width}x{shares[0].height} to {out}")
    return EXIT_OK


def _parse_set(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace("{", "").replace("}", "").split(",") if x.strip()]
    except ValueError:
        raise CliError(f"bad participant set {text!r}", EXIT_USAGE) from None


def cmd_stack(args) -> int:
    shares = [_read_image(p) for p in args.shares]
    try:
        rec = imaging.stack(shares)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    _write_image(rec, args.out)
    payload = {"out": args.out, "width": rec.width, "height": rec.height}
    text = f"wrote {args.out} ({rec.width}x{rec.height})"
    if args.scheme:
        if not (args.secret and args.set):
            raise CliError("noise measurement needs --scheme, --secret and --set", EXIT_USAGE)
        s, _ = _load_scheme(args.scheme)
        secret = _read_image(args.secret)
        q = to_mask(_parse_set(args.set), s.n)
        layout = imaging.SubpixelLayout.named(args.layout, s.m)
        try:
            noise = {r: imaging.measure_noise(rec, secret, s, q, layout, r) for r in ("all", "black", "white")}
        except ValueError as exc:
            raise CliError(str(exc), EXIT_FAIL) from None
        payload["noise"] = {r: str(v) for r, v in noise.items()}
        text += "\nnoise: " + ", ".join(f"{r} {v}" for r, v in noise.items())
    _emit(args, payload, text)
    return EXIT_OK


# -- verify --------------------------------------------------------------------------------


def cmd_verify(args) -> int:
    s, data = _load_scheme(args.scheme)
    cls = classify(s)
    report = cls.contrast
    payload = {
        "class": cls.name,
        "contrast": report.as_dict(),
        "security": {"passed": cls.security.passed, "detail": cls.security.detail},
    }
    lines = [f"class: {cls.name}", f"n={s.n} m={s.m} k={s.k}"]
    for q, a in zip(report.sets, report.alpha):
        lines.append(f"  alpha{format_set(q)} = {a}")
    lines.append(f"average contrast: {report.average}")
    lines.append(f"minimum contrast: {report.minimum}")
    lines += [f"failure: {d}" for d in cls.diagnostics]
    code = EXIT_OK if cls.is_scheme else EXIT_FAIL
    stored = data.get("class")
    if stored is not None and stored != cls.name:
        lines.append(f"failure: stored class {stored} but scheme verifies as {cls.name}")
        code = EXIT_FAIL
    if args.brute_force:
        try:
            kind, pw = oracle.classify_scheme(s)
        except (oracle.OracleTooLarge, EnumerationTooLarge) as exc:
            raise CliError(f"brute force refused: {exc}", EXIT_USAGE) from None
        agree = kind is cls.kind and pw == cls.perfect_white
        payload["brute_force"] = {"class": kind.value + ("+PW" if pw else ""), "agrees": agree}
        lines.append(f"brute force: {kind.value}{'+PW' if pw else ''} ({'agrees' if agree else 'DISAGREES'})")
        if not agree:
            code = EXIT_FAIL
    payload["exit_code"] = code
    _emit(args, payload, "\n".join(lines))
    return code


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sxvcs", description="Noise-free XOR visual cryptography toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="existence report for an access structure")
    a.add_argument("--structure", required=True)
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_analyze)

    b = sub.add_parser("build", help="construct and verify a perfect-white scheme")
    b.add_argument("--structure", required=True)
    b.add_argument("--m", type=int)
    b.add_argument("--b1", help="explicit B1 as comma-separated row bit-strings")
    b.add_argument("--exhaustive", action="store_true", help="raw search over all B1 (small cases)")
    b.add_argument("--out")
    b.set_defaults(func=cmd_build)

    b2 = sub.add_parser("build2n", help="optimal (2,n) scheme")
    b2.add_argument("--n", type=int, required=True)
    b2.add_argument("--out")
    b2.set_defaults(func=cmd_build2n)

    e = sub.add_parser("encode", help="split a PBM secret into shares")
    e.add_argument("scheme")
    e.add_argument("secret")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--layout", choices=("strip", "block"), default="strip")
    e.add_argument("--out-dir", default=".")
    e.set_defaults(func=cmd_encode)

    st = sub.add_parser("stack", help="XOR shares together")
    st.add_argument("shares", nargs="+")
    st.add_argument("--out", required=True)
    st.add_argument("--scheme", help="measure noise against this scheme")
    st.add_argument("--secret")
    st.add_argument("--set", help="participants whose shares were stacked, e.g. 1,2")
    st.add_argument("--layout", choices=("strip", "block"), default="strip")
    st.add_argument("--json", action="store_true")
    st.set_defaults(func=cmd_stack)

    v = sub.add_parser("verify", help="re-check a scheme JSON")
    v.add_argument("scheme")
    v.add_argument("--brute-force", action="store_true")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
