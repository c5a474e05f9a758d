"""Command-line surface: encode, decode, inspect, bench, validate-bases."""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from pathlib import Path

import numpy as np

from . import codec, container, filterbank
from .codec import BASIS_CHOICES, CodecParams
from .errors import (
    ConstructionError,
    ContainerError,
    FormatError,
    HaarCodecError,
    ParameterError,
)

BENCH_COLUMNS = ("image", "mode", "levels", "quant", "bytes", "rate_pct", "psnr_db", "enc_ms", "dec_ms")

_EXIT_CODES = (
    (ParameterError, 2),
    (ConstructionError, 2),
    (FormatError, 3),
    (ContainerError, 4),
    (HaarCodecError, 1),
    (OSError, 5),
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="haarcodec",
        description="Adaptive 2x2 Haar wavelet image codec (.pgm/.ppm in, .ahc out).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    enc = sub.add_parser("encode", help="compress a binary PGM/PPM into an .ahc file")
    enc.add_argument("--input", required=True, help="input .pgm/.ppm path")
    enc.add_argument("--output", required=True, help="output .ahc path")
    enc.add_argument("--levels", type=int, default=2, help="decomposition levels (default 2)")
    enc.add_argument("--quant", type=int, default=64, help="detail quantization levels (default 64)")
    enc.add_argument("--basis", choices=BASIS_CHOICES, default="adaptive-block")
    enc.add_argument("--verify", action="store_true", help="decode the result and report PSNR")

    dec = sub.add_parser("decode", help="decompress an .ahc file back to PGM/PPM")
    dec.add_argument("path", help=".ahc path")
    dec.add_argument("--output", required=True, help="output .pgm/.ppm path")

    ins = sub.add_parser("inspect", help="print a container summary without decoding payloads")
    ins.add_argument("path", help=".ahc path")

    bench = sub.add_parser("bench", help="sweep a parameter grid over a corpus of PNM images")
    bench.add_argument("corpus", help="directory of .pgm/.ppm images")
    bench.add_argument("--output", help="CSV output path (default: stdout)")
    bench.add_argument("--levels", type=int, nargs="+", default=[1, 2, 3, 4])
    bench.add_argument("--quant", type=int, nargs="+", default=[64, 32, 16, 8])
    bench.add_argument("--basis", nargs="+", choices=BASIS_CHOICES, default=list(BASIS_CHOICES))

    val = sub.add_parser("validate-bases", help="print coefficient tables and orthogonality audits")
    val.add_argument("which", nargs="?", choices=["builtin"], default=None)
    val.add_argument("--as-printed", action="store_true",
                     help="audit the published tables instead of the corrected ones")
    val.add_argument("--family1", type=float, nargs=4, metavar=("LAMBDA", "A21", "A22", "A31"))
    val.add_argument("--angles", type=float, nargs=6,
                     metavar=("ALPHA1", "BETA1", "ALPHA2", "BETA2", "ALPHA3", "BETA3"))
    val.add_argument("--tol", type=float, default=1e-9)
    return parser


def cmd_encode(args) -> int:
    img = codec.load_image(Path(args.input).read_bytes())
    mode, fixed = codec.parse_basis_choice(args.basis)
    params = CodecParams(levels=args.levels, quant_levels=args.quant, mode=mode, fixed_basis=fixed)
    data = codec.encode_to_bytes(img, params)
    Path(args.output).write_bytes(data)
    if args.verify:
        recon = codec.decode_from_bytes(data)
        metrics = codec.compute_metrics(img, recon, len(data))
    else:
        metrics = codec.compute_metrics(img, img, len(data))
    print(f"compressed_bytes={metrics.compressed_bytes}")
    print(f"raw_bytes={metrics.raw_bytes}")
    print(f"rate_pct={metrics.compression_rate_pct:.2f}")
    if args.verify:
        psnr = "inf" if metrics.psnr_db == float("inf") else f"{metrics.psnr_db:.2f}"
        print(f"psnr_db={psnr}")
    return 0


def cmd_decode(args) -> int:
    img = codec.decode_from_bytes(Path(args.path).read_bytes())
    Path(args.output).write_bytes(codec.save_image(img))
    print(f"width={img.width}")
    print(f"height={img.height}")
    print(f"channels={img.channels}")
    return 0


def cmd_inspect(args) -> int:
    print(container.inspect(Path(args.path).read_bytes()))
    return 0


def _bench_rows(images, basis_names, levels_list, quant_list):
    rows = []
    for name, img in images:
        for basis in basis_names:
            mode, fixed = codec.parse_basis_choice(basis)
            for levels in levels_list:
                for quant in quant_list:
                    params = CodecParams(levels=levels, quant_levels=quant,
                                         mode=mode, fixed_basis=fixed)
                    t0 = time.perf_counter()
                    data = codec.encode_to_bytes(img, params)
                    t1 = time.perf_counter()
                    recon = codec.decode_from_bytes(data)
                    t2 = time.perf_counter()
                    m = codec.compute_metrics(img, recon, len(data))
                    psnr = "inf" if m.psnr_db == float("inf") else f"{m.psnr_db:.2f}"
                    rows.append({
                        "image": name,
                        "mode": basis,
                        "levels": levels,
                        "quant": quant,
                        "bytes": len(data),
                        "rate_pct": f"{m.compression_rate_pct:.2f}",
                        "psnr_db": psnr,
                        "enc_ms": f"{1000 * (t1 - t0):.1f}",
                        "dec_ms": f"{1000 * (t2 - t1):.1f}",
                    })
    order = {basis: i for i, basis in enumerate(BASIS_CHOICES)}
    rows.sort(key=lambda r: (r["image"], order[r["mode"]], r["levels"], r["quant"]))
    return rows


def _bench_aggregate(rows, images):
    """Per (levels, quant): average adaptive-vs-best-fixed overhead in points of raw size."""
    raw = {name: img.width * img.height * img.channels for name, img in images}
    cells = {}
    for r in rows:
        cells[(r["image"], r["mode"], r["levels"], r["quant"])] = r["bytes"]
    lines = []
    combos = sorted({(r["levels"], r["quant"]) for r in rows})
    for levels, quant in combos:
        for adaptive in ("adaptive-block", "adaptive-global"):
            deltas = []
            for name, _ in images:
                fixed = [
                    cells.get((name, f"set{k}", levels, quant)) for k in range(1, 5)
                ]
                here = cells.get((name, adaptive, levels, quant))
                if here is None or any(b is None for b in fixed):
                    continue
                deltas.append(100.0 * (here - min(fixed)) / raw[name])
            if deltas:
                lines.append(
                    f"# aggregate mode={adaptive} levels={levels} quant={quant} "
                    f"mean_overhead_pp={np.mean(deltas):.2f}"
                )
    return lines


def cmd_bench(args) -> int:
    corpus = Path(args.corpus)
    paths = sorted(p for p in corpus.glob("*") if p.suffix.lower() in (".pgm", ".ppm", ".pnm"))
    if not paths:
        raise ParameterError(f"no PNM images found in {corpus}")
    images = [(p.name, codec.load_image(p.read_bytes())) for p in paths]
    rows = _bench_rows(images, args.basis, args.levels, args.quant)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    if args.output:
        Path(args.output).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    for line in _bench_aggregate(rows, images):
        print(line, file=sys.stderr if not args.output else sys.stdout)
    return 0


def _print_table(label, tables):
    print(label)
    for i, table in enumerate(np.asarray(tables), start=1):
        rows = " ".join("[" + " ".join(f"{v:8.4f}" for v in row) + "]" for row in table)
        print(f"  psi^{i}: {rows}")


def _print_report(rows, tol):
    report = filterbank.validate_orthogonality(rows, tol=tol)
    sums = " ".join(f"{s:.3g}" for s in report.sums)
    norms = " ".join(f"{n:.6g}" for n in report.norms)
    print(f"  sums: {sums}  zero_mean: {'yes' if report.zero_mean.all() else 'NO'}")
    print(f"  squared norms: {norms}")
    print(f"  pairwise orthogonal: {'yes' if report.orthogonal else 'NO'}"
          f"  orthonormal: {'yes' if report.orthonormal else 'NO'}")
    pattern = filterbank.corollary_pattern_check(rows, tol=tol)
    if filterbank.corollary_applicable(rows, tol=tol):
        print(f"  corollary zero pattern: {pattern if pattern else 'no admissible form'}")
    else:
        print("  corollary zero pattern: not applicable")
    unitary = filterbank.unitarity_check(rows, samples=16, tol=max(tol, 1e-12))
    print(f"  modulation matrix unitary: {'yes' if unitary else 'NO'}")


def cmd_validate_bases(args) -> int:
    tol = args.tol
    if args.family1 is not None:
        params = filterbank.Family1Params(*args.family1)
        rows = filterbank.family1_rows(params)
        _print_table(f"family-1 bank (lambda={params.lam} a21={params.a21} "
                     f"a22={params.a22} a31={params.a31})", filterbank.rows_to_tables(rows))
        residual = (2 * rows[1, 0] * rows[2, 0] + 2 * rows[1, 1] * rows[2, 1]
                    + rows[1, 0] * rows[2, 1] + rows[1, 1] * rows[2, 0])
        print(f"  bilinear constraint residual: {residual:.3g}")
        _print_report(rows, tol)
        return 0
    if args.angles is not None:
        a1, b1, a2, b2, a3, b3 = args.angles
        params = filterbank.AngleParams((a1, a2, a3), (b1, b2, b3))
        rows = filterbank.angle_rows(params)
        _print_table("angle-parameterized bank", filterbank.rows_to_tables(rows))
        _print_report(rows, tol)
        return 0
    if args.which != "builtin":
        raise ParameterError("choose 'builtin', --family1, or --angles")
    for name in filterbank.BUILTIN_IDS:
        tables = filterbank.builtin_tables(name, as_printed=args.as_printed)
        suffix = " (as printed)" if args.as_printed else ""
        _print_table(f"{name}{suffix}", tables)
        _print_report(filterbank.tables_to_rows(tables), tol)
    return 0


_COMMANDS = {
    "encode": cmd_encode,
    "decode": cmd_decode,
    "inspect": cmd_inspect,
    "bench": cmd_bench,
    "validate-bases": cmd_validate_bases,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except tuple(cls for cls, _ in _EXIT_CODES) as exc:
        for cls, code in _EXIT_CODES:
            if isinstance(exc, cls):
                print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
                return code
        raise  # unreachable


if __name__ == "__main__":
    sys.exit(main())
