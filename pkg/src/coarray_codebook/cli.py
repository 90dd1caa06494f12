"""Command-line interface: ``coarray-codebook <command> [flags]``.

Every command writes JSON (or CSV where noted) to ``--out`` or stdout. On
failure the exit status is 1 and a JSON object ``{"error": ...}`` is written
to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import figure3
from .bounds import bounds_report, build_nested_pair, build_nonredundant_pair, build_ula_pair
from .codebook import (ParameterTuple, bits_per_codeword, enumerate_constrained,
                       enumerate_unconstrained)
from .geometry import ArrayGeometry, canonicalize, is_contiguous, sum_set
from .search import SearchOptions, optimal_codebook_search, sweep
from .sim import DownlinkConfig, monte_carlo_ser, orthonormal_basis, random_channel

THREADS_ENV = "COARRAY_CODEBOOK_THREADS"


class CommandError(Exception):
    pass


def _geometry(text):
    return ArrayGeometry.parse(text)


def _tuple(args) -> ParameterTuple:
    missing = [f for f in ("q", "ntx", "nrx", "nsigma") if getattr(args, f, None) is None]
    if missing:
        raise CommandError("missing " + ", ".join("--" + m for m in missing))
    return ParameterTuple(args.q, args.ntx, args.nrx, args.nsigma)


def _dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def cmd_sumset(args) -> tuple[str, bool]:
    tx, rx = args.tx, args.rx
    s = sum_set(tx, rx)
    doc = {
        "tx": list(tx.positions),
        "rx": list(rx.positions),
        "sum_set": list(s.positions),
        "size": len(s),
        "contiguous": is_contiguous(canonicalize(s.positions)),
    }
    return _dumps(doc), True


def cmd_enumerate(args) -> tuple[str, bool]:
    if args.q is None:
        raise CommandError("missing --q")
    if args.rx is None or args.unconstrained:
        book = enumerate_unconstrained(args.q, args.tx, args.rx)
    else:
        book = enumerate_constrained(args.q, args.tx, args.rx)
    doc = book.to_dict()
    doc["size"] = len(book)
    doc["bits"] = bits_per_codeword(book) if len(book) else None
    return _dumps(doc), True


def cmd_bounds(args) -> tuple[str, bool]:
    return _dumps(bounds_report(_tuple(args)).to_dict()), True


def cmd_construct(args) -> tuple[str, bool]:
    if args.ntx is None or args.nrx is None:
        raise CommandError("missing --ntx/--nrx")
    core = None
    if args.kind == "ula":
        tx, rx = build_ula_pair(args.ntx, args.nrx)
    elif args.kind == "nonredundant":
        tx, rx = build_nonredundant_pair(args.ntx, args.nrx)
    else:
        if args.nsigma is None:
            raise CommandError("missing --nsigma")
        tx, rx, core = build_nested_pair(args.ntx, args.nrx, args.nsigma,
                                         rng=args.seed if args.random_fill else None)
    doc = {"kind": args.kind, "tx": list(tx.positions), "rx": list(rx.positions),
           "sum_set": list(sum_set(tx, rx).positions)}
    if core is not None:
        doc["core"] = list(core.positions)
    return _dumps(doc), True


def _options(args) -> SearchOptions:
    threads = args.threads or int(os.environ.get(THREADS_ENV, "1"))
    return SearchOptions(cap=args.cap, witnesses=args.witnesses,
                         reflect_dedup=not args.no_reflect_dedup, threads=threads)


def cmd_search(args) -> tuple[str, bool]:
    opts = _options(args)
    if args.tuples:
        with open(args.tuples) as fh:
            tuples = [ParameterTuple(**d) for d in json.load(fh)]
        entries = sweep(tuples, opts)
        ok = all(e.error is None for e in entries)
        return _dumps([e.to_dict() for e in entries]), ok
    t = _tuple(args)
    result = optimal_codebook_search(t, opts)
    doc = {"bounds": bounds_report(t).to_dict(), "search": result.to_dict()}
    return _dumps(doc), True


def cmd_figure3(args) -> tuple[str, bool]:
    if args.ntx is None or args.nrx is None:
        raise CommandError("missing --ntx/--nrx")
    fixed = args.q if args.mode == "fixed-Q" else args.nsigma
    if fixed is None:
        raise CommandError("fixed-Q needs --q, fixed-NSigma needs --nsigma")
    rows = figure3.figure3_sweep(args.ntx, args.nrx, args.mode, fixed)
    if args.format == "json":
        return _dumps(figure3.to_records(rows)), True
    return figure3.to_csv(rows), True


def _descriptor(args) -> dict:
    desc = {}
    if args.descriptor:
        with open(args.descriptor) as fh:
            desc = json.load(fh)
    for key, value in (("tx", args.tx), ("rx", args.rx), ("Q", args.q), ("snr_db", args.snr),
                       ("trials", args.trials), ("seed", args.seed), ("ue_antennas", args.ue_antennas),
                       ("T", args.T)):
        if value is not None:
            desc[key] = list(value.positions) if isinstance(value, ArrayGeometry) else value
    desc.setdefault("ue_antennas", 4)
    desc.setdefault("T", 16)
    desc.setdefault("trials", 1000)
    desc.setdefault("seed", 0)
    desc.setdefault("snr_db", [0, 10, 20, 30])
    for key in ("tx", "rx", "Q"):
        if key not in desc:
            raise CommandError(f"run descriptor lacks {key!r}")
    return desc


def cmd_simulate(args) -> tuple[str, bool]:
    desc = _descriptor(args)
    tx = ArrayGeometry(tuple(desc["tx"]))
    rx = ArrayGeometry(tuple(desc["rx"]))
    book = enumerate_constrained(int(desc["Q"]), tx, rx)
    if len(book) == 0:
        raise CommandError("constrained codebook is empty for this geometry and Q")
    basis = orthonormal_basis(int(desc["T"]), book.Q)
    H = random_channel(int(desc["ue_antennas"]), len(tx), seed=int(desc["seed"]))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["snr_db", "ser", "trials"])
    snrs = desc["snr_db"] if isinstance(desc["snr_db"], list) else [desc["snr_db"]]
    for snr in snrs:
        cfg = DownlinkConfig(H, snr_db=float(snr), trials=int(desc["trials"]), seed=int(desc["seed"]))
        ser, n = monte_carlo_ser(cfg, book, basis)
        writer.writerow([f"{float(snr):g}", repr(ser), n])
    return buf.getvalue(), True


COMMANDS = {
    "sumset": cmd_sumset,
    "enumerate": cmd_enumerate,
    "bounds": cmd_bounds,
    "construct": cmd_construct,
    "search": cmd_search,
    "figure3": cmd_figure3,
    "simulate": cmd_simulate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coarray-codebook",
                                     description="Identifiability-constrained Tx-selection codebooks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--format", choices=["json", "csv"], default=None)
        return p

    p = common(sub.add_parser("sumset", help="sum set of two geometries"))
    p.add_argument("--tx", type=_geometry, required=True)
    p.add_argument("--rx", type=_geometry, required=True)

    p = common(sub.add_parser("enumerate", help="list a codebook"))
    p.add_argument("--tx", type=_geometry, required=True)
    p.add_argument("--rx", type=_geometry)
    p.add_argument("--q", type=int)
    p.add_argument("--unconstrained", action="store_true")

    for name, helptext in (("bounds", "bounds report for a tuple"), ("search", "exhaustive optimum")):
        p = common(sub.add_parser(name, help=helptext))
        p.add_argument("--q", type=int)
        p.add_argument("--ntx", type=int)
        p.add_argument("--nrx", type=int)
        p.add_argument("--nsigma", type=int)
        if name == "search":
            p.add_argument("--cap", type=int, default=24)
            p.add_argument("--witnesses", type=int, default=16)
            p.add_argument("--no-reflect-dedup", action="store_true")
            p.add_argument("--threads", type=int, default=None)
            p.add_argument("--tuples", help="JSON list of tuples to sweep")

    p = common(sub.add_parser("construct", help="build a reference geometry"))
    p.add_argument("--kind", choices=["ula", "nonredundant", "nested"], required=True)
    p.add_argument("--ntx", type=int)
    p.add_argument("--nrx", type=int)
    p.add_argument("--nsigma", type=int)
    p.add_argument("--random-fill", action="store_true", help="seeded random filler sensors")

    p = common(sub.add_parser("figure3", help="bound curves as CSV"))
    p.add_argument("--ntx", type=int)
    p.add_argument("--nrx", type=int)
    p.add_argument("--mode", choices=list(figure3.MODES), required=True)
    p.add_argument("--q", type=int)
    p.add_argument("--nsigma", type=int)

    p = common(sub.add_parser("simulate", help="downlink SER vs SNR as CSV"))
    p.add_argument("--descriptor", help="run descriptor JSON")
    p.add_argument("--tx", type=_geometry)
    p.add_argument("--rx", type=_geometry)
    p.add_argument("--q", type=int)
    p.add_argument("--snr", type=float, nargs="+")
    p.add_argument("--trials", type=int)
    p.add_argument("--ue-antennas", type=int)
    p.add_argument("--T", type=int)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, ok = COMMANDS[args.command](args)
    except (ValueError, CommandError, OSError, KeyError, TypeError) as exc:
        sys.stderr.write(json.dumps({"command": args.command, "error": str(exc)}) + "\n")
        return 1
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
