"""Command-line front end: ``mkpolar <verb> [options]``."""
from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import construction as cons
from .arith import DEFAULT_SCALE, QScheme
from .decoder import OPTIMIZED, REFERENCE, decode
from .hdl import default_kernel_order, emit_decoder_hdl
from .kernels import KernelOrder, encode, enumerate_block_lengths
from .netlist import (build_decoder_netlist, closed_form_complexity, complexity_gain_metric,
                      count_components, evaluate)
from .sim import NETLIST, StopRule, run_fer_trials, snr_range, to_csv


class CliError(ValueError):
    pass


def _write_atomic(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        _write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _order(args) -> KernelOrder:
    if args.order:
        order = KernelOrder.parse(args.order)
        if args.n is not None and args.n != order.block_length:
            raise CliError(f"--n {args.n} does not match order {order} (N={order.block_length})")
        return order
    if args.n is None:
        raise CliError("need --n or --order")
    return default_kernel_order(args.n)


def _scheme(text: str | None) -> QScheme | None:
    if text is None or text.lower() == "float":
        return None
    return QScheme.parse(text)


def _code(args) -> cons.CodeSpec:
    if args.code:
        spec = cons.load_code_spec(args.code)
        if args.order or args.n is not None:
            order = _order(args)
            if order != spec.order:
                raise CliError(f"code file order {spec.order} differs from requested {order}")
        return spec
    order = _order(args)
    if getattr(args, "frozen", None):
        a = cons.hex_to_bits(args.frozen, order.block_length)
        return cons.CodeSpec(order, int(a.sum()), a)
    if getattr(args, "k", None) is None:
        raise CliError("need --code, --frozen or --k")
    return cons.construct_code(order, args.k, _design_snr(args), seed=args.seed)


def _design_snr(args) -> float:
    if getattr(args, "design_snr", None) is not None:
        return args.design_snr
    snr = getattr(args, "snr", None)
    if snr:
        pts = snr_range(snr)
        return (pts[0] + pts[-1]) / 2
    return 2.0


def _read_lines(path) -> list[str]:
    return [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]


# --- verbs ----------------------------------------------------------------------


def cmd_lengths(args) -> None:
    _emit(args, "".join(f"{n}\n" for n in enumerate_block_lengths(args.max)))


def cmd_construct(args) -> None:
    order = _order(args)
    if args.k is None:
        raise CliError("construct needs --k")
    ranking = cons.construct_ranking(order, args.k, _design_snr(args), args.frames, args.seed)
    spec = cons.select_frozen_set(ranking, args.k)
    if not args.out:
        raise CliError("construct needs --out")
    fd, tmp = tempfile.mkstemp(dir=Path(args.out).parent or ".")
    os.close(fd)
    try:
        cons.save_code_spec(spec, ranking, tmp)
        os.replace(tmp, args.out)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def cmd_encode(args) -> None:
    spec = _code(args)
    info = spec.information_set
    out = []
    for line in _read_lines(args.input):
        msg = cons.hex_to_bits(line, spec.k)
        u = np.zeros(spec.n, dtype=np.uint8)
        u[info] = msg
        out.append(cons.bits_to_hex(encode(u, spec.order)))
    _emit(args, "".join(f"{h}\n" for h in out))


def cmd_decode(args) -> None:
    spec = _code(args)
    scheme = _scheme(args.q) or QScheme()
    rows = []
    for no, line in enumerate(_read_lines(args.input), 1):
        try:
            rows.append([int(tok) for tok in line.split(",")])
        except ValueError:
            raise CliError(f"{args.input}:{no}: expected comma-separated integers") from None
        if len(rows[-1]) != spec.n:
            raise CliError(f"{args.input}:{no}: frame has {len(rows[-1])} LLRs, code length is {spec.n}")
    llrs = np.array(rows, dtype=np.int32).reshape(-1, spec.n)
    if np.abs(llrs).max(initial=0) > scheme.max_channel:
        raise CliError(f"{args.input}: LLR magnitude exceeds {scheme.q_channel}-bit channel range")
    if args.decoder == NETLIST:
        res = evaluate(build_decoder_netlist(spec.order, scheme), llrs, spec.frozen_indicator)
    else:
        res = decode(llrs, spec.frozen_indicator, spec.order, variant=args.decoder, width=scheme.q_internal)
    if args.codeword:
        out = [cons.bits_to_hex(x) for x in res.x_hat]
    else:
        out = [cons.bits_to_hex(u[spec.information_set]) for u in res.u_hat]
    _emit(args, "".join(f"{h}\n" for h in out))


def cmd_simulate(args) -> None:
    spec = _code(args)
    points = run_fer_trials(
        spec, snr_range(args.snr), _scheme(args.q),
        StopRule(args.min_errors, args.max_frames), seed=args.seed, scale=args.scale,
        workers=args.workers, decoder=args.decoder,
    )
    _emit(args, to_csv(points))


def cmd_complexity(args) -> None:
    order = _order(args)
    scheme = _scheme(args.q) or QScheme()
    counts = count_components(build_decoder_netlist(order, scheme))
    bounds = closed_form_complexity(order)
    gain = complexity_gain_metric(order.block_length, len(order))
    n = order.block_length
    lines = [
        f"N {n}", f"order {order}",
        f"comparators {counts.comparators}",
        f"decision_comparators {counts.decision_comparators}",
        f"adders {counts.adders}", f"subtractors {counts.subtractors}",
        f"muxes {counts.muxes}", f"xors {counts.xors}", f"ands {counts.ands}",
        f"sign_units {counts.sign_units}",
        f"total {counts.total}",
        f"lower_bound {bounds['lower']:.2f}", f"upper_bound {bounds['upper']:.2f}",
    ]
    if bounds["binary_exact"] is not None:
        lines.append(f"binary_closed_form {bounds['binary_exact']}")
    if bounds["ternary_approx"] is not None:
        lines.append(f"ternary_closed_form {bounds['ternary_approx']:.2f}")
    lines += [f"register_bits {n * (scheme.q_channel + 2)}",
              f"mk_llr_cost {gain['mk_cost']}", f"mother_llr_cost {gain['mother_cost']}",
              f"gain_percent {gain['gain_percent']:.2f}"]
    _emit(args, "".join(f"{ln}\n" for ln in lines))


def cmd_compile(args) -> None:
    order = _order(args)
    if not args.out:
        raise CliError("compile needs --out")
    fs = emit_decoder_hdl(order, _scheme(args.q) or QScheme())
    target = fs.write(args.out)
    print(f"{target} {len(fs.files)} files generation_time {fs.generation_time:.4f}s")


# --- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mkpolar", description="Multi-kernel polar code toolkit.")
    sub = p.add_subparsers(dest="verb", required=True)

    def code_opts(sp, k=True):
        sp.add_argument("--n", type=int)
        sp.add_argument("--order", help="kernel order, head first, e.g. 3,2,2,2,2")
        if k:
            sp.add_argument("--k", type=int)
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("lengths", help="list supported block lengths")
    sp.add_argument("--max", type=int, default=4096)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_lengths)

    sp = sub.add_parser("construct", help="select a frozen set and write a code file")
    code_opts(sp)
    sp.add_argument("--design-snr", type=float, help="Eb/N0 (dB) of the construction")
    sp.add_argument("--snr", help="simulation range a:b:step; its midpoint is the default design SNR")
    sp.add_argument("--frames", type=int, default=20000, help="Monte-Carlo frames (non-binary orders)")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_construct)

    for verb, func in (("encode", cmd_encode), ("decode", cmd_decode)):
        sp = sub.add_parser(verb, help=f"{verb} frames from a file")
        code_opts(sp)
        sp.add_argument("--code", help="code file written by 'construct'")
        sp.add_argument("--frozen", help="frozen indicator as hex (1 = information bit)")
        sp.add_argument("--in", dest="input", required=True)
        sp.add_argument("--out")
        if verb == "decode":
            sp.add_argument("--q", default="5,5")
            sp.add_argument("--decoder", choices=(OPTIMIZED, REFERENCE, NETLIST), default=OPTIMIZED)
            sp.add_argument("--codeword", action="store_true", help="write x_hat instead of messages")
        sp.set_defaults(func=func)

    sp = sub.add_parser("simulate", help="FER/BER over BPSK/AWGN, CSV output")
    code_opts(sp)
    sp.add_argument("--code")
    sp.add_argument("--frozen")
    sp.add_argument("--design-snr", type=float)
    sp.add_argument("--q", default="float", help="'float' or Qi,Qc")
    sp.add_argument("--scale", type=float, default=DEFAULT_SCALE)
    sp.add_argument("--snr", default="1:3:0.5")
    sp.add_argument("--min-errors", type=int, default=100)
    sp.add_argument("--max-frames", type=int, default=1_000_000)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--decoder", choices=(OPTIMIZED, REFERENCE, NETLIST), default=OPTIMIZED)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("complexity", help="component counts against the closed forms")
    code_opts(sp, k=False)
    sp.add_argument("--q", default="5,5")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_complexity)

    sp = sub.add_parser("compile", help="emit the VHDL file set")
    code_opts(sp, k=False)
    sp.add_argument("--q", default="5,5")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_compile)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ValueError, OSError) as exc:
        print(f"mkpolar {args.verb}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
