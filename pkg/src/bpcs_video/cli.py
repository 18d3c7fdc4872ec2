"""Command line interface: ``bpcs-video {embed,extract,capacity,analyze,planes}``.

Exit status is 0 on success, 1 when an operation fails (capacity, CRC, payload
not found, I/O) and 2 on usage errors. Errors are printed as a single line
``error: <category>: <detail>`` on stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .analysis import compare_report
from .bitplane import NUM_PLANES, Coding, encode_values
from .engine import DEFAULT_THRESHOLD, MAX_THRESHOLD, EmbedConfig, capacity, embed, extract, select_frames
from .errors import StegoError
from .frames import Frame, load_sequence, save_sequence, write_frame


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_planes(text: str) -> tuple[int, ...]:
    """Parse ``"0-7"``, ``"0,1,5"`` or a mix such as ``"0-2,6"``."""
    planes = set()
    try:
        for part in text.split(","):
            part = part.strip()
            if "-" in part:
                lo, hi = (int(v) for v in part.split("-", 1))
                if lo > hi:
                    raise ValueError
                planes.update(range(lo, hi + 1))
            else:
                planes.add(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid plane list {text!r}") from None
    if not planes or min(planes) < 0 or max(planes) >= NUM_PLANES:
        raise argparse.ArgumentTypeError(f"planes must lie in 0..{NUM_PLANES - 1}, got {text!r}")
    return tuple(sorted(planes))


def _threshold(text: str) -> int:
    value = _int(text)
    if not 1 <= value <= MAX_THRESHOLD:
        raise argparse.ArgumentTypeError(f"threshold must be in 1..{MAX_THRESHOLD}, got {value}")
    return value


def _int(text: str) -> int:
    try:
        return int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def _nonnegative(text: str) -> int:
    value = _int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _positive(text: str) -> int:
    value = _int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _seed(text: str) -> int:
    value = _int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"shuffle seed must be an unsigned 64-bit integer, got {value}")
    return value


def _add_key_options(parser: argparse.ArgumentParser, shuffle: bool = True) -> None:
    parser.add_argument("--start", type=_nonnegative, default=0, help="first frame index (default 0)")
    parser.add_argument("--end", type=_nonnegative, default=None, help="last frame index (default: last frame)")
    parser.add_argument("--stride", type=_positive, default=1, help="step between used frames (default 1)")
    parser.add_argument("--threshold", type=_threshold, default=DEFAULT_THRESHOLD,
                        help=f"minimum patch complexity, 1..{MAX_THRESHOLD} (default {DEFAULT_THRESHOLD})")
    parser.add_argument("--planes", type=parse_planes, default=tuple(range(NUM_PLANES)),
                        help='bit planes to use, e.g. "0-7" or "0,1,5" (default 0-7)')
    parser.add_argument("--coding", choices=[c.value for c in Coding], default=Coding.BINARY.value,
                        help="plane coding (default binary)")
    if shuffle:
        parser.add_argument("--shuffle-seed", type=_seed, default=None, help="permute selected frames with this seed")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bpcs-video", description="Hide data in video frame sequences with BPCS.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("embed", help="hide a payload in cover frames")
    p.add_argument("--cover", type=Path, help="directory of cover frames")
    p.add_argument("--manifest", type=Path, help="manifest listing cover frames (instead of --cover)")
    p.add_argument("--payload", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True, help="output directory for stego frames")
    _add_key_options(p)

    p = sub.add_parser("extract", help="recover a payload from stego frames")
    p.add_argument("--stego", type=Path, help="directory of stego frames")
    p.add_argument("--manifest", type=Path, help="manifest listing stego frames (instead of --stego)")
    p.add_argument("--out", type=Path, required=True, help="file to write the payload to")
    _add_key_options(p)

    p = sub.add_parser("capacity", help="report how much a cover can carry")
    p.add_argument("--cover", type=Path)
    p.add_argument("--manifest", type=Path)
    _add_key_options(p)

    p = sub.add_parser("analyze", help="compare cover and stego frames, write a JSON report")
    p.add_argument("--cover", type=Path, required=True)
    p.add_argument("--stego", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True, help="report file")

    p = sub.add_parser("planes", help="dump bit planes as PGM images")
    p.add_argument("--cover", type=Path)
    p.add_argument("--manifest", type=Path)
    p.add_argument("--out", type=Path, required=True, help="output directory")
    _add_key_options(p, shuffle=False)
    return parser


def _source(args, attr: str) -> Path:
    directory = getattr(args, attr, None)
    if (directory is None) == (args.manifest is None):
        raise UsageError(f"give exactly one of --{attr} or --manifest")
    return directory if directory is not None else args.manifest


def _config(args) -> EmbedConfig:
    return EmbedConfig(
        threshold=args.threshold,
        start_frame=args.start,
        end_frame=args.end,
        stride=args.stride,
        shuffle_seed=getattr(args, "shuffle_seed", None),
        plane_mask=args.planes,
        coding=Coding(args.coding),
    )


def _cmd_embed(args, out) -> None:
    sequence = load_sequence(_source(args, "cover"))
    config = _config(args)
    payload = args.payload.read_bytes()
    stego, report = embed(sequence, payload, config)
    save_sequence(stego, args.out)
    print(f"embedded {len(payload)} bytes: {report.summary()}", file=out)


def _cmd_extract(args, out) -> None:
    sequence = load_sequence(_source(args, "stego"))
    payload = extract(sequence, _config(args))
    args.out.write_bytes(payload)
    print(f"extracted {len(payload)} bytes to {args.out}", file=out)


def _cmd_capacity(args, out) -> None:
    sequence = load_sequence(_source(args, "cover"))
    blocks, nbytes = capacity(sequence, _config(args))
    print(f"{blocks} blocks, {nbytes} bytes", file=out)


def _cmd_analyze(args, out) -> None:
    report = compare_report(load_sequence(args.cover), load_sequence(args.stego))
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(report.to_json(), encoding="utf-8")
    agg = report.aggregate
    print(f"{agg['frames']} frames compared, {agg['frames_changed']} changed; report written to {args.out}", file=out)


def _cmd_planes(args, out) -> None:
    sequence = load_sequence(_source(args, "cover"))
    config = _config(args)
    args.out.mkdir(parents=True, exist_ok=True)
    written = 0
    for index in select_frames(len(sequence), config):
        coded = encode_values(sequence[index].pixels, config.coding)
        stem = Path(sequence.display_name(index)).stem
        for c in range(coded.shape[2]):
            for p in config.plane_mask:
                bits = ((coded[:, :, c] >> p) & 1) * np.uint8(255)
                path = args.out / f"{stem}_c{c}_p{p}.pgm"
                path.write_bytes(write_frame(Frame(bits)))
                written += 1
    print(f"wrote {written} plane images to {args.out}", file=out)


_COMMANDS = {
    "embed": _cmd_embed,
    "extract": _cmd_extract,
    "capacity": _cmd_capacity,
    "analyze": _cmd_analyze,
    "planes": _cmd_planes,
}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"error: usage: {exc}", file=err)
        return 2
    except StegoError as exc:
        print(f"error: {exc.category}: {_one_line(exc)}", file=err)
        return 1
    except OSError as exc:
        detail = f"{exc.filename}: {exc.strerror}" if exc.filename else str(exc)
        print(f"error: io: {_one_line(detail)}", file=err)
        return 1
    return 0


def _one_line(message) -> str:
    return " ".join(str(message).split())


def main() -> None:
    sys.exit(run())
