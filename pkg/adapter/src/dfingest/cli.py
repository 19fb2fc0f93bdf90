"""dfingest CLI: ingest videos into landmark bundles.

    dfingest ingest VIDEO... --out DIR [--stride N] [--min-confidence C]
    dfingest batch VIDEO_DIR --out DIR [--resume]

Exit codes: 0 success, 1 usage, 2 ingestion failure.
"""
from __future__ import annotations

import argparse
import sys

from . import __version__
from .ingest import AdapterConfig, IngestError, batch_ingest, ingest

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> _Parser:
    p = _Parser(prog="dfingest", description="Video -> landmark bundle adapter")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", required=True, help="output directory")
        sp.add_argument("--stride", type=int, default=5)
        sp.add_argument("--min-confidence", type=float, default=0.5, dest="min_confidence")
        sp.add_argument("--cascade", help="Haar cascade XML; omit for the blob heuristic")

    sp = sub.add_parser("ingest", help="ingest one or more clips")
    common(sp)
    sp.add_argument("videos", nargs="+")

    sp = sub.add_parser("batch", help="ingest a directory, writing a manifest CSV")
    common(sp)
    sp.add_argument("video_dir")
    sp.add_argument("--resume", action="store_true", help="skip clips with existing bundles")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(sys.argv[1:] if argv is None else list(argv))
        config = AdapterConfig(
            out_dir=args.out,
            stride=args.stride,
            min_confidence=args.min_confidence,
            cascade_path=args.cascade,
        )
        if args.command == "ingest":
            failures = 0
            for video in args.videos:
                try:
                    result = ingest(video, config)
                except IngestError as exc:
                    failures += 1
                    print(f"failed: {exc}", file=sys.stderr)
                    continue
                print(
                    f"{result.video_id}: {result.frames_kept}/{result.frames_sampled} "
                    f"frames -> {result.bundle_path}"
                )
                for note in result.notes:
                    print(f"  {note}", file=sys.stderr)
            return EXIT_FAIL if failures == len(args.videos) else EXIT_OK
        manifest = batch_ingest(args.video_dir, config, resume=args.resume)
        print(manifest)
        return EXIT_OK
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except (IngestError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
