"""Run every JSON recipe in configs/ through the command-line interface.

Usage::

    python scripts/run_recipes.py [--out-dir DIR] [--only rabi_weak_pulse ...] [--threads N]

Each recipe writes its CSV/JSON artifacts into ``DIR/<recipe name>/``.
"""

import argparse
import json
import sys
import time
from pathlib import Path

from blochwave import cli

ROOT = Path(__file__).resolve().parents[1]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="recipe-out")
    ap.add_argument("--only", nargs="*", help="recipe names (file stems) to run")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args(argv)

    failed = 0
    for path in sorted((ROOT / "configs").glob("*.json")):
        if args.only and path.stem not in args.only:
            continue
        sub = json.loads(path.read_text())["subcommand"]
        t0 = time.perf_counter()
        code = cli.run([sub, "--config", str(path), "--out-dir", str(Path(args.out_dir) / path.stem),
                        "--threads", str(args.threads)])
        print(f"[{path.stem}] exit {code} in {time.perf_counter() - t0:.1f} s", file=sys.stderr)
        failed += code != 0
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
