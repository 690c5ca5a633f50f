#!/usr/bin/env python3
"""Thin launcher for the figure tool in frontend/.

Delegates to the built Node CLI so that
    ./plot_sweep.py --style fig2 --out fig2.svg data/*.csv
works from the repository root. Build first: cd frontend && npm install
&& npm run build.
"""

import os
import shutil
import subprocess
import sys

CLI = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                   "frontend", "dist", "cli.js")


def main() -> int:
    if shutil.which("node") is None:
        print("plot_sweep.py needs node on PATH", file=sys.stderr)
        return 1
    if not os.path.exists(CLI):
        print("figure tool not built; run: cd frontend && npm install && "
              "npm run build", file=sys.stderr)
        return 1
    return subprocess.call(["node", CLI] + sys.argv[1:])


if __name__ == "__main__":
    raise SystemExit(main())
