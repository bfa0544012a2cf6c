"""Regenerate the bundled Tietze scripts with the bounded certificate search.

    python scripts/build_tietze_scripts.py            # check against the bundled file
    python scripts/build_tietze_scripts.py --write    # overwrite it
"""

import argparse
import sys
from importlib import resources

from nonleighton.kernels import generate_tietze_scripts, scripts_to_json


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-factors", type=int, default=4)
    ap.add_argument("--max-conjugator", type=int, default=6)
    ap.add_argument("--write", action="store_true", help="overwrite the bundled JSON")
    args = ap.parse_args()

    text = scripts_to_json(generate_tietze_scripts(args.max_factors, args.max_conjugator))
    target = resources.files("nonleighton").joinpath("data/tietze_scripts.json")
    if args.write:
        with resources.as_file(target) as path:
            path.write_text(text)
        print(f"wrote {path}")
        return 0
    same = target.read_text() == text
    print("bundled scripts are up to date" if same else "bundled scripts differ from a fresh search")
    return 0 if same else 1


if __name__ == "__main__":
    sys.exit(main())
