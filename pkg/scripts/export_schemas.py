"""Write the state-file and report JSON Schemas to a directory.

    python scripts/export_schemas.py schemas/
"""

import argparse

from entmatch.schemas import export


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("directory", nargs="?", default="schemas")
    args = ap.parse_args()
    for path in export(args.directory):
        print(path)


if __name__ == "__main__":
    main()
