#!/usr/bin/env python3
"""Reference labels for the fixture images.

Independent of the C++ classifier: plain-Python FNV-1a 64 (seed xor-ed into
the offset basis) taken mod the 1000-entry label table. Writes
tests/fixtures/golden_labels.txt as "<file>, <label>" lines.
"""

import pathlib
import sys

OFFSET = 0xCBF29CE484222325
PRIME = 0x100000001B3
MASK = (1 << 64) - 1


def fnv1a64(data: bytes, seed: int = 0) -> int:
    h = OFFSET ^ seed
    for b in data:
        h ^= b
        h = (h * PRIME) & MASK
    return h


def label_table():
    return ["hair_spray"] + ["label_%03d" % i for i in range(1, 1000)]


def main() -> int:
    fixtures = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).parent.parent / "fixtures")
    table = label_table()
    lines = []
    for i in range(25):
        name = "test_%d.JPEG" % i
        data = (fixtures / name).read_bytes()
        lines.append("%s, %s" % (name, table[fnv1a64(data) % len(table)]))
    (fixtures / "golden_labels.txt").write_text("\n".join(lines) + "\n")
    print("\n".join(lines))
    return 0


if __name__ == "__main__":
    sys.exit(main())
