"""
Command-line round trip
=======================

Generate a lossless system, encode it in Schur coordinates, decode it and
compare, all through the ``schurloss`` command in a temporary directory.
"""

import os
import tempfile

from schurloss.cli import main

with tempfile.TemporaryDirectory() as tmp:
    g, s, g2 = (os.path.join(tmp, name) for name in ("G.json", "S.json", "G2.json"))
    steps = [
        ["generate", "--degree", "3", "--size", "2", "--seed", "7", "-o", g],
        ["check", g],
        ["schur", "encode", g, "--chart", "default", "-o", s],
        ["schur", "decode", s, "-o", g2],
        ["compare", g, g2, "--points", "32"],
    ]
    for argv in steps:
        print("$ schurloss", " ".join(os.path.basename(a) if a.startswith(tmp) else a for a in argv))
        code = main(argv)
        print("exit code", code)
        print()
