"""
Reports from the command-line front end, called in-process.

The same commands run as ``python -m pgblock <command>``.  Reports are JSON
and identical between runs unless --timing is given.
"""

import tempfile

from pgblock.cli import run

run(["gaussian", "--n", "2", "--k", "1", "--q", "7"])
with tempfile.TemporaryDirectory() as tmp:
    # the spread lookup table lands in the cache on the first call
    run(["spread", "--p", "3", "--t", "3", "--n", "2", "--cache-dir", tmp])
    run(["spread", "--p", "3", "--t", "3", "--n", "2", "--cache-dir", tmp])
    run(["construct", "--p", "3", "--n", "2", "--k", "1", "--save", f"{tmp}/b.txt",
         "--output", f"{tmp}/construct.json"])
    run(["spectrum", "--pointset", f"{tmp}/b.txt", "--d", "1", "--format", "csv"])
run(["verify-all", "--only", "8"])
