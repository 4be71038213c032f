#!/usr/bin/env python3
# End-to-end command-line tour: build index bundles from a corpus, save,
# reload, query. Everything shown here is plain subprocess use of `wtree`.

import subprocess
import sys
import tempfile
from pathlib import Path


def run(*argv):
    proc = subprocess.run(
        [sys.executable, "-m", "wtree.cli", *map(str, argv)],
        capture_output=True,
        text=True,
    )
    print(f"$ wtree {' '.join(map(str, argv))}")
    if proc.stdout:
        print(proc.stdout, end="")
    if proc.returncode != 0:
        print(f"  (exit {proc.returncode}: {proc.stderr.strip()})")
    print()
    return proc


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    corpus = tmp / "corpus"
    corpus.mkdir()
    (corpus / "01.txt").write_text("the quick brown fox")
    (corpus / "02.txt").write_text("the lazy dog naps")
    (corpus / "03.txt").write_text("quick quick dog")

    # Combined mode = substring index + inverted index over the same corpus.
    bundle = tmp / "corpus.wvix"
    run("build", "--mode", "combined", "--input", corpus, "--output", bundle)

    run("query", bundle, "dlist", "quick")
    run("query", bundle, "dint", "quick", "dog", "--threshold", "1")
    run("query", bundle, "intersect", "quick", "dog")
    run("query", bundle, "vocab-of", "3")
    run("query", bundle, "persin-prefix", "quick", "2")
    run("query", bundle, "ft-seg", "the", "1", "2", "--json")
    run("query", bundle, "report", "1", "10")

    # Hierarchical mode over a minimal-XML file.
    xml = tmp / "units.xml"
    xml.write_text("<doc><sec>alpha beta</sec><sec>beta gamma</sec></doc>")
    hbundle = tmp / "units.wvix"
    run("build", "--mode", "hier", "--input", xml, "--output", hbundle)
    run("query", hbundle, "hdlist", "sec", "beta")
    run("query", hbundle, "hdint", "doc", "alpha", "gamma")

    # Unknown terms warn on stderr but exit 0 with empty output.
    run("query", bundle, "ft-get", "unicorn", "1")
