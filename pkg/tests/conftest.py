import os
import sys
from pathlib import Path

import pytest

from hyperq.algebra import format_algebra
from hyperq.catalog import catalog_get, catalog_names

DATA = Path(__file__).parent / "data"

CORPUS_FILES = {
    "group": DATA / "corpus_group.horn",
    "lattice": DATA / "corpus_lattice.horn",
    "band": DATA / "corpus_band.horn",
}


def corpus_sources(kind):
    out = []
    for raw in CORPUS_FILES[kind].read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


@pytest.fixture(scope="session")
def alg_dir(tmp_path_factory):
    """Catalog algebras written out once in the text format, for the CLI."""
    root = tmp_path_factory.mktemp("algebras")
    for name in catalog_names():
        (root / ("%s.alg" % name)).write_text(format_algebra(catalog_get(name)))
    return root


def run_cli(args, backend="numpy"):
    """Run the CLI in a subprocess; numpy backend keeps startup light."""
    import subprocess

    env = dict(os.environ, HYPERQ_BACKEND=backend)
    return subprocess.run(
        [sys.executable, "-m", "hyperq.cli"] + [str(a) for a in args],
        capture_output=True,
        text=True,
        env=env,
    )
