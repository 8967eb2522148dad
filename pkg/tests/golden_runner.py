"""Run the golden CLI fixtures and compare against the stored outputs."""
import contextlib
import io
import json
from pathlib import Path

from betacalc.cli import main

GOLDEN = Path(__file__).parent / "golden"
EXPECTED = GOLDEN / "expected"


def fixtures():
    return sorted(p.stem for p in GOLDEN.glob("*.json"))


def run(name, out_dir):
    """Run one fixture; returns (exit code, stdout, {file name: text})."""
    command = name.split("_", 1)[0]
    out_dir = Path(out_dir)
    stdout = io.StringIO()
    with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(io.StringIO()):
        code = main([command, str(GOLDEN / f"{name}.json"), "--out", str(out_dir)])
    files = {p.name: p.read_text() for p in sorted(out_dir.iterdir())}
    return code, stdout.getvalue(), files


def expected(name):
    codes = json.loads((EXPECTED / "exit_codes.json").read_text())
    stdout = (EXPECTED / f"{name}.stdout").read_text()
    files = {p.name.split("__", 1)[1]: p.read_text() for p in sorted(EXPECTED.glob(f"{name}__*"))}
    return codes[name], stdout, files


def mismatches(name, tmp_root):
    """Differences between two fresh runs and the stored outputs (empty when all match)."""
    first = run(name, Path(tmp_root) / "first")
    second = run(name, Path(tmp_root) / "second")
    problems = []
    if first != second:
        problems.append("two runs differ")
    if first != expected(name):
        problems.append("output differs from the stored golden files")
    return problems
