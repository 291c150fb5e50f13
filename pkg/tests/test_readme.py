"""The README quick tour must actually run."""

import re
from pathlib import Path


def test_quick_tour_executes():
    readme = Path(__file__).resolve().parents[1] / "README.md"
    blocks = re.findall(r"```python\n(.*?)```", readme.read_text(), re.S)
    assert blocks, "README lost its quick tour"
    env = {}
    exec(compile(blocks[0], "README.md", "exec"), env)
    import xnadhm as x

    d = env["d"]
    assert x.check_P1(d) and x.check_P2(d) and x.check_P3_direct(d)
    assert env["plane"].c == d.c
