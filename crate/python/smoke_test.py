"""Smoke test for the digraphe_py extension module.

Builds the extension with cargo (unless DIGRAPHE_PY_LIB points at an
already built library), loads it from a temporary directory and exercises
the main entry points.

    python3 python/smoke_test.py
"""

import json
import os
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def built_library() -> Path:
    env = os.environ.get("DIGRAPHE_PY_LIB")
    if env:
        return Path(env)
    subprocess.run(
        ["cargo", "build", "--release", "-p", "digraphe-py"],
        cwd=ROOT,
        check=True,
    )
    target = Path(os.environ.get("CARGO_TARGET_DIR", ROOT / "target"))
    for name in ("libdigraphe_py.so", "libdigraphe_py.dylib", "digraphe_py.dll"):
        candidate = target / "release" / name
        if candidate.exists():
            return candidate
    sys.exit("built library not found")


def load():
    tmp = tempfile.mkdtemp()
    suffix = ".pyd" if sys.platform == "win32" else ".so"
    shutil.copy(built_library(), Path(tmp) / f"digraphe_py{suffix}")
    sys.path.insert(0, tmp)
    import digraphe_py

    return digraphe_py


def main() -> None:
    dg = load()

    table = dg.Table.wolof()
    assert table.language == "wolof"
    assert len(table) == len(table.rules) == 40
    assert ("nt", "نت", "any", 0) in table.rules

    report = table.validate()
    assert report["errors"] == [], report
    assert report["decodable_forward"] and report["decodable_reverse"]

    fwd = dg.Transliterator(table, "latin_to_ajami")
    rev = dg.Transliterator(table, "ajami-to-latin")
    ajami, rep = fwd.transliterate("garab bant jàng")
    assert ajami == "گَرَب بَنت جَانگ", ajami
    assert rep["direction"] == "latin_to_ajami" and rep["tokens_mapped"] == 12, rep
    assert rev.transliterate(ajami)[0] == "garab bant jàng"

    out, rep = dg.transliterate("garab z", table, "latin_to_ajami")
    assert rep["unknown"] == [{"char": "z", "offset": 6}], rep
    try:
        dg.transliterate("garab z", table, "latin_to_ajami", "strict")
    except dg.DigrapheError as e:
        assert "z" in str(e)
    else:
        raise AssertionError("strict mode accepted an unknown letter")

    html = "<p class=bant>garab</p><script>bant</script>".encode()
    page, _ = fwd.transliterate_html(html, set_dir=True)
    assert isinstance(page, bytes)
    assert page.decode() == '<p dir="rtl" class=bant>گَرَب</p><script>bant</script>', page
    back, _ = dg.transliterate_html(page, table, "ajami_to_latin")
    assert b"garab" in back

    rt = dg.check_round_trip(table, 2)
    assert rt["passed"] and rt["failures"] == [], rt

    assert dg.sardinas_patterson(["0", "10", "110"]) is True
    assert dg.sardinas_patterson(["a", "ab", "b"]) is False

    broken = dg.Table.parse("a\tx\tany\nb\txy\tany\nc\ty\tany\n")
    assert broken.validate()["decodable_forward"] is False
    assert not dg.check_round_trip(broken, 2)["passed"]
    assert broken.invert().invert() == broken
    assert dg.Table.parse(table.serialize()).rules == table.rules
    try:
        dg.Table.parse("a\tx\tnowhere\n")
    except dg.DigrapheError:
        pass
    else:
        raise AssertionError("bad context accepted")

    print(json.dumps({"smoke_test": "ok", "rules": len(table)}))


if __name__ == "__main__":
    main()
