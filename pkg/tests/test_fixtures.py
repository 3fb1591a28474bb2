import subprocess
import sys
from pathlib import Path

import pytest

from kernelcat.arrow import check_lax_algebra, find_kernels, make_pointed
from kernelcat.core import validate_category
from kernelcat.io.corpus import build, entry
from kernelcat.io.formats import parse_category, parse_lax, parse_simplicial
from kernelcat.report import FAIL
from kernelcat.simplicial import check_supercoherence, decalage_match

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "tests" / "fixtures"
CATEGORY_FILES = ["terminal", "two", "finptset2", "finptset3", "finvect2", "nokernel"]


def test_generator_reproduces_fixtures(tmp_path):
    subprocess.run([sys.executable, str(ROOT / "scripts" / "generate_fixtures.py"), "--out", str(tmp_path)],
                   check=True, capture_output=True)
    made = sorted(p.name for p in tmp_path.iterdir())
    assert made == sorted(p.name for p in FIXTURES.glob("*.json"))
    for name in made:
        assert (tmp_path / name).read_bytes() == (FIXTURES / name).read_bytes(), name


@pytest.mark.parametrize("name", CATEGORY_FILES)
def test_category_fixtures_parse_and_validate(name):
    c = parse_category((FIXTURES / f"{name}.json").read_text(), name=build(name).name)
    assert validate_category(c).ok
    assert c == build(name)
    assert c.zero == entry(name).zero


def test_finptset2_fixture_has_kernels():
    c = parse_category((FIXTURES / "finptset2.json").read_text())
    ks = find_kernels(make_pointed(c, c.zero))
    assert ks.violations() == []


def test_lax_fixture_passes():
    d, _ = parse_lax((FIXTURES / "lax_finptset2.json").read_text())
    assert check_lax_algebra(d).ok


def test_mutated_lax_fixture_fails_unit_condition():
    d, _ = parse_lax((FIXTURES / "lax_finptset2_mutated_phi.json").read_text())
    rep = check_lax_algebra(d)
    assert rep.status("(iii) phi.A(beta) = 1") == FAIL
    assert rep.get("(iii) phi.A(beta) = 1").witness


def test_supercoherent_fixture():
    x = parse_simplicial((FIXTURES / "supercoherent_finptset2.json").read_text())
    rep = check_supercoherence(x)
    assert rep.ok, rep.to_text()
    c = build("finptset2")
    m = decalage_match(make_pointed(c, "star"), x)
    assert m.report.ok, m.report.to_text()
