import csv
import io
import json
import re

import pytest

from eispack import __version__
from eispack.cli import main
from eispack.enumeration import count_circles, enumerate_packing
from eispack.geometry import packing_circles
from eispack.schmidt import Window
from eispack.svg import BLUE, GREEN, clip_line, fmt


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    payload = json.loads(out)
    assert payload["eis_version"] == __version__
    return payload


@pytest.mark.parametrize(
    "quad,root,word",
    [("51,11,20,12", [-5, 11, 20, 12], ["S1"]), ("-5,11,20,12", [-5, 11, 20, 12], []), ("2,0,1,1", [0, 0, 1, 1], ["S1"])],
)
def test_reduce(capsys, quad, root, word):
    p = run_json(capsys, "reduce", "-q", quad)
    assert p["root"] == root and p["word"] == word and p["primitive"]


def test_reduce_rejects_non_eisenstein(capsys):
    code, _, err = run(capsys, "reduce", "-q", "1,1,1,1")
    assert code == 2 and "error" in err


def test_malformed_quadruple_is_usage_error(capsys):
    assert run(capsys, "reduce", "-q", "1,2,3")[0] == 2
    assert run(capsys, "reduce", "-q", "a,b,c,d")[0] == 2


@pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (5, 4)])
def test_count(capsys, n, count):
    p = run_json(capsys, "count", "-n", str(n))
    assert p["count"] == count and p["matches"] and len(p["roots"]) == count


def test_count_rejects_nonpositive(capsys):
    assert run(capsys, "count", "-n", "0")[0] == 2


def test_forms(capsys):
    p = run_json(capsys, "forms", "-D", "-27")
    assert p["count"] == 2 and [7, 1, 1, -27] in p["forms"]
    p = run_json(capsys, "forms", "--reduce", "7,-1,1")
    assert p["reduced"] == [7, 1, 1, -27]
    p = run_json(capsys, "forms", "--phi", "-3,5,14,10")
    assert p["form"] == [7, 1, 1, -27]
    assert run(capsys, "forms")[0] == 2


def test_chi2_both_modes(capsys):
    p = run_json(capsys, "chi2", "-q", "-4,12,19,7")
    assert (p["chi_O"], p["chi_E"]) == (1, -1)
    assert p["extended_O"] == "(3,3,1)"
    p = run_json(capsys, "chi2", "--n", "19", "--b", "12", "--t", "3")
    assert p["chi2"] == 1
    assert run(capsys, "chi2", "--n", "19")[0] == 2


def test_enumerate_json_matches_library(capsys):
    p = run_json(capsys, "enumerate", "-q", "-1,3,4,2", "-N", "500")
    s = enumerate_packing((-1, 3, 4, 2), 500)
    assert p["curvatures_O"] == s.curvatures("O").tolist()
    assert p["curvatures_E"] == s.curvatures("E").tolist()
    assert p["circles"] == s.total


def test_enumerate_csv(capsys):
    code, out, _ = run(capsys, "enumerate", "-q", "-1,3,4,2", "-N", "20", "--format", "csv", "--moiety", "E")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["curvature", "moiety", "first_seen_count"]
    assert rows[1:3] == [["2", "E", "1"], ["3", "E", "2"]]
    assert {r[1] for r in rows[1:]} == {"E"}


def test_sieve_round_trip_through_sporadic(capsys, tmp_path):
    path = str(tmp_path / "p.eisv")
    p = run_json(capsys, "enumerate", "-q", "-1,3,4,2", "-N", "50000", "--format", "sieve", "-o", path)
    assert p["path"] == path
    from_sieve = run_json(capsys, "sporadic", "-q", "-1,3,4,2", "--sieve", path, "--moiety", "O")
    direct = run_json(capsys, "sporadic", "-q", "-1,3,4,2", "-N", "50000", "--moiety", "O")
    assert from_sieve == direct
    assert direct["count"] == 265
    # a mismatched bound is refused
    assert run(capsys, "sporadic", "-q", "-1,3,4,2", "--sieve", path, "-N", "100")[0] == 2


def test_sporadic_csv(capsys):
    code, out, _ = run(capsys, "sporadic", "-q", "-1,3,4,2", "-N", "50000", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0][:3] == ["root", "moiety", "type"]
    assert [r[1] for r in rows[1:]] == ["O", "E"]


def test_sporadic_needs_a_source(capsys):
    assert run(capsys, "sporadic", "-q", "-1,3,4,2")[0] == 2


def test_huge_bound_exits_3(capsys):
    code, _, err = run(capsys, "enumerate", "-q", "-1,3,4,2", "-N", str(1 << 60))
    assert code == 3 and "2^60" in err


def test_growth_errors(capsys):
    assert run(capsys, "growth", "-q", "-1,3,4,2", "-N", "5000")[0] == 2


def test_draw_cap_exits_3(capsys):
    assert run(capsys, "draw", "-q", "-4,12,19,7", "-N", "300", "--cap", "10")[0] == 3


def test_draw_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    for path in (a, b):
        assert run(capsys, "draw", "-q", "-5,11,20,12", "-N", "200", "-o", str(path))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().startswith("<svg") or a.read_text().startswith("<?xml")


@pytest.mark.parametrize("root,N", [((-4, 12, 19, 7), 400), ((-1, 3, 4, 2), 200)])
def test_draw_circle_count(capsys, root, N):
    code, out, _ = run(capsys, "draw", "-q", ",".join(map(str, root)), "-N", str(N))
    assert code == 0
    lines = sum(1 for _, _, c in packing_circles(root, N) if c.is_line)
    assert out.count("<circle") == count_circles(root, N) - lines


def test_colour_moiety(capsys):
    code, out, _ = run(capsys, "draw", "-q", "-4,12,19,7", "-N", "300", "--color-moiety", "--no-labels")
    assert code == 0
    strokes = re.findall(r'<circle[^>]*stroke="([^"]+)"', out)
    # E carries chi_2 = -1 (blue), O carries chi_2 = 1 (green); the outer circle is in O
    by_pos = {0: 0, 1: 0}
    for _, pos, c in packing_circles((-4, 12, 19, 7), 300):
        if not c.is_line:
            by_pos[pos % 2] += 1
    assert strokes.count(BLUE) == by_pos[0]
    assert strokes.count(GREEN) == by_pos[1]
    assert set(strokes) == {BLUE, GREEN}


def test_schmidt_csv_and_svg(capsys):
    code, out, _ = run(capsys, "schmidt", "--max-s", "3", "--window", "-1,1,0,1", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["s", "t", "x", "z", "coset"]
    assert ["1", "0", "0", "-1", "4"] in rows
    assert {r[4] for r in rows[1:]} <= {"0", "4"}
    code, out, _ = run(capsys, "schmidt", "--max-s", "6", "--cosets", "all")
    assert code == 0 and out.count("<circle") > 0
    assert run(capsys, "schmidt", "--window", "1,0,0,1")[0] == 2


def test_strongapprox_json(capsys):
    p = run_json(capsys, "strongapprox", "--level", "2", "--json")
    assert [lv["fibre"] for lv in p["levels"]] == [16, 32]
    assert p["verdict"] == "INCONCLUSIVE"
    code, out, _ = run(capsys, "strongapprox", "--level", "1")
    assert code == 0 and "level 1: closure order 2" in out


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and __version__ in out


@pytest.mark.parametrize("v,text", [(0.5, "0.5"), (-0.0, "0"), (1 / 3, "0.333333333333"), (1e-20, "1e-20")])
def test_fmt(v, text):
    assert fmt(v) == text


def test_clip_line():
    w = Window(-1, 1, -1, 1)
    x0, y0, x1, y1 = clip_line(0, 1, 0.5, w)
    assert sorted((x0, x1)) == pytest.approx([-1, 1]) and y0 == y1 == pytest.approx(0.5)
    assert clip_line(1, 0, 3, w) is None
    seg = clip_line(0.6, 0.8, 0.0, w)
    x0, y0, x1, y1 = seg
    for x, y in ((x0, y0), (x1, y1)):
        assert 0.6 * x + 0.8 * y == pytest.approx(0)
        assert -1 - 1e-12 <= x <= 1 + 1e-12 and -1 - 1e-12 <= y <= 1 + 1e-12
