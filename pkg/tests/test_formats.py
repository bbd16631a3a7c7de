import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from certicone.bounds import lower_bound
from certicone.cones import ConeSpec
from certicone.equicut import brute_force, random_graph
from certicone.errors import ParseError
from certicone.formats import (bound_items, format_report, parse_graph,
                               parse_problem, parse_report, parse_sdpa, parse_solution, read_graph,
                               read_problem, read_sdpa, read_solution, write_graph, write_problem,
                               write_solution)
from certicone.probgen import gen_optimal
from certicone.sdpmat import SymMatrix
from oracles import F

FIX = Path(__file__).parent / "fixtures"

LP_TEXT = """conic v1
cone lin 1
m 1
b 1
c
l 1 1
end
a 1
l 1 1
end
"""


def test_minimal_lp():
    p = parse_problem(LP_TEXT)
    assert p.spec == ConeSpec(lin_dim=1) and p.m == 1
    assert p.A.lo.tolist() == [[1.0]] and p.b.lo.tolist() == [1.0] and p.c.is_point
    assert lower_bound(p, [1.0]).value == 1.0


def test_decimals_are_enclosed_not_rounded():
    p = parse_problem(LP_TEXT.replace("b 1", "b 0.1"))
    assert p.b.lo[0] < p.b.hi[0]
    assert F(p.b.lo[0]) <= F(1) / 10 <= F(p.b.hi[0])


@pytest.mark.parametrize("name", ["mixed_optimal", "lp_optimal", "primal_infeasible", "dual_infeasible"])
def test_hex_fixtures_round_trip(name):
    text = (FIX / f"{name}.conic").read_text()
    assert write_problem(parse_problem(text)) == text


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["lin 4", "soc 3 2", "sdp 3", "sdp 2 | soc 3 | lin 2"]), st.integers(0, 10 ** 6))
def test_generated_round_trip(spec_text, seed):
    p = gen_optimal(ConeSpec.parse(spec_text), seed).problem
    text = write_problem(p)
    q = parse_problem(text)
    assert q.A.identical(p.A) and q.b.identical(p.b) and q.c.identical(p.c)
    assert write_problem(q) == text


def test_interval_values_and_ill_posed_flag():
    text = LP_TEXT.replace("m 1\n", "m 1\nill-posed\n").replace("l 1 1\nend\na", "l 1 [0x1p-1,0x1p+0]\nend\na")
    p = parse_problem(text)
    assert p.ill_posed and (float(p.c.lo[0]), float(p.c.hi[0])) == (0.5, 1.0)
    assert parse_problem(write_problem(p)).c.identical(p.c)


@pytest.mark.parametrize("bad, line", [
    (LP_TEXT.replace("conic v1", "conic v2"), 1),
    (LP_TEXT.replace("cone lin 1", "cone lin x"), 2),
    (LP_TEXT.replace("b 1", "b 1 2"), 4),
    (LP_TEXT.replace("l 1 1\nend\na", "l 1 1\nl 1 2\nend\na"), 7),
    (LP_TEXT.replace("a 1\nl 1 1", "a 1\nl 2 1"), 9),
    (LP_TEXT.replace("b 1", "b abc"), 4),
])
def test_parse_errors_carry_line(bad, line):
    with pytest.raises(ParseError) as err:
        parse_problem(bad, "p.conic")
    assert err.value.line == line


def test_sdp_duplicate_across_triangles():
    text = ("conic v1\ncone sdp 2\nm 1\nb 1\nc\ns1 1 2 1\ns1 2 1 1\nend\na 1\ns1 1 1 1\nend\n")
    with pytest.raises(ParseError, match="duplicate"):
        parse_problem(text)


def test_solution_round_trip_and_rounding():
    spec = ConeSpec((2,), (3,), 2)
    text = "solution v1\ny 0.1 2\nx\ns1 1 1 0.1\nl 2 3\nend\nxbar\ns1 0.3\nq1 5\nl * 7\nend\nybar * 0.3\n"
    sol = parse_solution(text, spec, 2)
    assert sol.y[0] == 0.1
    assert sol.x.data[0] == 0.1 and sol.x.lin.tolist() == [0.0, 3.0]
    # the nearest double to 0.3 lies below 3/10, so the cap must be the next one up
    assert F(sol.xbar.sdp_cap(0)) >= F(3) / 10 and sol.xbar.sdp_cap(0) > 0.3
    assert sol.xbar.lin.tolist() == [7.0, 7.0]
    assert np.all(sol.ybar.values > 0.3)
    back = parse_solution(write_solution(spec, sol), spec, 2)
    assert np.array_equal(back.y, sol.y) and np.array_equal(back.x.data, sol.x.data)
    assert np.array_equal(back.ybar.values, sol.ybar.values)
    with pytest.raises(ParseError):
        parse_solution("solution v1\ny 1 2 3\n", spec, 2)


def test_fixture_solutions_load():
    p = read_problem(FIX / "mixed_optimal.conic")
    sol = read_solution(FIX / "mixed_optimal.sol", p.spec, p.m)
    assert sol.x is not None and sol.y is not None and sol.xbar is not None and sol.ybar is not None
    # the optimal slack is singular, so the enclosure costs a few ulps
    value = lower_bound(p, sol.y, sol.xbar).value
    assert -644.0 - 1e-10 <= value <= -644.0


def test_sdpa_mixed_spec():
    p = read_sdpa(FIX / "small.dat-s")
    assert p.spec == ConeSpec((2,), (), 2) and p.m == 2
    # C = -F0: F0 has (1,1) = 1 in block 1 and diag entry -1 at position 2 of block 2
    assert p.c.lo.tolist() == [-1.0, 0.0, 0.0, 0.0, 1.0]
    assert p.b.lo.tolist() == [1.0, 2.0]
    A1 = SymMatrix(2, p.A.lo[0, :3]).to_dense()
    assert A1.tolist() == [[1.0, 0.0], [0.0, 1.0]] and p.A.lo[0, 3:].tolist() == [1.0, 0.0]
    assert p.A.lo[1, :3].tolist() == [0.0, 0.5, 0.0] and p.A.lo[1, 3:].tolist() == [0.0, 1.0]


@pytest.mark.parametrize("entry, msg", [("1 1 2 1 1.0", "below the diagonal"),
                                        ("1 2 1 2 1.0", "off-diagonal"),
                                        ("1 1 1 1 2.0", "duplicate"),
                                        ("3 1 1 1 1.0", "matrix number")])
def test_sdpa_errors(entry, msg):
    text = (FIX / "small.dat-s").read_text() + entry + "\n"
    with pytest.raises(ParseError, match=msg):
        parse_sdpa(text)


def test_graph_round_trip():
    g = read_graph(FIX / "graph_n8.graph")
    assert g.n == 8 and g.w.identical(random_graph(8, 2).w)
    assert write_graph(g) == (FIX / "graph_n8.graph").read_text()
    assert brute_force(g)[0] == brute_force(random_graph(8, 2))[0]
    with pytest.raises(ParseError, match="duplicate"):
        parse_graph("4\n1 2 1\n1 2 3\n")
    with pytest.raises(ParseError, match="i < j"):
        parse_graph("4\n2 1 1\n")
    with pytest.raises(ParseError, match="even"):
        parse_graph("3\n1 2 1\n")


def test_report_format():
    text = format_report([("a", 1.0), ("b", math.inf), ("c", -math.inf), ("d", [1, 2]), ("e", True)])
    assert text == "a 1\nb inf\nc -inf\nd 1 2\ne true\n"
    assert parse_report(text)["b"] == "inf"
    x = 0.1
    assert float(parse_report(format_report([("v", x)]))["v"]) == x


def test_bound_items_order():
    p = parse_problem(LP_TEXT.replace("b 1", "b 0.1"))
    items = bound_items(lower_bound(p, [1.0]), p)
    keys = [k for k, _ in items]
    assert keys[:4] == ["lower_bound", "lower_bound_hex", "dual_feasible", "input_max_width"]
    assert dict(items)["input_max_width"] > 0
