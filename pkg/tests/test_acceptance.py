"""The eleven acceptance criteria, one test and one printed line each."""

import pytest

from agemo.verify import CLAIMS, run_claims

# values fixed by the first verified run; they guard against silent drift
FROZEN_DETAILS = {
    1: "dims 6/4/12, 7/7 relations vanish, table matches",
    3: "dim K = 1, K = zM, torsionless False, dual ≅ m(1)Λ",
    5: "M(q)** ≅ Ω M(1), dim 3, summands [1, 2] = Λm(1) + k",
    6: ("M(q) G1 yes (20) G2 yes (20) G3 no; M(q^3) G1 yes (20) G2 no (i=1) G3 yes (exact); "
        "M(1) G1 no (i=1) G2 yes (20) G3 yes (exact)"),
    8: "q = -1: M(3) GP-exact period 2, M(5) GP-exact period 2, component of M(3) is Ã_1",
    10: "29 modules, 214 checks, all hold",
}


@pytest.fixture(scope="module")
def results():
    return {r.index: r for r in run_claims(q=2, horizon=20, walk_horizon=8, tr_horizon=8)}


@pytest.mark.parametrize("index", [c[0] for c in CLAIMS], ids=[f"{c[0]:02d}-{c[1].replace(' ', '-')}" for c in CLAIMS])
def test_criterion(results, acceptance_lines, index):
    r = results[index]
    line = r.line()
    print(line)
    acceptance_lines.append((index, line))
    assert r.passed, line
    if index in FROZEN_DETAILS:
        assert r.detail == FROZEN_DETAILS[index]
