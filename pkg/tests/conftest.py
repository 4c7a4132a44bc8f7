"""Shared fixtures: the reference designs and their cached analyses.

Everything expensive is computed once per session.  The terminal summary
hook prints one PASS/FAIL line per acceptance criterion at the end of the
run (tests named test_criterion_<nn>...).
"""

import re

import pytest

import steinerlab as sl

CRITERIA = {
    1: "golden validation",
    2: "well-distribution certificates",
    3: "fine-count formulas",
    4: "sum identities and system inversion",
    5: "bounds",
    6: "stable partition of the pair refinement",
    7: "triple-system split",
    8: "GIP classification and transfer",
    9: "pasting",
    10: "property suite",
}


@pytest.fixture(scope="session")
def fano():
    return sl.fano_plane()


@pytest.fixture(scope="session")
def ex15():
    return sl.example_15()


@pytest.fixture(scope="session")
def ex40():
    return sl.example_40()


@pytest.fixture(scope="session")
def ex15_bundle(ex15):
    subs = sl.minimal_subdesigns(ex15)
    wd = sl.wd_profile(ex15, subs)
    return ex15, subs, wd


@pytest.fixture(scope="session")
def ex40_bundle(ex40):
    subs = sl.minimal_subdesigns(ex40)
    wd = sl.wd_profile(ex40, subs)
    return ex40, subs, wd


@pytest.fixture(scope="session")
def ex15_profiles(ex15_bundle):
    d, subs, wd = ex15_bundle
    return sl.all_triple_profiles(d, subs, wd)


@pytest.fixture(scope="session")
def ex40_profiles(ex40_bundle):
    d, subs, wd = ex40_bundle
    return sl.all_triple_profiles(d, subs, wd)


@pytest.fixture(scope="session")
def pasted_bundle():
    recipe = sl.PasteRecipe(outer=sl.affine_plane(7), inner=sl.fano_plane())
    pasted = sl.paste(recipe)
    subs = sl.minimal_subdesigns(pasted)
    wd = sl.wd_profile(pasted, subs)
    return recipe, pasted, subs, wd


# a 4-block trade applied to the 15-point design: the result is a valid
# triple system whose 7 minimal subdesigns cover vertices and blocks
# unevenly (3 or 7 per vertex, 1 or 3 per block)
TRADE_REMOVE = ((0, 1, 2), (0, 3, 4), (1, 4, 6), (2, 3, 6))
TRADE_ADD = ((3, 4, 6), (1, 2, 6), (0, 2, 3), (0, 1, 4))


@pytest.fixture(scope="session")
def uneven15(ex15):
    blocks = set(ex15.blocks) - set(TRADE_REMOVE)
    blocks |= set(TRADE_ADD)
    return sl.new_design(15, sorted(blocks))


@pytest.fixture(scope="session")
def fano_coloring(fano):
    return sl.wl2_refine(sl.incidence_graph(fano))


@pytest.fixture(scope="session")
def ex15_coloring(ex15):
    return sl.wl2_refine(sl.incidence_graph(ex15))


@pytest.fixture(scope="session")
def ex40_coloring(ex40):
    return sl.wl2_refine(sl.incidence_graph(ex40))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            m = re.search(r"test_criterion_(\d+)", nodeid)
            if not m:
                continue
            num = int(m.group(1))
            entry = results.setdefault(num, True)
            if outcome != "passed":
                results[num] = False
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        status = "PASS" if results[num] else "FAIL"
        label = CRITERIA.get(num, "")
        terminalreporter.write_line(f"criterion {num:2d} ({label}): {status}")
