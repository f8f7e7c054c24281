"""Reference-table fixtures and the reproduction engine."""

import pytest

from greycast.reference import CASES, TABLE1, run_case


@pytest.mark.parametrize("case", CASES)
def test_every_case_passes(case):
    cells = run_case(case)
    assert cells
    assert not [c for c in cells if c.status == "fail"]


def test_expected_values_keep_reference_strings():
    # fixtures carry the reference cells verbatim, not re-rounded floats
    assert TABLE1["0.5"] == ("0.0108", "0.0217")
    oilfield = {(c.row, c.column): c.expected for c in run_case("oilfield")}
    assert oilfield[("2000", "fagmo")] == "136.4573"
    assert oilfield[("rmspepr", "fagmo")] == "0.3259"
    nuclear = {(c.row, c.column): c.expected for c in run_case("nuclear")}
    assert nuclear[("2020", "fagmo")] == "123.3723"
    assert nuclear[("ae", "fagm11")] == "-1.1818"
    assert nuclear[("relerr:2007", "fagmo")] == "0.0701"


def test_external_columns_are_never_recomputed():
    for case in ("oilfield", "nuclear"):
        cells = run_case(case)
        engm = [c for c in cells if c.column == "engm"]
        assert engm
        assert all(c.status == "external" and c.computed is None for c in engm)


def test_cells_carry_table_coordinates():
    cells = run_case("nuclear")
    tables = {c.table for c in cells}
    assert tables == {"table4", "table5"}
    assert all(c.case == "nuclear" for c in cells)


def test_unknown_case_rejected():
    with pytest.raises(ValueError):
        run_case("tables")
