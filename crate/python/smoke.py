"""Smoke test for the pyskein extension module.

Build and install first, e.g. `pip install --no-build-isolation ./crates/py`
(requires maturin), then run `python python/smoke.py`.
"""

import json

import pyskein


def main() -> None:
    elem = json.loads(pyskein.evaluate("t1*t2"))
    assert elem == {"terms": [{"mc": [[1], [2]], "coeff": [[0, 1]]}]}, elem

    terms = json.loads(pyskein.evaluate("t12*t23"))["terms"]
    assert len(terms) == 4, terms
    assert pyskein.equals("q*t23*t12 - q^-1*t12*t23", "(q^2 - q^-2)*t13 + (q - q^-1)*(t1*t3 + t2*t123)")

    nf = json.loads(pyskein.normal_form("t23*t12"))
    assert nf["irreducible"] == [], nf

    reports = json.loads(pyskein.verify(["[2,2]-1", "red-1"]))
    assert all(r["zero"] for r in reports), reports

    row = json.loads(pyskein.table_row("R1"))
    assert row["pass"], row

    assert len(pyskein.catalog().splitlines()) > 100

    try:
        pyskein.evaluate("t21")
    except ValueError as err:
        assert "increasing" in str(err)
    else:
        raise AssertionError("t21 should be rejected")

    print("pyskein smoke test passed")


if __name__ == "__main__":
    main()
