"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line. Run directly with
``python tests/test_acceptance.py`` for just the summary lines.
"""

import random
import sys
import time

import numpy as np
import pytest
from click.testing import CliRunner

from superko import categories as cat
from superko.cli import main
from superko.clifford import abs_quotient
from superko.suites import (
    aft_representation_checks,
    bordism_laws,
    check_lift_reduce,
    continuity_checks,
    ko_table_checks,
    naturality_checks,
    periodicity_checks,
    quillen_checks,
    seft_representation_checks,
    tate_checks,
)

SEED = 42


def _rng(tag):
    return random.Random(f"acceptance:{SEED}:{tag}")


def _report(number, title, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'} [{number:2d}] {title}" + (f" ({detail})" if detail else "")
    print(line, flush=True)
    return ok


def _summary(checks):
    bad = [f"{c.name}: {c.failed}/{c.total} failed {c.notes[:1]}" for c in checks if not c.passed]
    return all(c.passed for c in checks), "; ".join(bad) or ", ".join(f"{c.total} {c.name}" for c in checks)


def criterion_1():
    t = time.perf_counter()
    checks = ko_table_checks(box=4)
    dt = time.perf_counter() - t
    ok, detail = _summary(checks)
    return _report(1, "KO coefficient table, two methods, < 10 s", ok and dt < 10, f"{dt:.2f} s; {detail}")


def criterion_2():
    ok, detail = _summary([periodicity_checks()])
    return _report(2, "real period 8 and complex period 2", ok, detail)


def criterion_3():
    ok, detail = _summary(bordism_laws(_rng("bordism"), 1000, q_max=6))
    return _report(3, "bordism semigroup laws on 1000 triples", ok, detail)


def criterion_4():
    rng = _rng("representation")
    checks = [seft_representation_checks(rng, 100), aft_representation_checks(rng, 100)]
    ok, detail = _summary(checks)
    return _report(4, "SEFT and AFT representation relations", ok, detail)


def criterion_5():
    ok, detail = _summary(list(check_lift_reduce(_rng("lift"), 500)))
    return _report(5, "lift and reduce functoriality on 500 pairs", ok, detail)


def criterion_6():
    ok, detail = _summary(naturality_checks(_rng("naturality"), 200, 100))
    return _report(6, "ind o embed = id and naturality of N", ok, detail)


def criterion_7():
    ok, detail = _summary(quillen_checks(_rng("quillen"), 200))
    return _report(7, "Quillen isomorphisms GF = id, FG = id", ok, detail)


def criterion_8():
    ok, parts = True, []
    for n in (-2, -1, 0, 1, 2):
        t = time.perf_counter()
        res = cat.pi0(n, 8)
        dt = time.perf_counter() - t
        good = res.passed and res.bijective and res.addition_ok and res.group.is_isomorphic(abs_quotient(n)) and dt < 60
        ok = ok and good
        parts.append(f"n={n}: {res.components} comps {dt:.1f} s{'' if good else ' BAD'}")
    return _report(8, "pi_0 components match the quotient group", ok, "; ".join(parts))


def criterion_9():
    ok, detail = _summary([tate_checks()])
    return _report(9, "Tate coefficients and restricted product", ok, detail)


def criterion_10():
    rng = np.random.default_rng(SEED)
    t = time.perf_counter()
    checks = continuity_checks(rng, pairs=500, paths=50)
    dt = time.perf_counter() - t
    ok, detail = _summary(checks)
    return _report(10, "spectral projection continuity, < 30 s", ok and dt < 30, f"{dt:.2f} s; {detail}")


def criterion_11():
    runner = CliRunner()
    a = runner.invoke(main, ["verify", "all", "--seed", "42"])
    b = runner.invoke(main, ["verify", "all", "--seed", "42"])
    ok = a.exit_code == 0 and b.exit_code == 0 and a.output == b.output
    return _report(11, "verify all --seed 42 is deterministic", ok, f"exit {a.exit_code}/{b.exit_code}, {len(a.output)} bytes")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 12)])
def test_criterion(criterion, capsys):
    with capsys.disabled():
        ok = criterion()
    assert ok


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
