"""Smoke test for the `w2p` extension module.

Build and stage the module next to this script, then run it:

    cargo build --release -p w2p-py --features extension-module
    cp target/release/libw2p.so python/w2p.so
    python3 python/smoke_test.py
"""

import sys
from fractions import Fraction
from math import comb
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import w2p  # noqa: E402


def main() -> None:
    m = w2p.Model(2)
    assert m.central_charge == -2
    assert m.default_max_level == 8

    f, h, e = m.generators()
    assert h.weight == 3 and h.sector == "0"
    assert f.screening_q() == h
    assert h.screening_q() == e
    assert e.screening_q().is_zero()

    omega = m.omega()
    assert str(omega) == "1/2 b(-2)^1@0 ; 1/2 b(-1)^2@0"
    assert w2p.Vector.parse(m, str(h)) == h
    assert omega.product(1, omega) == omega.scaled(2)

    assert [m.kernel_dim("Q", n) for n in range(7)] == [1, 0, 1, 1, 2, 2, 4]
    assert m.kernel_dim("Qtilde", 3) == 2
    assert m.spanning_check(6)

    assert m.g() == [0, 0, Fraction(16, 9), Fraction(128, 9)]
    curve = m.curve()
    assert curve["C_p"] == Fraction(128, 9)
    assert (3, Fraction(3, 8), 1) in m.classify()

    for t in [Fraction(1, 2), 3, "-5/3"]:
        tq = Fraction(t)
        assert m.top_level_eval(omega, t) == tq * (tq - 2) / 8
        expected = tq * (tq - 1) * (tq - 2) / 6
        assert m.top_level_eval(h, t) == expected
    assert m.top_level_eval(h, 7) == comb(7, 3)

    try:
        w2p.Model(1)
    except ValueError:
        pass
    else:
        raise AssertionError("p = 1 accepted")

    print("w2p smoke test passed")


if __name__ == "__main__":
    main()
