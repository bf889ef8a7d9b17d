"""Smoke test for the entitled_cuts extension module.

Build and install first, for example:
    pip install maturin
    maturin develop -m crates/python/Cargo.toml
"""

from fractions import Fraction

import entitled_cuts as ec


def main() -> None:
    inst = ec.Instance(
        [(["0", "1"], ["1"]), (["0", "1/2", "1"], ["2", "0"])],
        [Fraction(1, 3), "2/3"],
    )
    report = ec.solve(inst, "recursive")
    assert report.cut_count <= report.bound == ec.upper_bound_cuts(2)
    check = ec.verify_allocation(inst, report.pieces)
    assert check.passed, check.failures
    for agent, value in enumerate(check.values):
        assert Fraction(value) == Fraction(inst.threshold(agent))
    print(f"recursive: cuts {report.cuts} (bound {report.bound})")

    lower = ec.lower_bound_instance(3)
    result = ec.min_cuts(lower, 4)
    assert result.min_cuts == 4, result.min_cuts
    assert not ec.feasible_with_k_cuts(lower, 3)
    print(f"lower-bound n=3: min cuts = {result.min_cuts}")

    rand = ec.random_instance(3, seed=7)
    assert ec.Instance.from_json(rand.to_json()).digest() == rand.digest()
    part = ec.exact_split(rand, "1/3")
    for agent in range(rand.agent_count):
        total = Fraction(rand.value(agent, [("0", "1")]))
        assert Fraction(rand.value(agent, part)) == total / 3

    try:
        ec.Instance([(["0", "1"], ["1"])], [0.5])
    except ValueError:
        pass
    else:
        raise AssertionError("float entitlement accepted")
    print("smoke test passed")


if __name__ == "__main__":
    main()
