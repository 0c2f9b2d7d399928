import pytest

from hdlkernel.claims import CLAIMS, run_claim
from hdlkernel.verify import EXHAUSTIVE, Sampled


@pytest.mark.parametrize("name", sorted(CLAIMS))
def test_every_claim_holds_with_defaults(name):
    r = run_claim(name)
    assert r.verdict, r.render()
    assert r.claim == name and r.total > 0


def test_named_instances_present():
    labels = {c.label for c in CLAIMS.values()}
    for label in ["half adder", "full adder, boolean", "full adder, 1-bit word", "ripple adder", "dc adder", "fifo delay", "register"]:
        assert label in labels


def test_param_validation():
    with pytest.raises(ValueError):
        run_claim("ripple_implements_carry_add", width=3)
    with pytest.raises(ValueError):
        run_claim("ripple_implements_carry_add", n=-2)
    with pytest.raises(ValueError):
        run_claim("ripple_implements_carry_add", n="four")


def test_seed_and_mode_override():
    r = run_claim("register_realise", seed=7)
    assert r.mode == Sampled(1000, 7)
    r = run_claim("ripple_implements_carry_add", mode=Sampled(10, 1), n=5)
    assert r.total == 10
    assert run_claim("hadd_implements_hadd", mode=EXHAUSTIVE).total == 4


def test_add_parts_exhaustive_only():
    with pytest.raises(ValueError):
        run_claim("add_parts", mode=Sampled(5, 0))
