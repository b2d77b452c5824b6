import json

from wovenframes.sweep import GENERATORS, soundness_sweep


def test_small_sweep_is_sound_and_reproducible():
    a = soundness_sweep(seed=5, trials=32)
    b = soundness_sweep(seed=5, trials=32)
    assert not a.violations and not a.bessel_violations
    assert [r.oracle_lower for r in a.records] == [r.oracle_lower for r in b.records]
    summary = a.summary()
    assert set(summary) == set(GENERATORS)
    json.dumps(summary)


def test_kind_subset():
    res = soundness_sweep(seed=0, trials=6, kinds=["dual", "paulsen"])
    assert {r.kind for r in res.records} == {"dual", "paulsen"}
