from stpro.checks import (FAIL, INCONCLUSIVE, PASS, CheckReport, Identity, capture_identities, replay,
                          run_identities, worst)


def _ids():
    return [Identity("even square", lambda x: (x * x) % 2 == x % 2, None, lambda rng: (int(rng.integers(0, 100)),)),
            Identity("below 90", lambda x: x < 90, None, lambda rng: (int(rng.integers(0, 100)),)),
            Identity("small", lambda x: x < 5, lambda: ((i,) for i in range(5)))]


def test_worst_order():
    assert worst([PASS, INCONCLUSIVE]) == INCONCLUSIVE
    assert worst([PASS, FAIL, INCONCLUSIVE]) == FAIL
    assert worst([]) == PASS


def test_run_and_witness():
    rep = run_identities("demo", _ids(), seed=3, budget=200)
    assert rep.result("even square").status == PASS
    assert rep.result("small").mode == "exhaustive" and rep.result("small").cases == 5
    bad = rep.result("below 90")
    assert bad.status == FAIL
    w = bad.witness
    assert w["case"][0] >= 90 and w["check"] == "demo" and w["identity"] == "below 90"
    # the witness replays on its own
    ok, case = replay("demo", _ids(), "below 90", w["seed"], w["index"])
    assert not ok and list(case) == w["case"]


def test_sampling_is_deterministic():
    a = run_identities("demo", _ids(), seed=7, budget=300)
    b = run_identities("demo", _ids(), seed=7, budget=300)
    assert [r.as_dict() for r in a.results] == [r.as_dict() for r in b.results]


def test_capture_mode_does_not_evaluate():
    with capture_identities() as found:
        rep = run_identities("demo", _ids(), seed=1, budget=10)
    assert rep.results == []
    assert found[0][0] == "demo" and len(found[0][2]) == 3


def test_report_extend_and_rename():
    rep = CheckReport("outer")
    rep.extend(run_identities("inner", _ids()[:1], 0, 10), "p: ")
    rep.rename("renamed")
    assert rep.results[0].name == "p: even square" and rep.results[0].check == "renamed"
    rep.add("inconclusive thing", False, status=INCONCLUSIVE)
    assert rep.status == INCONCLUSIVE
