"""Acceptance criteria, one test each.  Every test prints a single PASS/FAIL line
(visible in the normal pytest output) and asserts both correctness and its time budget."""

import json
import random
import time

import numpy as np
import pytest

from pitreduce.arithmetize import arithmetize_circuit, build_R
from pitreduce.circuit import (
    ArithBuilder,
    all_assignments,
    eval_arith,
    eval_arith_batch,
    eval_bool_batch,
    random_arith_circuit,
    random_bool_circuit,
)
from pitreduce.gf import make_field
from pitreduce.harness import (
    TesterConfig as Cfg,
    classify,
    mutant_suite,
    run_pipeline,
    single_encoding_mutant,
    synth_decider,
)
from pitreduce.pit import IdenticallyZero, Inconclusive, NonzeroWitness, check_witness, exhaustive_test, symbolic_canonical
from pitreduce.reduction import build_A_star, build_S, build_V
from pitreduce.sat3 import (
    KIND_FORMULA,
    BitString,
    ClauseSetSpace,
    ThreeSatInstance,
    brute_force_sat,
    decode,
    encode,
    enumerate_instances,
    is_valid_encoding,
    mini_profile,
    paper_profile,
    substitute,
)

FIELD_PARAMS = {2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1), 7: (7, 1), 8: (2, 3), 9: (3, 2)}


@pytest.fixture
def verdict(capsys):
    """Call with (number, ok, detail, elapsed, budget); prints the line then asserts."""

    def record(number, ok, detail, elapsed, budget):
        in_time = elapsed < budget
        status = "PASS" if ok and in_time else "FAIL"
        with capsys.disabled():
            print(f"\n[criterion {number}] {status}: {detail} ({elapsed:.2f}s, budget {budget}s)")
        assert ok, detail
        assert in_time, f"took {elapsed:.2f}s, budget {budget}s"

    return record


# ---------------------------------------------------------------------------
# 1. Fermat


def fermat_report():
    out = {}
    for q, pk in FIELD_PARAMS.items():
        F = make_field(*pk)
        out[q] = all(a ** (q - 1) == F.one for a in F.elements()[1:])
    return out


def test_criterion_1_fermat(verdict):
    t = time.perf_counter()
    rep = fermat_report()
    verdict(1, all(rep.values()), f"a^(q-1)=1 for all nonzero a, q in {sorted(rep)}", time.perf_counter() - t, 1)


# ---------------------------------------------------------------------------
# 2. arithmetization equivalence


def arithmetization_report(seed=2024, count=500):
    fields = [make_field(2), make_field(3), make_field(2, 2)]
    rng = random.Random(seed)
    checked = mismatches = bound_violations = 0
    for _ in range(count):
        n = rng.randint(1, 10)
        c = random_bool_circuit(rng, n, rng.randint(1, 200))
        pts = all_assignments(n)
        want = eval_bool_batch(c, pts).astype(np.int64)
        sm = c.metrics()
        for F in fields:
            a, _ = arithmetize_circuit(c, F)
            mismatches += int((eval_arith_batch(a, pts) != want).sum())
            tm = a.metrics()
            bound_violations += tm.size > 4 * sm.size + 1 or tm.depth > 3 * sm.depth + 1
            checked += len(pts)
    return {"circuits": count, "evaluations": checked, "mismatches": mismatches, "bound_violations": bound_violations}


def test_criterion_2_arithmetization(verdict):
    t = time.perf_counter()
    rep = arithmetization_report()
    ok = rep["mismatches"] == 0 and rep["bound_violations"] == 0
    verdict(2, ok, f"{rep['circuits']} circuits x 3 fields, {rep['evaluations']} evaluations, "
            f"{rep['mismatches']} mismatches, {rep['bound_violations']} bound violations", time.perf_counter() - t, 30)


# ---------------------------------------------------------------------------
# 3. R gadget


def r_gadget_report():
    out = {}
    for q, pk in FIELD_PARAMS.items():
        F = make_field(*pk)
        R = build_R(F)
        vals = {a.index: eval_arith(R, [a])[0] for a in F.elements()}
        out[q] = all((not v.is_zero()) == (i in (0, 1)) for i, v in vals.items()) and vals[0] == vals[1] == F.one
    return out


def test_criterion_3_r_gadget(verdict):
    t = time.perf_counter()
    rep = r_gadget_report()
    verdict(3, all(rep.values()), f"R(a)!=0 iff a in {{0,1}}, R(0)=R(1)=1, q in {sorted(rep)}", time.perf_counter() - t, 1)


# ---------------------------------------------------------------------------
# 4. encoding


def encoding_report(seed=4, random_strings=100_000):
    profiles = [mini_profile(), paper_profile(1), paper_profile(2)]
    roundtrips = failures = 0
    for pr in profiles:
        for f in enumerate_instances(pr.n):
            roundtrips += 1
            failures += decode(encode(pr.n, f, pr)) != f
    v_checked = v_mismatch = 0
    rng = np.random.default_rng(seed)
    for pr in profiles:
        V = build_V(pr.n, pr)
        valid = np.asarray([encode(pr.n, f, pr).bits for f in enumerate_instances(pr.n)])
        v_mismatch += int((~eval_bool_batch(V, valid)[:, 0]).sum())
        v_checked += len(valid)
    pr = paper_profile(2)
    V = build_V(2, pr)
    pts = rng.integers(0, 2, size=(random_strings, pr.total_length))
    got = eval_bool_batch(V, pts)[:, 0]
    want = np.fromiter((is_valid_encoding(BitString(tuple(row), pr)) for row in pts.tolist()), dtype=bool, count=len(pts))
    v_mismatch += int((got != want).sum())
    v_checked += len(pts)
    return {"roundtrips": roundtrips, "roundtrip_failures": failures, "v_checked": v_checked, "v_mismatches": v_mismatch}


def test_criterion_4_encoding(verdict):
    t = time.perf_counter()
    rep = encoding_report()
    ok = rep["roundtrip_failures"] == 0 and rep["v_mismatches"] == 0
    verdict(4, ok, f"{rep['roundtrips']} round trips, V checked on {rep['v_checked']} strings, "
            f"{rep['v_mismatches']} mismatches", time.perf_counter() - t, 30)


# ---------------------------------------------------------------------------
# 5. self-reduction


def self_reduction_report(chunk=1 << 21):
    instances = violations = 0
    # n <= 2 through the scalar functions, n = 3 through the mask space
    for n in (0, 1, 2):
        for f in enumerate_instances(n):
            instances += 1
            if f.body == "FORMULA":
                violations += brute_force_sat(f) != (brute_force_sat(substitute(f, 0)) or brute_force_sat(substitute(f, 1)))
    space = ClauseSetSpace(3)
    instances += 2
    for start in range(1, space.size, chunk):
        masks = np.arange(start, min(space.size, start + chunk), dtype=np.uint64)
        sat = space.sat(masks)
        k0, m0 = space.substitute(masks, 0)
        k1, m1 = space.substitute(masks, 1)
        violations += int((sat != (space.sat_kind(k0, m0) | space.sat_kind(k1, m1))).sum())
        instances += len(masks)
    s_checked = s_failures = 0
    for pr in (mini_profile(), paper_profile(1), paper_profile(2)):
        insts = list(enumerate_instances(pr.n))
        enc = np.asarray([encode(pr.n, f, pr).bits for f in insts])
        for value in (0, 1):
            out = eval_bool_batch(build_S(pr.n, pr, value), enc).astype(int)
            for f, row in zip(insts, out.tolist()):
                s_checked += 1
                s_failures += decode(BitString(tuple(row), pr)) != substitute(f, value)
    return {"instances": instances, "violations": violations, "s_checked": s_checked, "s_failures": s_failures}


def test_criterion_5_self_reduction(verdict):
    t = time.perf_counter()
    rep = self_reduction_report()
    ok = rep["violations"] == 0 and rep["s_failures"] == 0 and rep["instances"] == 2 + 5 + 257 + 2 + 2**26 - 1
    verdict(5, ok, f"{rep['instances']} instances n<=3, {rep['violations']} violations; "
            f"S_i checked on {rep['s_checked']} encodings, {rep['s_failures']} failures", time.perf_counter() - t, 30)


def test_clause_space_is_faithful_on_sample():
    space = ClauseSetSpace(3)
    masks = np.random.default_rng(55).integers(1, space.size, size=2000, dtype=np.uint64)
    sat = space.sat(masks)
    for value in (0, 1):
        kinds, out = space.substitute(masks, value)
        for m, s, k, o in zip(masks.tolist(), sat, kinds, out.tolist()):
            f = space.to_instance(KIND_FORMULA, m)
            assert s == brute_force_sat(f)
            assert space.to_instance(int(k), o) == substitute(f, value)


# ---------------------------------------------------------------------------
# 6. mini-profile equivalence


def mini_equivalence_report(seed=0, behavioral=20):
    pr = mini_profile()
    dec = synth_decider(1, pr)
    suite = mutant_suite(dec, 1, pr, behavioral=behavioral, seed=seed)
    out = {"mutants": [m.note.to_dict() | {"kind": m.classification.kind} for m in suite], "fields": {}}
    for F in (make_field(2), make_field(3)):
        correct = exhaustive_test(build_A_star(dec, 1, pr, F).A_star)
        rows = {"correct": type(correct).__name__, "points": F.q**9, "refuted": 0, "masked_zero": 0, "witnesses": []}
        for m in suite:
            v = exhaustive_test(build_A_star(m.circuit, 1, pr, F).A_star)
            if m.classification.kind == "BEHAVIORAL":
                if isinstance(v, NonzeroWitness):
                    check_witness(build_A_star(m.circuit, 1, pr, F).A_star, v)
                    rows["refuted"] += 1
                    rows["witnesses"].append(v.to_dict())
            else:
                rows["masked_zero"] += isinstance(v, IdenticallyZero)
        out["fields"][F.literal] = rows
    out["behavioral"] = sum(m.classification.kind == "BEHAVIORAL" for m in suite)
    out["masked"] = len(suite) - out["behavioral"]
    return out


def test_criterion_6_mini_equivalence(verdict):
    t = time.perf_counter()
    rep = mini_equivalence_report()
    ok = rep["behavioral"] >= 20 and all(
        r["correct"] == "IdenticallyZero" and r["refuted"] == rep["behavioral"] and r["masked_zero"] == rep["masked"]
        for r in rep["fields"].values()
    )
    parts = [f"GF({k}): zero on {r['points']} points, {r['refuted']}/{rep['behavioral']} refuted, "
             f"{r['masked_zero']}/{rep['masked']} masked zero" for k, r in rep["fields"].items()]
    verdict(6, ok, "; ".join(parts), time.perf_counter() - t, 60)


# ---------------------------------------------------------------------------
# 7. paper profile n = 2


def paper_report(seed=7, uniform_trials=10_000):
    pr = paper_profile(2)
    F = make_field(2)
    dec = synth_decider(2, pr)
    f = ThreeSatInstance.from_ints(2, [[1, 2], [-1]])
    target = encode(2, f, pr)
    mutant = single_encoding_mutant(dec, target)
    structured = Cfg("structured", 3 * 257)
    good = run_pipeline(dec, 2, pr, F, [structured], seed, {"kind": "synthesized"})
    bad = run_pipeline(mutant, 2, pr, F, [structured, Cfg("uniform", uniform_trials)], seed,
                       {"kind": "single_encoding_mutant", "target": str(target)})
    return {"target": str(f), "correct": good.to_dict(timings=False), "mutant": bad.to_dict(timings=False)}


def test_criterion_7_paper_profile(verdict):
    t = time.perf_counter()
    rep = paper_report()
    good = rep["correct"]["verdicts"][0]["verdict"]
    s_bad, u_bad = (v["verdict"] for v in rep["mutant"]["verdicts"])
    ok = (
        good["outcome"] == "IdenticallyZero" and good["method"] == "structured"
        and s_bad["outcome"] == "NonzeroWitness"
        and u_bad == Inconclusive(10_000, "uniform").to_dict()
        and rep["mutant"]["oracle"]["disagreements"] == [rep["target"]]
    )
    verdict(7, ok, f"correct -> {good['outcome']}({good.get('method')}); single-encoding mutant -> "
            f"structured {s_bad['outcome']}, uniform x10^4 {u_bad['outcome']}", time.perf_counter() - t, 120)


# ---------------------------------------------------------------------------
# 8. symbolic oracle agreement


def vanishing_circuit(rng, F, n):
    """A random polynomial times (x_i^q - x_i): zero as a function, nonzero formally."""
    base = random_arith_circuit(rng, F, n, rng.randint(1, 25))
    b = ArithBuilder(F, n)
    (p,) = b.inline(base, b.inputs())
    i = rng.randrange(n)
    return b.build([b.mul(p, b.sub(b.power(i, F.q), i))])


def symbolic_report(seed=8, count=200):
    rows = {}
    for F in (make_field(2), make_field(3)):
        rng = random.Random(seed * 31 + F.q)
        agree = zeros = total = 0
        for t in range(count):
            n = rng.randint(1, 6)
            if t % 3 == 0:
                c = vanishing_circuit(rng, F, n)
            else:
                c = random_arith_circuit(rng, F, n, rng.randint(1, 40))
            assert len(c.gates) <= 40
            sym = symbolic_canonical(c).is_zero()
            exh = isinstance(exhaustive_test(c), IdenticallyZero)
            agree += sym == exh
            zeros += exh
            total += 1
        rows[F.literal] = {"circuits": total, "agree": agree, "zero": zeros}
    return rows


def test_criterion_8_symbolic_agreement(verdict):
    t = time.perf_counter()
    rep = symbolic_report()
    ok = all(r["agree"] == r["circuits"] and 0 < r["zero"] < r["circuits"] for r in rep.values())
    detail = "; ".join(f"GF({k}): {r['agree']}/{r['circuits']} agree ({r['zero']} zero)" for k, r in rep.items())
    verdict(8, ok, detail, time.perf_counter() - t, 60)


# ---------------------------------------------------------------------------
# 9. reproducibility


def test_criterion_9_reproducibility(verdict):
    t = time.perf_counter()
    producers = {
        "fermat": fermat_report,
        "r_gadget": r_gadget_report,
        "arithmetization": lambda: arithmetization_report(count=60),
        "mini_equivalence": lambda: mini_equivalence_report(behavioral=5),
        "symbolic": lambda: symbolic_report(count=40),
        "pipeline_mini": lambda: run_pipeline(
            synth_decider(1, mini_profile()), 1, mini_profile(), make_field(3),
            [Cfg("exhaustive"), Cfg("uniform", 500)], 9).to_dict(timings=False),
        "paper": lambda: paper_report(uniform_trials=500),
    }
    same = []
    for name, make in producers.items():
        first = json.dumps(make(), sort_keys=True)
        second = json.dumps(make(), sort_keys=True)
        same.append(first == second)
    verdict(9, all(same), f"{sum(same)}/{len(same)} reports byte-identical on rerun (timings excluded)",
            time.perf_counter() - t, 120)
