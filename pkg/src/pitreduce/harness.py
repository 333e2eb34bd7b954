"""End-to-end checks: decider circuits, mutants, reductions, PIT, reports."""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .arithmetize import arithmetize_circuit
from .circuit import BoolBuilder, BoolCircuit, CircuitError, Gate, eval_bool_batch
from .gf import FieldSpec
from .pit import (
    IdenticallyZero,
    InconsistencyError,
    NonzeroWitness,
    PitError,
    exhaustive_test,
    sample_test,
    symbolic_test,
)
from .reduction import ReductionBundle, _index_is, _Layout, build_A_star, build_V
from .sat3 import (
    ENUMERATION_CAP,
    BitString,
    EncodingProfile,
    brute_force_sat,
    encode,
    enumerate_instances,
)

DECIDER_CAP = 3
MUTATION_OPS = ("flip_gate_kind", "negate_output", "rewire_operand", "stuck_at")


def synth_decider(n: int, profile: EncodingProfile, cap: int = DECIDER_CAP) -> BoolCircuit:
    """Decode-and-evaluate decider: OR over all 2^n assignments of AND over clause slots.

    On valid encodings it agrees with :func:`brute_force_sat`.  On invalid
    encodings it returns whatever the formula path computes: tag 01 -> 1,
    tag 1x -> 0, tag 00 -> the slot-by-slot evaluation.
    """
    if n > cap:
        raise ValueError(f"decider synthesis at n={n} exceeds cap {cap}")
    if profile.n != n:
        raise CircuitError(f"profile is for n={profile.n}, not {n}")
    b = BoolBuilder(profile.total_length)
    lay = _Layout(profile, b.inputs())
    t0, t1 = lay.tag
    index_is = [[[_index_is(b, s.index, j) for j in range(1, n + 1)] for s in slots] for slots in lay.slots]

    per_assignment = []
    for alpha in product((0, 1), repeat=n):
        clause_ok = []
        for c, slots in enumerate(lay.slots):
            lits = []
            for l, s in enumerate(slots):
                agrees = [b.and_(index_is[c][l][j], s.sign if alpha[j] else b.not_(s.sign)) for j in range(n)]
                lits.append(b.and_(s.active, b.any_(agrees)))
            clause_ok.append(b.or_(b.not_(slots[0].active), b.any_(lits)))
        per_assignment.append(b.all_(clause_ok))
    formula = b.any_(per_assignment)
    is_true = b.and_(b.not_(t0), t1)
    is_formula = b.and_(b.not_(t0), b.not_(t1))
    return b.build([b.or_(is_true, b.and_(is_formula, formula))])


# ---------------------------------------------------------------------------
# mutation


@dataclass(frozen=True)
class MutationNote:
    op: str
    seed: int
    gate: int | None
    detail: str

    def to_dict(self) -> dict:
        return {"op": self.op, "seed": self.seed, "gate": self.gate, "detail": self.detail}


def mutate(c: BoolCircuit, op: str, seed: int, bit: int | None = None) -> tuple[BoolCircuit, MutationNote]:
    """Apply one localized change chosen by ``seed``."""
    if op in ("stuck_at_0", "stuck_at_1"):
        op, bit = "stuck_at", int(op[-1])
    if not c.gates:
        raise CircuitError("cannot mutate a circuit without gates")
    rng = random.Random(seed)
    gates = list(c.gates)
    n = c.n_inputs
    outputs = list(c.outputs)
    if op == "flip_gate_kind":
        cands = [j for j, g in enumerate(gates) if g.kind in ("AND", "OR")]
        if not cands:
            raise CircuitError("no AND/OR gate to flip")
        j = rng.choice(cands)
        new = "OR" if gates[j].kind == "AND" else "AND"
        gates[j] = Gate(new, gates[j].args)
        note = MutationNote(op, seed, j, f"g{j} {c.gates[j].kind} -> {new}")
    elif op == "negate_output":
        t = rng.randrange(len(outputs))
        gates.append(Gate("NOT", (outputs[t],)))
        outputs[t] = n + len(gates) - 1
        note = MutationNote(op, seed, len(gates) - 1, f"output {t} negated")
    elif op == "rewire_operand":
        cands = [j for j, g in enumerate(gates) if g.args and n + j > 1]
        if not cands:
            raise CircuitError("no gate with a rewirable operand")
        j = rng.choice(cands)
        pos = rng.randrange(len(gates[j].args))
        old = gates[j].args[pos]
        new_ref = rng.randrange(n + j - 1)
        if new_ref >= old:
            new_ref += 1
        args = list(gates[j].args)
        args[pos] = new_ref
        gates[j] = Gate(gates[j].kind, tuple(args))
        note = MutationNote(op, seed, j, f"g{j} operand {pos}: {c.ref_name(old)} -> {c.ref_name(new_ref)}")
    elif op == "stuck_at":
        if bit not in (0, 1):
            raise CircuitError("stuck_at needs bit 0 or 1")
        j = rng.randrange(len(gates))
        gates[j] = Gate("CONST1" if bit else "CONST0")
        note = MutationNote(f"stuck_at_{bit}", seed, j, f"g{j} {c.gates[j].kind} stuck at {bit}")
    else:
        raise CircuitError(f"unknown mutation op {op!r}")
    return BoolCircuit(n, tuple(gates), tuple(outputs), fanin=c.fanin), note


def single_encoding_mutant(decider: BoolCircuit, target: BitString) -> BoolCircuit:
    """Flip the decider's answer on exactly one input string."""
    b = BoolBuilder(decider.n_inputs)
    (out,) = b.inline(decider, b.inputs())
    hit = b.all_([x if bit else b.not_(x) for x, bit in zip(b.inputs(), target.bits)])
    return b.build([b.xor(out, hit)])


def off_encoding_mutant(decider: BoolCircuit, n: int, profile: EncodingProfile) -> BoolCircuit:
    """Flip the decider's answer on every invalid encoding, keep it on valid ones."""
    b = BoolBuilder(decider.n_inputs)
    (out,) = b.inline(decider, b.inputs())
    (valid,) = b.inline(build_V(n, profile), b.inputs())
    return b.build([b.xnor(out, valid)])


@dataclass(frozen=True)
class Classification:
    kind: str  # BEHAVIORAL | MASKED
    checked: int
    disagreements: tuple[str, ...]

    def to_dict(self) -> dict:
        return {"kind": self.kind, "checked": self.checked, "disagreements": list(self.disagreements)}


def classify(decider: BoolCircuit, n: int, profile: EncodingProfile) -> Classification:
    """Compare against brute force on every valid encoding."""
    if n > ENUMERATION_CAP:
        raise ValueError(f"oracle sweep at n={n} exceeds the enumeration cap {ENUMERATION_CAP}")
    insts = list(enumerate_instances(n))
    enc = np.asarray([encode(n, f, profile).bits for f in insts], dtype=np.int64)
    got = eval_bool_batch(decider, enc)[:, 0]
    bad = tuple(str(f) for f, g in zip(insts, got) if bool(g) != brute_force_sat(f))
    return Classification("BEHAVIORAL" if bad else "MASKED", len(insts), bad)


@dataclass(frozen=True)
class Mutant:
    circuit: BoolCircuit
    note: MutationNote
    classification: Classification


def mutant_suite(
    decider: BoolCircuit, n: int, profile: EncodingProfile, behavioral: int = 20, seed: int = 0, max_tries: int = 2000
) -> list[Mutant]:
    """Seeded mutants (ops in rotation) until ``behavioral`` BEHAVIORAL ones were produced."""
    ops = ["flip_gate_kind", "negate_output", "rewire_operand", "stuck_at_0", "stuck_at_1"]
    out: list[Mutant] = []
    found = 0
    for i in range(max_tries):
        if found >= behavioral:
            break
        op = ops[i % len(ops)]
        mseed = seed * 100003 + i
        try:
            circ, note = mutate(decider, op, mseed)
        except CircuitError:
            continue
        cls = classify(circ, n, profile)
        out.append(Mutant(circ, note, cls))
        found += cls.kind == "BEHAVIORAL"
    return out


# ---------------------------------------------------------------------------
# pipeline


@dataclass
class TesterConfig:
    name: str  # exhaustive | symbolic | uniform | structured
    trials: int = 1000

    @classmethod
    def parse(cls, text: str) -> TesterConfig:
        name, _, trials = text.partition(":")
        if name not in ("exhaustive", "symbolic", "uniform", "structured"):
            raise ValueError(f"unknown tester {name!r}")
        return cls(name, int(trials) if trials else 1000)


COMPLETE_TESTERS = ("exhaustive", "symbolic")


@dataclass
class PipelineReport:
    parameters: dict
    provenance: dict
    bundle: dict
    arithmetization: dict
    verdicts: list
    oracle: dict
    equivalence: str
    timings: dict = field(default_factory=dict)

    def to_dict(self, timings: bool = True) -> dict:
        d = {
            "parameters": self.parameters,
            "provenance": self.provenance,
            "bundle": self.bundle,
            "arithmetization": self.arithmetization,
            "verdicts": self.verdicts,
            "oracle": self.oracle,
            "equivalence": self.equivalence,
        }
        if timings:
            d["timings"] = self.timings
        return d

    def to_json(self, timings: bool = True) -> str:
        return json.dumps(self.to_dict(timings), indent=2, sort_keys=True) + "\n"

    def summary(self) -> str:
        p = self.parameters
        lines = [
            f"n={p['n']} profile={p['profile']} field={p['field']} seed={p['seed']}",
            f"decider: {self.provenance.get('kind')}"
            + (f" ({self.provenance['mutation']['detail']})" if "mutation" in self.provenance else ""),
            f"A_star: {self.bundle['circuits']['A_star']['size']} gates, depth {self.bundle['circuits']['A_star']['depth']}",
            f"oracle: {_oracle_line(self.oracle)}",
        ]
        for v in self.verdicts:
            lines.append(f"  {v['tester']:<11} {v['verdict']['outcome']}"
                         + (f" ({v['verdict'].get('method')})" if v['verdict']['outcome'] == "IdenticallyZero" else ""))
        lines.append(f"equivalence: {self.equivalence}")
        return "\n".join(lines)


def _oracle_line(oracle: dict) -> str:
    if not oracle:
        return "not run"
    bad = len(oracle["disagreements"])
    if not bad:
        return f"agrees with brute force on all {oracle['checked']} valid encodings"
    return f"disagrees with brute force on {bad} of {oracle['checked']} valid encodings"


def _run_tester(cfg: TesterConfig, bundle: ReductionBundle, seed: int):
    c = bundle.A_star
    if cfg.name == "exhaustive":
        return exhaustive_test(c)
    if cfg.name == "symbolic":
        return symbolic_test(c)
    if cfg.name == "uniform":
        return sample_test(c, "uniform", cfg.trials, seed)
    return sample_test(c, "valid_encodings", cfg.trials, seed, bundle=bundle)


def run_pipeline(
    decider: BoolCircuit,
    n: int,
    profile: EncodingProfile,
    field: FieldSpec,
    testers: list[TesterConfig],
    seed: int = 0,
    provenance: dict | None = None,
) -> PipelineReport:
    """Build the reduction, run the testers and check both directions of the equivalence.

    Raises :class:`InconsistencyError` when the verdicts contradict the
    oracle (a correct decider refuted, a wrong one certified, or complete
    testers disagreeing).
    """
    if decider.n_inputs != profile.total_length:
        raise CircuitError(f"decider has {decider.n_inputs} inputs, encodings have {profile.total_length} bits")
    timings = {}
    t = time.perf_counter()
    bundle = build_A_star(decider, n, profile, field)
    timings["build"] = time.perf_counter() - t

    arith = {}
    for name, circ in (("decider", decider), ("V", bundle.V), ("S0", bundle.S0), ("S1", bundle.S1)):
        arith[name] = arithmetize_circuit(circ, field)[1].to_dict()

    oracle: dict = {}
    cls = None
    if n <= ENUMERATION_CAP:
        t = time.perf_counter()
        cls = classify(decider, n, profile)
        timings["oracle"] = time.perf_counter() - t
        oracle = cls.to_dict()

    verdicts = []
    results = []
    for cfg in testers:
        t = time.perf_counter()
        v = _run_tester(cfg, bundle, seed)
        timings[f"pit:{cfg.name}"] = time.perf_counter() - t
        results.append((cfg, v))
        verdicts.append({"tester": cfg.name, "trials": cfg.trials, "verdict": v.to_dict()})

    complete = [v for cfg, v in results if cfg.name in COMPLETE_TESTERS or
                (isinstance(v, IdenticallyZero) and v.method == "structured")]
    zeros = [isinstance(v, IdenticallyZero) for v in complete]
    if zeros and any(zeros) and not all(zeros):
        raise InconsistencyError("complete testers disagree on whether A_star is zero")
    witnesses = [v for _, v in results if isinstance(v, NonzeroWitness)]
    if witnesses and any(isinstance(v, IdenticallyZero) for _, v in results):
        raise InconsistencyError("one tester certified zero while another found a witness")

    equivalence = "unchecked"
    if cls is not None:
        if cls.kind == "MASKED":
            if witnesses:
                raise InconsistencyError("A_star refuted a decider that is correct on every valid encoding")
            equivalence = "confirmed: correct on valid encodings, A_star zero" if any(zeros) else "consistent: no witness"
        else:
            if any(zeros):
                raise InconsistencyError("A_star certified zero for a decider the oracle refutes")
            guaranteed = any(cfg.name in COMPLETE_TESTERS for cfg, _ in results) or any(
                cfg.name == "structured" and isinstance(v, NonzeroWitness) for cfg, v in results
            )
            if witnesses:
                equivalence = "confirmed: oracle refutes decider, A_star has a verified witness"
            elif guaranteed:
                raise InconsistencyError("a complete tester missed the witness of a refuted decider")
            else:
                equivalence = "consistent: only incomplete testers ran"

    return PipelineReport(
        parameters={
            "n": n,
            "profile": profile.name,
            "m": profile.total_length,
            "field": field.literal,
            "seed": seed,
            "testers": [f"{c.name}:{c.trials}" for c in testers],
        },
        provenance=provenance or {"kind": "supplied"},
        bundle=bundle.manifest(),
        arithmetization=arith,
        verdicts=verdicts,
        oracle=oracle,
        equivalence=equivalence,
        timings=timings,
    )


def demo(seed: int = 0, mutants: int = 20) -> dict:
    """Mini-profile run of both directions over GF(2) and GF(3)."""
    from .gf import make_field
    from .sat3 import mini_profile

    pr = mini_profile()
    dec = synth_decider(1, pr)
    suite = mutant_suite(dec, 1, pr, behavioral=mutants, seed=seed)
    out = {"fields": {}}
    for q in (2, 3):
        F = make_field(q)
        rep = run_pipeline(dec, 1, pr, F, [TesterConfig("exhaustive")], seed, {"kind": "synthesized"})
        rows = {"correct": rep.verdicts[0]["verdict"]["outcome"], "behavioral": 0, "refuted": 0, "masked": 0, "masked_zero": 0}
        for mu in suite:
            rep_m = run_pipeline(mu.circuit, 1, pr, F, [TesterConfig("exhaustive")], seed,
                                 {"kind": "mutant", "mutation": mu.note.to_dict()})
            outcome = rep_m.verdicts[0]["verdict"]["outcome"]
            if mu.classification.kind == "BEHAVIORAL":
                rows["behavioral"] += 1
                rows["refuted"] += outcome == "NonzeroWitness"
            else:
                rows["masked"] += 1
                rows["masked_zero"] += outcome == "IdenticallyZero"
        out["fields"][F.literal] = rows
    return out


__all__ = [
    "Classification",
    "InconsistencyError",
    "MutationNote",
    "PipelineReport",
    "PitError",
    "TesterConfig",
    "classify",
    "demo",
    "mutant_suite",
    "mutate",
    "off_encoding_mutant",
    "run_pipeline",
    "single_encoding_mutant",
    "synth_decider",
]
