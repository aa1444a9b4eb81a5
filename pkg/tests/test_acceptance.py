"""Acceptance criteria, one test each, with a printed PASS/FAIL line per criterion."""

import os
import random
import subprocess
import sys
import time
from fractions import Fraction as F
from pathlib import Path

import numpy as np

from surfdist.classifier import classify_surface
from surfdist.document import Document, parse_input, serialize
from surfdist.growth import GrowthClass as G, superadditive_closure, superadditive_closure_values
from surfdist.model import almost_fiber
from surfdist.spirality import (
    Traversal,
    is_trivial,
    lambda_bound,
    lambda_by_enumeration,
    max_closed_walk_weight,
    spirality,
    xi,
)
from surfdist.witness import Crossing, TraceConfig, XiPeriod, build_witness, trace_bounds, verify_witness

from helpers import GF, GI, H, V, random_instance, random_trivial_instance

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def test_criterion_1_decision_table(criterion):
    expected = {
        "single_horizontal": G.LINEAR,
        "two_horizontal_trivial": G.QUADRATIC,
        "two_horizontal_spiral": G.EXPONENTIAL,
        "gi_trivial_loop": G.EXPONENTIAL,
        "gi_spiral_loop": G.DOUBLE_EXPONENTIAL,
        "all_vertical": G.LINEAR,
    }
    start = time.perf_counter()
    got = {}
    for name in expected:
        doc = parse_input((SAMPLES / f"{name}.json").read_bytes())
        got[name] = classify_surface(doc.manifold, doc.surface).overall
    elapsed = time.perf_counter() - start
    ok = got == expected and elapsed < 1.0
    criterion(1, "decision table on minimal documents", ok, f"{elapsed * 1000:.1f} ms")
    assert ok, got


def test_criterion_2_spirality_oracle(criterion):
    rng = random.Random(20261016)
    start = time.perf_counter()
    checked = mismatches = 0
    for _ in range(500):
        _, s = random_instance(rng, max_pieces=6, max_curves=10, hmax=6)
        for c in almost_fiber(s):
            # max over closed walks of length <= 10; reversal inverts weights,
            # so max == 1 means every closed walk has weight 1
            top = max_closed_walk_weight(s, c, 10)
            oracle = top is None or top == 1
            mismatches += is_trivial(spirality(s, c)) != oracle
            checked += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 60
    criterion(2, "is_trivial agrees with closed-walk enumeration", ok, f"{checked} components, {elapsed:.1f} s")
    assert ok


def test_criterion_3_lambda_tightness(criterion):
    rng = random.Random(7)
    checked = mismatches = 0
    while checked < 200:
        (_, s), _ = random_trivial_instance(rng, max_pieces=6, max_curves=10)
        for c in almost_fiber(s):
            mismatches += lambda_bound(s, c) != lambda_by_enumeration(s, c, 2 * len(c.curves))
            checked += 1
    ok = mismatches == 0
    criterion(3, "lambda_bound equals enumeration with max_len = 2|curves|", ok, f"{checked} components")
    assert ok


def test_criterion_4_witness_certificates(criterion):
    rng = random.Random(4)
    failures = 0
    for _ in range(200):
        m = rng.randint(1, 5)
        period = XiPeriod(tuple(F(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(m)))
        mu = F(rng.randint(1, 20), rng.randint(1, 5))
        failures += not verify_witness(build_witness(period, mu, 200)).ok
    ok = failures == 0
    criterion(4, "witness sequences pass every certificate", ok, f"200 periods, {failures} failures")
    assert ok


def _walk_crossings(s, c, rng, k):
    at = rng.choice(c.pieces)
    out = []
    for _ in range(k):
        t = rng.choice([Traversal(cv.id, cv.piece_a == at) for cv in s.incident[at]])
        cv = s.curve_map[t.curve]
        at = cv.piece_b if t.forward else cv.piece_a
        out.append(Crossing(xi(s, t)))
    return out


def test_criterion_5_crossing_bounds(criterion):
    rng = random.Random(5)
    uniform_ok = True
    instances = 0
    while instances < 20:
        (_, s), _ = random_trivial_instance(rng, max_pieces=6, max_curves=10, connected=True)
        (c,) = almost_fiber(s)
        if not c.curves:
            continue
        instances += 1
        lam = lambda_bound(s, c)
        cs = _walk_crossings(s, c, rng, 200)
        for n in range(1, 201):
            prefix = tuple(cs[:n])
            rep = trace_bounds(TraceConfig(crossings=prefix, Lambda=lam, epsilon=max(x.xi for x in prefix)))
            uniform_ok &= rep.claim3 == lam * n and rep.claim3_holds

    rep = trace_bounds(TraceConfig(crossings=(Crossing(F(2)),) * 40, epsilon=F(2)))
    n = rep.n
    beats = all(rep.b[-1] > C * n for C in (1, 10, 10**3, 10**6, 10**9))
    ok = uniform_ok and beats and rep.claim2_holds
    criterion(
        5,
        "b_j <= Lambda L'n on trivial walks; geometric-sum bound and superlinear b at n = 40",
        ok,
        f"b_40 = {float(rep.b[-1]):.3g}",
    )
    assert ok


def _r_squared(x, y):
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    return 1 - float(resid @ resid) / float(((y - y.mean()) ** 2).sum())


def test_criterion_6_growth_dichotomy(criterion):
    ns = np.arange(4, 25, dtype=float)
    flat = [trace_bounds(TraceConfig(crossings=(Crossing(F(1)),) * int(n))).log_sum for n in ns]
    steep = [trace_bounds(TraceConfig(crossings=(Crossing(F(2)),) * int(n))).log_sum for n in ns]
    r_flat = _r_squared(ns, np.array(flat))
    r_steep = _r_squared(ns, np.log(np.array(steep)))
    ok = r_flat >= 0.99 and r_steep >= 0.99
    criterion(6, "log_sum linear for xi = 1, log(log_sum) linear for xi = 2", ok, f"R2 = {r_flat:.5f}, {r_steep:.5f}")
    assert ok


def test_criterion_7_closure_fixpoints(criterion):
    reps = {"n": lambda n: n, "n^2": lambda n: n * n, "2^n": lambda n: 2**n}
    ok = all(superadditive_closure_values(f, 200)[1:] == [f(n) for n in range(1, 201)] for f in reps.values())
    ok &= all(superadditive_closure(g) is g for g in G)
    criterion(7, "superadditive closure fixes n, n^2, 2^n up to 200", ok)
    assert ok


def _corpus():
    docs = [parse_input(p.read_bytes()) for p in sorted(SAMPLES.glob("*.json")) if not p.name.startswith("trace")]
    rng = random.Random(8)
    while len(docs) < 30:
        m, s = random_instance(rng, kinds=(H, V, GF, GI), hmax=5)
        td = {"L_prime": F(rng.randint(1, 4), rng.randint(1, 4))} if rng.random() < 0.3 else None
        docs.append(Document(m, s, td))
    return docs


def test_criterion_8_round_trip_and_determinism(criterion, tmp_path):
    docs = _corpus()
    round_trip = True
    for doc in docs:
        text = serialize(doc)
        back = parse_input(text.encode())
        round_trip &= back == doc and serialize(back) == text

    paths = []
    for i, doc in enumerate(docs):
        path = tmp_path / f"doc{i:02d}.json"
        path.write_text(serialize(doc))
        paths.append(str(path))
    script = (
        "import sys\n"
        "from surfdist.cli import main\n"
        "for p in sys.argv[1:]:\n"
        "    main(['report', p, '--format', 'json']); main(['report', p])\n"
    )
    outputs = []
    for seed, locale in (("1", "C"), ("987", "C.UTF-8")):
        env = dict(os.environ, PYTHONHASHSEED=seed, LC_ALL=locale)
        proc = subprocess.run([sys.executable, "-c", script, *paths], capture_output=True, env=env, check=True)
        outputs.append(proc.stdout)
    identical = outputs[0] == outputs[1] and len(outputs[0]) > 0
    ok = round_trip and identical
    criterion(8, "canonical round trip and byte-identical reports", ok, f"{len(docs)} documents")
    assert ok


if __name__ == "__main__":
    import pytest

    sys.exit(pytest.main([__file__, "-q"]))
