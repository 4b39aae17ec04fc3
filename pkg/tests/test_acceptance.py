"""Acceptance suite: the exit criteria, one test (and one printed line) each.

Every check is exact rational arithmetic, zero numerical tolerance; the
stated wall-clock budgets are asserted.  Run with ``pytest -s`` to see the
per-criterion lines inline.
"""

import json
import os
import subprocess
import sys
import time
from fractions import Fraction
from itertools import product

from loopalg.affine import build_parahoric, hyperspecial, iwahori
from loopalg.hitchin import (
    invariant_system,
    residue_diagram,
    torus_invariant_generator,
    verify_containment,
    verify_rs_image,
    verify_surjectivity,
)
from loopalg.opers import (
    check_irregular_type,
    check_residue_rs,
    cyclic_ode,
    fg_connection,
    global_hitchin_base,
    global_oper_space,
    slope_certificate,
)
from loopalg.rootdata import CartanType, build_root_datum, fundamental_degrees, principal_triple

TYPES = ["A1", "A2", "A3", "A4", "C2", "G2"]

INTERMEDIATE = {
    "A1": (0, 1),
    "A2": (1, 1, 0),
    "A3": (1, 0, 1, 0),
    "A4": (1, 1, 0, 0, 0),
    "C2": (0, 1, 0),
    "G2": (1, 1, 0),
}

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "golden")


def rd_of(name):
    return build_root_datum(CartanType.parse(name))


def report(num, label, t0):
    line = f"ACCEPTANCE {num}: PASS  {label}  ({time.time() - t0:.1f}s)\n"
    sys.__stdout__.write(line)
    sys.__stdout__.flush()


def test_criterion_1_root_data_suite():
    t0 = time.time()
    for name in TYPES:
        rd = rd_of(name)
        basis = [rd.basis_vec(i) for i in range(rd.dim)]
        for i in range(rd.dim):
            for j in range(i + 1, rd.dim):
                bij = rd.bracket(basis[i], basis[j])
                for k in range(j + 1, rd.dim):
                    lhs = rd.bracket(bij, basis[k])
                    mid = rd.bracket(rd.bracket(basis[j], basis[k]), basis[i])
                    rhs = rd.bracket(rd.bracket(basis[k], basis[i]), basis[j])
                    assert all(x + y + z == 0 for x, y, z in zip(lhs, mid, rhs))
        degs = fundamental_degrees(rd)
        assert sum(2 * d - 1 for d in degs) == rd.dim
        t = principal_triple(rd)
        e, h, f = t.as_vecs()
        assert rd.bracket(h, e) == [2 * c for c in e]
        assert rd.bracket(h, f) == [-2 * c for c in f]
        assert rd.bracket(e, f) == h
    elapsed = time.time() - t0
    assert elapsed < 10, f"root-data suite took {elapsed:.1f}s"
    report(1, "root data: Jacobi, dimension count, sl2 relations", t0)


def test_criterion_2_containment():
    t0 = time.time()
    for name in TYPES:
        rd = rd_of(name)
        inv = invariant_system(rd)
        parahorics = [iwahori(rd), hyperspecial(rd), build_parahoric(rd, INTERMEDIATE[name])]
        for p in parahorics:
            for n in (0, 1, 2):
                rep = verify_containment(inv, p, n, samples=100, seed=7)
                assert rep["status"] == "pass"
    elapsed = time.time() - t0
    assert elapsed < 120, f"containment sweep took {elapsed:.1f}s"
    report(2, "order-bound containment, 100 samples x 3 parahorics x n in {0,1,2}", t0)


def test_criterion_3_surjectivity_sharpness():
    t0 = time.time()
    for name in TYPES:
        rd = rd_of(name)
        rep = verify_surjectivity(invariant_system(rd), iwahori(rd), n=2, trials=25, seed=3)
        assert rep["status"] == "pass"
        assert all(rep["boundary_attained"]), name
        m = rd.coxeter_number
        degs = list(fundamental_degrees(rd))
        assert rep["boundary_orders"] == [d + d // m for d in degs]
    elapsed = time.time() - t0
    assert elapsed < 60, f"surjectivity took {elapsed:.1f}s"
    report(3, "level-2 slice round trips with boundary orders attained", t0)


def test_criterion_4_level_one_fullness():
    t0 = time.time()
    for name in TYPES:
        rd = rd_of(name)
        inv = invariant_system(rd)
        for coords in product([0, 1], repeat=rd.rank + 1):
            if not any(coords):
                continue
            rep = verify_rs_image(inv, build_parahoric(rd, coords), seed=9)
            assert rep["attained_orders"] == list(inv.degrees)
    elapsed = time.time() - t0
    assert elapsed < 60, f"level-1 fullness took {elapsed:.1f}s"
    report(4, "level-1 boundary orders attained for every standard parahoric", t0)


def test_criterion_5_residue_square():
    t0 = time.time()
    expected_scalars = {"A1": "-1", "A2": "1", "A3": "-1", "A4": "1", "C2": "1/4", "G2": "-1/432"}
    for name in TYPES:
        rd = rd_of(name)
        rep = residue_diagram(invariant_system(rd), iwahori(rd), samples=50, seed=1)
        assert rep["status"] == "pass"
        assert rep["scalar"] == expected_scalars[name], name
    report(5, "residue square commutes up to the recorded per-type scalar", t0)


def test_criterion_6_global_spaces():
    t0 = time.time()
    for name in TYPES:
        rd = rd_of(name)
        space = global_oper_space(rd)
        assert space["dimension"] == 1 and "e_theta" in space["basis"]
        base = global_hitchin_base(rd)
        assert base["dimension"] == 1
    report(6, "global two-point space and global base both one-dimensional", t0)


def test_criterion_7_rigid_connection():
    t0 = time.time()
    for name in TYPES:
        rd = rd_of(name)
        for a in (Fraction(1), Fraction(-2), Fraction(3, 5)):
            op = fg_connection(rd, a)
            assert check_residue_rs(op), (name, a)
            assert check_irregular_type(op), (name, a)
        cert = slope_certificate(fg_connection(rd, Fraction(1)))
        assert cert["regular_semisimple"] is True
    # the A1 scalar reduction must be the Bessel-type operator z y'' + y' - a y
    for a in (Fraction(1), Fraction(3, 5)):
        ode = cyclic_ode(fg_connection(rd_of("A1"), a))
        assert ode["order"] == 2
        c0, c1 = ode["coefficients_raw"]
        assert c1.num.cs == [Fraction(1)] and c1.den.cs == [Fraction(0), Fraction(1)]
        assert c0.num.cs == [-a] and c0.den.cs == [Fraction(0), Fraction(1)]
    report(7, "rigid connection: local checks, slope certificates, Bessel reduction", t0)


def test_criterion_8_invariant_generator():
    t0 = time.time()
    for name, labels in (("A1", [1, 1]), ("A2", [1, 1, 1]), ("G2", [1, 2, 3])):
        rd = rd_of(name)
        rep = torus_invariant_generator(iwahori(rd))
        assert rep["exponents"] == labels
        assert rep["degree_cap"] == 2 * rd.coxeter_number
    elapsed = time.time() - t0
    assert elapsed < 10, f"invariant generator took {elapsed:.1f}s"
    report(8, "torus-invariant generator equals the marks; lattice check to 2h", t0)


def test_criterion_9_cli_determinism_and_goldens():
    t0 = time.time()
    env = dict(os.environ)
    env.pop("LOOPALG_GOLDEN_DIR", None)

    def run(*args):
        return subprocess.run(
            [sys.executable, "-m", "loopalg.cli", *args], capture_output=True, text=True, env=env
        )

    args = ("verify", "size-of-image", "--type", "C2", "--kac", "1,0,1",
            "--n", "2", "--samples", "40", "--seed", "13")
    a, b = run(*args), run(*args)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout
    with open(os.path.join(GOLDEN_DIR, "manifest.json")) as fh:
        manifest = json.load(fh)
    for fname, cli_args in sorted(manifest.items()):
        r = run(*cli_args)
        assert r.returncode == 0, (fname, r.stderr)
        with open(os.path.join(GOLDEN_DIR, fname)) as fh:
            assert r.stdout == fh.read(), f"golden drift in {fname}"
    report(9, "byte-identical CLI reruns and golden-file comparison", t0)
